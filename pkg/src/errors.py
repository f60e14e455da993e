"""
Errors Module
=============

Exception hierarchy shared by the pairing layer, the protocols, the simulator
and the security games. Boolean verifiers never raise these for invalid
signatures; they are reserved for malformed input and protocol misuse.
"""
from enum import Enum
from typing import Optional


class VanetError(Exception):
    """Base class for every error raised by this package."""


class BackendMismatchError(VanetError):
    """Elements from different suites were combined."""


class BackendUnavailableError(VanetError):
    """The requested backend cannot be constructed."""


class EncodingError(VanetError, ValueError):
    """Bytes do not decode to a canonical value."""


class CredentialError(VanetError, ValueError):
    """A pseudonym or credential does not match what the operation expects."""


class CommonStringReuseError(VanetError):
    """A short-term pseudonym tried to sign twice under one common string."""


class AggregationError(VanetError, ValueError):
    """Aggregation was asked to combine nothing."""


class AuthenticationError(VanetError):
    """Authenticated decryption failed."""


class RejectReason(str, Enum):
    LENGTH = "length"
    PARSE = "parse"
    EQUATION = "equation"


class SigncryptionRejected(VanetError):
    """De-signcryption rejected an envelope."""

    def __init__(self, reason: RejectReason, detail: str = ""):
        super().__init__(f"{reason.value}: {detail}" if detail else reason.value)
        self.reason = reason


class ScenarioConfigError(VanetError, ValueError):
    """A scenario file or flag is invalid."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class OracleProgrammingError(VanetError):
    """A random-oracle entry was programmed twice."""


class SimulationAbort(VanetError):
    """A reduction simulator hit one of its abort conditions."""


class NoForkError(VanetError):
    """Two forgeries share the same challenge scalar."""


class DegenerateForkError(VanetError):
    """The extractor's scalar coefficient is zero."""


class ExtractionError(VanetError):
    """Extractor preconditions do not hold."""


class ProtocolViolation(VanetError):
    """An adversary used a query surface outside the game's rules."""
