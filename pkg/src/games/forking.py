"""
Forking replay for signcryption forgers.

The forger runs twice with identical randomness. The second run's oracle
table has the H3 entry at the first forgery's (Y || m) pre-programmed to a
different scalar, so every answer before that query matches and the two
forgeries share Y but not h.
"""
import random
from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Tuple

from src.errors import ExtractionError, NoForkError
from src.games.extractors import ForgeryPair
from src.games.oracle_table import OracleId, OracleTable
from src.pairing import Scalar
from src.protocols.signcryption import (
    InnerSignature,
    MasterSecret,
    RequestPlaintext,
    SystemParams,
    extract_vehicle_key,
    signcryption_challenge,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SigncryptionForger(Protocol):
    def __call__(self, params: SystemParams, rng: random.Random) -> Tuple[RequestPlaintext, InnerSignature]:
        ...


@dataclass
class CooperativeForger:
    """
    A forger that holds the real LTK: Y = r*P_V, h = H3(Y||m), Z = (r+h)*LTK.

    Stands in for an existential forger so the extraction algebra can be
    checked exactly.
    """
    master: MasterSecret
    m: RequestPlaintext

    def __call__(self, params: SystemParams, rng: random.Random) -> Tuple[RequestPlaintext, InnerSignature]:
        cred = extract_vehicle_key(params, self.master, self.m.ltp)
        r = params.suite.random_scalar(rng)
        Y = r * cred.P_V
        h = signcryption_challenge(params, Y, self.m.encode(params.pseudonym_bytes))
        return self.m, InnerSignature(Y, (r + h) * cred.LTK)


def _run(
    forger: SigncryptionForger,
    base_params: SystemParams,
    seed: int,
    prepare: Optional[Callable[[OracleTable], None]],
    fork_at: Optional[Tuple[bytes, Scalar]] = None
) -> Tuple[OracleTable, RequestPlaintext, InnerSignature]:
    table = OracleTable(base_params.suite, random.Random(f"oracle:{seed}"))
    if prepare is not None:
        prepare(table)
    if fork_at is not None:
        table.program(OracleId.H3, *fork_at)
    m, sig = forger(base_params.with_oracles(table), random.Random(f"forger:{seed}"))
    return table, m, sig


def fork_signcryption_forger(
    forger: SigncryptionForger,
    base_params: SystemParams,
    seed: int,
    h_hat: Optional[Scalar] = None,
    prepare: Optional[Callable[[OracleTable], None]] = None
) -> ForgeryPair:
    """
    Run `forger` twice on the same tape and return the two related forgeries.

    Args:
        forger: Callable (params, rng) -> (m, InnerSignature).
        base_params: Public parameters; their oracles are replaced per run.
        seed: Seeds both the forger's rng and the table's rng.
        h_hat: H3 answer for the second run; drawn at random (and different
            from the first answer) when omitted.
        prepare: Programs fixed entries into each run's fresh table.

    Raises:
        ExtractionError: the forger never queried H3 or H1 for its output, or
            the second run produced a different (Y, m).
        NoForkError: h_hat equals the first run's answer.
    """
    suite = base_params.suite
    table, m, sig = _run(forger, base_params, seed, prepare)
    m_bytes = m.encode(base_params.pseudonym_bytes)
    fork_query = sig.Y.to_bytes() + m_bytes
    h_entry = table.lookup(OracleId.H3, fork_query)
    P_V_entry = table.lookup(OracleId.H1, m.ltp)
    if h_entry is None or P_V_entry is None:
        raise ExtractionError("The forgery was produced without querying H1 and H3")
    h = h_entry.answer

    if h_hat is None:
        fork_rng = random.Random(f"fork:{seed}")
        h_hat = suite.random_scalar(fork_rng)
        while h_hat == h:
            h_hat = suite.random_scalar(fork_rng)
    h_hat = suite.scalar(h_hat)
    if h_hat == h:
        raise NoForkError("The forked H3 answer equals the original one")

    _, m_fork, sig_fork = _run(forger, base_params, seed, prepare, fork_at=(fork_query, h_hat))
    if m_fork != m or sig_fork.Y != sig.Y:
        raise ExtractionError("The replay diverged before the forking point")
    logger.debug("Fork succeeded at seed %d", seed)
    return ForgeryPair(sig.Y, m_bytes, P_V_entry.answer, sig.Z, sig_fork.Z, h, h_hat)
