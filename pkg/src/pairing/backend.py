"""
Pairing Backend Interface
=========================

A backend realizes the three groups G1, G2 and GT of prime order q together
with the pairing e: G1 x G2 -> GT and the isomorphism psi: G2 -> G1.

All group operations are expressed uniformly over raw backend values:

    op(group, a, b)   group law (addition in G1/G2, multiplication in GT)
    inv(group, a)     inverse under the group law
    exp(group, a, k)  k-fold application of the group law (k*a or a**k)

Backends never see element wrappers; `src.pairing.elements` adds the
operator overloading and the cross-suite checks on top.
"""
import abc
from enum import Enum
from typing import Any


class Group(str, Enum):
    G1 = "G1"
    G2 = "G2"
    GT = "GT"


class BackendId(str, Enum):
    TOY = "toy"
    EXTERNAL = "external"


class PairingBackend(abc.ABC):
    """Raw group arithmetic for one bilinear setting."""

    backend_id: BackendId
    order: int
    security_level: int

    @abc.abstractmethod
    def generator(self, group: Group) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def identity(self, group: Group) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def op(self, group: Group, a: Any, b: Any) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def inv(self, group: Group, a: Any) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def exp(self, group: Group, a: Any, k: int) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def eq(self, group: Group, a: Any, b: Any) -> bool:
        raise NotImplementedError()

    @abc.abstractmethod
    def pair(self, a: Any, b: Any) -> Any:
        raise NotImplementedError()

    @abc.abstractmethod
    def psi(self, b: Any) -> Any:
        """Map a G2 value to G1 with psi(generator(G2)) = generator(G1)."""
        raise NotImplementedError()

    @abc.abstractmethod
    def hash_to_group(self, group: Group, message: bytes) -> Any:
        """Hash already domain-separated bytes into G1 or G2."""
        raise NotImplementedError()

    @abc.abstractmethod
    def encode(self, group: Group, a: Any) -> bytes:
        raise NotImplementedError()

    @abc.abstractmethod
    def decode(self, group: Group, data: bytes) -> Any:
        """Inverse of encode; raises EncodingError on non-canonical input."""
        raise NotImplementedError()

    @abc.abstractmethod
    def element_width(self, group: Group) -> int:
        raise NotImplementedError()

    @property
    def scalar_width(self) -> int:
        return (self.order.bit_length() + 7) // 8
