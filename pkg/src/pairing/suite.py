"""
Bilinear Suite
==============

`BilinearSuite` binds one backend to its public constants and exposes the
operations every protocol needs: pairing, psi, the domain-separated hashes,
the H5 mask and the canonical codec.

Hashing rule (documented so test vectors can be re-derived by hand):

    hash_to_g1(label)   = backend.hash_to_group(G1, 0x01 || hash_seed || label)
    hash_to_g2(label)   = backend.hash_to_group(G2, 0x02 || hash_seed || label)
    hash_to_scalar(d)   = 1 + int(SHAKE256(0x03 || hash_seed || d)[:w+8]) mod (q-1)
    mask_bytes(w, bits) = SHAKE256(0x05 || hash_seed || encode(w))[:ceil(bits/8)]

On the toy backend the group hashes reduce the same way as hash_to_scalar,
landing in [1, q-1]. `w` is the byte width of q.
"""
import hashlib
import random
from typing import Optional, Tuple, Type, Union

from src.errors import BackendMismatchError, BackendUnavailableError, EncodingError
from src.pairing.backend import BackendId, Group, PairingBackend
from src.pairing.elements import (
    ELEMENT_TYPES,
    G1Element,
    G2Element,
    GroupElement,
    GtElement,
    Scalar,
)
from src.pairing.toy import ToyBackend
from src.utils.decorators import ResampleRequired, resample
from settings import H1_TAG, H2_TAG, H3_TAG, H5_TAG, TOY_MODULUS

Element = Union[G1Element, G2Element, GtElement]


class BilinearSuite:
    """
    Groups G1/G2/GT of prime order q with generators P1/P2, pairing and psi.

    Suites are immutable after construction and safe to share between threads.
    """

    def __init__(self, backend: PairingBackend, hash_seed: bytes = b""):
        self.backend = backend
        self.backend_id: BackendId = backend.backend_id
        self.q: int = backend.order
        self.hash_seed = bytes(hash_seed)
        self.P1 = G1Element(self, backend.generator(Group.G1))
        self.P2 = G2Element(self, backend.generator(Group.G2))

    @classmethod
    def toy(cls, q: int = TOY_MODULUS, hash_seed: bytes = b"") -> "BilinearSuite":
        return cls(ToyBackend(q), hash_seed)

    @classmethod
    def external(cls, hash_seed: bytes = b"") -> "BilinearSuite":
        from src.pairing.bls12_381 import Bls12381Backend
        return cls(Bls12381Backend(), hash_seed)

    @property
    def descriptor(self) -> Tuple[str, int, bytes]:
        return (self.backend_id.value, self.q, self.hash_seed)

    @property
    def security_level(self) -> int:
        return self.backend.security_level

    # Scalars and identities

    def scalar(self, value: Union[int, Scalar]) -> Scalar:
        return Scalar(int(value), self.q)

    def random_scalar(self, rng: random.Random, nonzero: bool = True) -> Scalar:
        if not nonzero:
            return Scalar(rng.randrange(self.q), self.q)
        return self._random_nonzero_scalar(rng)

    @resample
    def _random_nonzero_scalar(self, rng: random.Random) -> Scalar:
        value = rng.randrange(self.q)
        if value == 0:
            raise ResampleRequired("drew the zero scalar")
        return Scalar(value, self.q)

    def g1_identity(self) -> G1Element:
        return G1Element(self, self.backend.identity(Group.G1))

    def g2_identity(self) -> G2Element:
        return G2Element(self, self.backend.identity(Group.G2))

    def gt_identity(self) -> GtElement:
        return GtElement(self, self.backend.identity(Group.GT))

    def random_g1(self, rng: random.Random) -> G1Element:
        return self.random_scalar(rng) * self.P1

    def random_g2(self, rng: random.Random) -> G2Element:
        return self.random_scalar(rng) * self.P2

    # Pairing and psi

    def _owns(self, element: GroupElement) -> None:
        if element.suite is not self and element.suite.descriptor != self.descriptor:
            raise BackendMismatchError(
                f"Element from {element.suite.descriptor} used with suite {self.descriptor}"
            )

    def pair(self, x: G1Element, y: G2Element) -> GtElement:
        if not isinstance(x, G1Element) or not isinstance(y, G2Element):
            raise TypeError("pair expects (G1Element, G2Element)")
        self._owns(x)
        self._owns(y)
        return GtElement(self, self.backend.pair(x.value, y.value))

    def psi(self, y: G2Element) -> G1Element:
        if not isinstance(y, G2Element):
            raise TypeError("psi expects a G2Element")
        self._owns(y)
        return G1Element(self, self.backend.psi(y.value))

    # Hashes

    def _tagged(self, tag: int, data: bytes) -> bytes:
        return bytes([tag]) + self.hash_seed + bytes(data)

    def hash_to_g1(self, label: bytes) -> G1Element:
        return G1Element(self, self.backend.hash_to_group(Group.G1, self._tagged(H1_TAG, label)))

    def hash_to_g2(self, label: bytes) -> G2Element:
        return G2Element(self, self.backend.hash_to_group(Group.G2, self._tagged(H2_TAG, label)))

    def hash_to_scalar(self, data: bytes) -> Scalar:
        digest = hashlib.shake_256(self._tagged(H3_TAG, data)).digest(self.backend.scalar_width + 8)
        return Scalar(1 + int.from_bytes(digest, "big") % (self.q - 1), self.q)

    def mask_bytes(self, w: GtElement, out_len_bits: int) -> bytes:
        if out_len_bits < 0:
            raise ValueError(f"Mask length must be nonnegative, got {out_len_bits}")
        if out_len_bits == 0:
            return b""
        self._owns(w)
        n_bytes = (out_len_bits + 7) // 8
        mask = bytearray(hashlib.shake_256(self._tagged(H5_TAG, w.to_bytes())).digest(n_bytes))
        spare = 8 * n_bytes - out_len_bits
        if spare:
            mask[-1] &= (0xFF << spare) & 0xFF
        return bytes(mask)

    # Codec

    def element_width(self, group: Group) -> int:
        return self.backend.element_width(group)

    @property
    def scalar_width(self) -> int:
        return self.backend.scalar_width

    def serialize(self, e: Union[Element, Scalar]) -> bytes:
        if isinstance(e, Scalar):
            if e.q != self.q:
                raise BackendMismatchError("Scalar modulus does not match the group order")
            return e.value.to_bytes(self.scalar_width, "big")
        self._owns(e)
        return e.to_bytes()

    def deserialize(self, kind: Union[Group, Type[Scalar]], data: bytes) -> Union[Element, Scalar]:
        if kind is Scalar:
            return self.deserialize_scalar(data)
        return ELEMENT_TYPES[kind](self, self.backend.decode(kind, bytes(data)))

    def deserialize_scalar(self, data: bytes) -> Scalar:
        if len(data) != self.scalar_width:
            raise EncodingError(f"Scalar needs {self.scalar_width} bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if value >= self.q:
            raise EncodingError(f"Scalar {value} is out of range for q={self.q}")
        return Scalar(value, self.q)

    def g1_from_bytes(self, data: bytes) -> G1Element:
        return self.deserialize(Group.G1, data)

    def g2_from_bytes(self, data: bytes) -> G2Element:
        return self.deserialize(Group.G2, data)

    def gt_from_bytes(self, data: bytes) -> GtElement:
        return self.deserialize(Group.GT, data)

    def __repr__(self) -> str:
        return f"BilinearSuite(backend={self.backend_id.value}, q={self.q})"


def make_suite(
    backend: Union[str, BackendId],
    hash_seed: bytes = b"",
    toy_modulus: Optional[int] = None
) -> BilinearSuite:
    """Build a suite by backend name; raises BackendUnavailableError for unknown names."""
    try:
        backend_id = BackendId(backend)
    except ValueError as e:
        raise BackendUnavailableError(f"Unknown backend: {backend!r}") from e
    if backend_id is BackendId.TOY:
        return BilinearSuite.toy(toy_modulus or TOY_MODULUS, hash_seed)
    return BilinearSuite.external(hash_seed)
