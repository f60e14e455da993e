"""
External Backend (BLS12-381 via py_ecc)
=======================================

Production-shaped adapter over `py_ecc.optimized_bls12_381`.

BLS12-381 is a type-3 pairing: there is no efficiently computable
isomorphism psi: G2 -> G1. The protocols only apply psi to points derived
inside the system (U2 at setup and hashed common strings), so G2 values are
carried together with their discrete log whenever it is known and psi is
defined only on those. G2 hashing therefore multiplies the generator by a
hashed scalar. This keeps the interface complete but it is a functional seam,
not a security claim: anyone can recompute those discrete logs.

Encodings: G1 and G2 use the standard compressed forms (48 and 96 bytes), GT
is the twelve Fq coefficients, 48 bytes each.
"""
import hashlib
from typing import NamedTuple, Optional

from src.errors import BackendUnavailableError, EncodingError
from src.pairing.backend import BackendId, Group, PairingBackend
from settings import EXTERNAL_HASH_DST, EXTERNAL_SECURITY_LEVEL

try:
    from py_ecc.bls.hash_to_curve import hash_to_G1
    from py_ecc.bls.point_compression import (
        compress_G1,
        compress_G2,
        decompress_G1,
        decompress_G2,
    )
    from py_ecc.optimized_bls12_381 import (
        FQ12,
        G1,
        G2,
        Z1,
        Z2,
        add,
        curve_order,
        eq,
        field_modulus,
        is_inf,
        multiply,
        neg,
        pairing,
    )
    PY_ECC_AVAILABLE = True
except ImportError:  # pragma: no cover - depends on the environment
    PY_ECC_AVAILABLE = False

FQ_BYTES = 48


class G2Value(NamedTuple):
    point: tuple
    dlog: Optional[int]


class Bls12381Backend(PairingBackend):
    backend_id = BackendId.EXTERNAL

    def __init__(self):
        if not PY_ECC_AVAILABLE:
            raise BackendUnavailableError("py_ecc is not installed; the external backend is unavailable")
        self.order = curve_order
        self.security_level = EXTERNAL_SECURITY_LEVEL

    def generator(self, group: Group):
        if group is Group.G1:
            return G1
        if group is Group.G2:
            return G2Value(G2, 1)
        return self.pair(G1, G2Value(G2, 1))

    def identity(self, group: Group):
        if group is Group.G1:
            return Z1
        if group is Group.G2:
            return G2Value(Z2, 0)
        return FQ12.one()

    def op(self, group: Group, a, b):
        if group is Group.G1:
            return add(a, b)
        if group is Group.G2:
            dlog = None
            if a.dlog is not None and b.dlog is not None:
                dlog = (a.dlog + b.dlog) % self.order
            return G2Value(add(a.point, b.point), dlog)
        return a * b

    def inv(self, group: Group, a):
        if group is Group.G1:
            return neg(a)
        if group is Group.G2:
            return G2Value(neg(a.point), None if a.dlog is None else (-a.dlog) % self.order)
        return FQ12.one() / a

    def exp(self, group: Group, a, k: int):
        k %= self.order
        if group is Group.G1:
            return multiply(a, k)
        if group is Group.G2:
            return G2Value(multiply(a.point, k), None if a.dlog is None else (a.dlog * k) % self.order)
        return a ** k

    def eq(self, group: Group, a, b) -> bool:
        if group is Group.G1:
            return eq(a, b)
        if group is Group.G2:
            return eq(a.point, b.point)
        return a == b

    def pair(self, a, b):
        if is_inf(a) or is_inf(b.point):
            return FQ12.one()
        # py_ecc takes (G2, G1)
        return pairing(b.point, a)

    def psi(self, b):
        if b.dlog is None:
            raise BackendUnavailableError(
                "psi on BLS12-381 is only defined for G2 points with a known discrete log"
            )
        return multiply(G1, b.dlog)

    def hash_to_group(self, group: Group, message: bytes):
        if group is Group.G1:
            return hash_to_G1(message, EXTERNAL_HASH_DST, hashlib.sha256)
        digest = hashlib.shake_256(message).digest(self.scalar_width + 16)
        k = 1 + int.from_bytes(digest, "big") % (self.order - 1)
        return G2Value(multiply(G2, k), k)

    def encode(self, group: Group, a) -> bytes:
        if group is Group.G1:
            return compress_G1(a).to_bytes(FQ_BYTES, "big")
        if group is Group.G2:
            z1, z2 = compress_G2(a.point)
            return z1.to_bytes(FQ_BYTES, "big") + z2.to_bytes(FQ_BYTES, "big")
        return b"".join(int(c).to_bytes(FQ_BYTES, "big") for c in a.coeffs)

    def decode(self, group: Group, data: bytes):
        if len(data) != self.element_width(group):
            raise EncodingError(
                f"{group.value} element needs {self.element_width(group)} bytes, got {len(data)}"
            )
        try:
            if group is Group.G1:
                point = decompress_G1(int.from_bytes(data, "big"))
                if not is_inf(multiply(point, self.order)):
                    raise EncodingError("G1 point is outside the prime-order subgroup")
                return point
            if group is Group.G2:
                z1 = int.from_bytes(data[:FQ_BYTES], "big")
                z2 = int.from_bytes(data[FQ_BYTES:], "big")
                point = decompress_G2((z1, z2))
                if not is_inf(multiply(point, self.order)):
                    raise EncodingError("G2 point is outside the prime-order subgroup")
                return G2Value(point, None)
        except EncodingError:
            raise
        except (ValueError, AssertionError) as e:
            raise EncodingError(f"Invalid {group.value} encoding: {e}") from e

        coeffs = [
            int.from_bytes(data[i:i + FQ_BYTES], "big")
            for i in range(0, len(data), FQ_BYTES)
        ]
        if any(c >= field_modulus for c in coeffs):
            raise EncodingError("GT coefficient is out of range")
        return FQ12(coeffs)

    def element_width(self, group: Group) -> int:
        return {Group.G1: FQ_BYTES, Group.G2: 2 * FQ_BYTES, Group.GT: 12 * FQ_BYTES}[group]
