"""
Toy Backend
===========

Transparent bilinear groups over Z/qZ. INSECURE BY DESIGN.

Every element of G1 and G2 is stored as its discrete log to the generator
(P1 = P2 = 1), and every GT element as its exponent over e(P1, P2). Under
that representation

    e(a, b)        = a*b mod q
    GT "multiply"  = exponent addition
    GT "power"     = exponent multiplication
    psi            = identity on residues

so e(aP1, bP2) = e(P1, P2)^(ab) holds exactly and every protocol equation can
be checked with pencil-and-paper arithmetic. Used as the ground-truth oracle
for tests and for desk-scale simulation.
"""
import hashlib

from src.errors import EncodingError
from src.pairing.backend import BackendId, Group, PairingBackend
from settings import TOY_MODULUS, TOY_SECURITY_LEVEL


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class ToyBackend(PairingBackend):
    backend_id = BackendId.TOY

    def __init__(self, q: int = TOY_MODULUS):
        if not is_prime(q):
            raise ValueError(f"Toy modulus must be prime, got {q}")
        self.order = q
        self.security_level = TOY_SECURITY_LEVEL

    def generator(self, group: Group) -> int:
        return 1

    def identity(self, group: Group) -> int:
        return 0

    def op(self, group: Group, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, group: Group, a: int) -> int:
        return (-a) % self.order

    def exp(self, group: Group, a: int, k: int) -> int:
        return (a * k) % self.order

    def eq(self, group: Group, a: int, b: int) -> bool:
        return a == b

    def pair(self, a: int, b: int) -> int:
        return (a * b) % self.order

    def psi(self, b: int) -> int:
        return b

    def hash_to_group(self, group: Group, message: bytes) -> int:
        # Reduce into [1, q-1] so hashed points are never the identity.
        digest = hashlib.shake_256(message).digest(self.scalar_width + 8)
        return 1 + int.from_bytes(digest, "big") % (self.order - 1)

    def encode(self, group: Group, a: int) -> bytes:
        return a.to_bytes(self.scalar_width, "big")

    def decode(self, group: Group, data: bytes) -> int:
        if len(data) != self.scalar_width:
            raise EncodingError(
                f"{group.value} element needs {self.scalar_width} bytes, got {len(data)}"
            )
        value = int.from_bytes(data, "big")
        if value >= self.order:
            raise EncodingError(f"Residue {value} is out of range for q={self.order}")
        return value

    def element_width(self, group: Group) -> int:
        return self.scalar_width
