"""
Group Elements
==============

Operator-overloaded wrappers over raw backend values. G1 and G2 are written
additively (`+`, `-`, `k * P`), GT multiplicatively (`*`, `**`). Mixing
elements of different suites raises BackendMismatchError.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Any, ClassVar, Union

from src.errors import BackendMismatchError
from src.pairing.backend import Group

if TYPE_CHECKING:
    from src.pairing.suite import BilinearSuite


class Scalar:
    """An integer modulo the group order q."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int):
        self.value = value % q
        self.q = q

    def _coerce(self, other: Union["Scalar", int]) -> int:
        if isinstance(other, Scalar):
            if other.q != self.q:
                raise BackendMismatchError(f"Scalars modulo {self.q} and {other.q} cannot be mixed")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return NotImplemented
        return Scalar(self.value + value, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return NotImplemented
        return Scalar(self.value - value, self.q)

    def __rsub__(self, other):
        value = self._coerce(other)
        if value is NotImplemented:
            return NotImplemented
        return Scalar(value - self.value, self.q)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return Scalar(self.value * self._coerce(other), self.q)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return Scalar(self.value * other, self.q)
        return NotImplemented

    def __neg__(self) -> "Scalar":
        return Scalar(-self.value, self.q)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse modulo q")
        return Scalar(pow(self.value, -1, self.q), self.q)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.q == other.q and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.q))

    def __repr__(self) -> str:
        return f"Scalar({self.value} mod {self.q})"


class GroupElement:
    """Element of one of the suite's groups."""

    __slots__ = ("suite", "value")
    group: ClassVar[Group]

    def __init__(self, suite: "BilinearSuite", value: Any):
        self.suite = suite
        self.value = value

    def _check(self, other: "GroupElement") -> None:
        if type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.suite is not self.suite and other.suite.descriptor != self.suite.descriptor:
            raise BackendMismatchError(
                f"Elements from {self.suite.descriptor} and {other.suite.descriptor} cannot be mixed"
            )

    def _new(self, value: Any):
        return type(self)(self.suite, value)

    def is_identity(self) -> bool:
        backend = self.suite.backend
        return backend.eq(self.group, self.value, backend.identity(self.group))

    def to_bytes(self) -> bytes:
        return self.suite.backend.encode(self.group, self.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement) or type(other) is not type(self):
            return NotImplemented
        if other.suite.descriptor != self.suite.descriptor:
            return False
        return self.suite.backend.eq(self.group, self.value, other.value)

    def __hash__(self) -> int:
        return hash((self.group, self.to_bytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_bytes().hex()})"


class _AdditiveElement(GroupElement):
    __slots__ = ()

    def __add__(self, other):
        self._check(other)
        return self._new(self.suite.backend.op(self.group, self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        backend = self.suite.backend
        return self._new(backend.op(self.group, self.value, backend.inv(self.group, other.value)))

    def __neg__(self):
        return self._new(self.suite.backend.inv(self.group, self.value))

    def __mul__(self, k):
        if isinstance(k, Scalar):
            if k.q != self.suite.q:
                raise BackendMismatchError("Scalar modulus does not match the group order")
            k = k.value
        if not isinstance(k, int):
            return NotImplemented
        return self._new(self.suite.backend.exp(self.group, self.value, k % self.suite.q))

    __rmul__ = __mul__


class G1Element(_AdditiveElement):
    __slots__ = ()
    group = Group.G1


class G2Element(_AdditiveElement):
    __slots__ = ()
    group = Group.G2


class GtElement(GroupElement):
    """GT element, written multiplicatively."""

    __slots__ = ()
    group = Group.GT

    def __mul__(self, other):
        if not isinstance(other, GtElement):
            return NotImplemented
        self._check(other)
        return self._new(self.suite.backend.op(self.group, self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        backend = self.suite.backend
        return self._new(backend.op(self.group, self.value, backend.inv(self.group, other.value)))

    def __pow__(self, k):
        if isinstance(k, Scalar):
            k = k.value
        return self._new(self.suite.backend.exp(self.group, self.value, k % self.suite.q))

    def inverse(self) -> "GtElement":
        return self._new(self.suite.backend.inv(self.group, self.value))


ELEMENT_TYPES = {Group.G1: G1Element, Group.G2: G2Element, Group.GT: GtElement}
