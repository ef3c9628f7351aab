"""Prime fields GF(p): the scalar layer under everything else.

Only prime moduli are supported (no extension fields).  Elements are
plain integers in [0, p); the ``GF`` context object carries the modulus
and supplies arithmetic, while ``FieldElem`` wraps a value together with
its field for code that wants operator syntax.  All heavy lifting in the
rest of the package happens on numpy int64 arrays reduced mod p, so this
module stays deliberately small.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import MAX_PRIME


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    """Trial-division primality check, adequate for p < 2**15."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class GF:
    """Arithmetic context for the prime field GF(p).

    >>> F = GF(5)
    >>> F.inv(3)
    2
    >>> F.pow(2, 12) == F.pow(2, 12 % 4)
    True
    """

    __slots__ = ("p",)

    def __init__(self, p: int, max_prime: int = MAX_PRIME):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"modulus {p!r} is not prime")
        if p >= max_prime:
            raise FieldError(f"modulus {p} exceeds the supported bound {max_prime}")
        self.p = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    # -- scalar operations ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        """Multiplicative inverse by Fermat's little theorem."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a %= self.p
        if e < 0:
            a = self.inv(a)
            e = -e
        return pow(a, e, self.p)

    def elem(self, value: int) -> "FieldElem":
        return FieldElem(value % self.p, self)

    def elements(self):
        """All field elements, in their canonical order 0..p-1."""
        return range(self.p)


@dataclass(frozen=True)
class FieldElem:
    """A value in [0, p) tied to its field; supports operator syntax."""

    value: int
    field: GF

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            object.__setattr__(self, "value", self.value % self.field.p)

    def _check(self, other: "FieldElem"):
        if self.field != other.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field.add(self.value, other.value), self.field)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field.sub(self.value, other.value), self.field)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.field.div(self.value, other.value), self.field)

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.field.neg(self.value), self.field)

    def __pow__(self, e: int) -> "FieldElem":
        return FieldElem(self.field.pow(self.value, e), self.field)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"
