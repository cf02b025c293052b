"""Number types: the cyclotomic field Q(w) and the real quadratic field Q(sqrt 3).

A CycloNumber a + b*w (w = exp(2*pi*i/3), so w^2 = -1 - w) has
Re = a - b/2 in Q and Im = (b/2)*sqrt(3); real and imaginary parts therefore
live in Q(sqrt 3), where signs and comparisons are decided exactly.
"""

from __future__ import annotations

from fractions import Fraction


def as_fraction(x) -> Fraction:
    """Coerce ints / strings like '3/4' / Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class CycloNumber:
    """Element a + b*w of Q(w), w^2 + w + 1 = 0."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = as_fraction(a)
        self.b = as_fraction(b)

    def __add__(self, other):
        return CycloNumber(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return CycloNumber(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return CycloNumber(-self.a, -self.b)

    def __mul__(self, other):
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2,  w^2 = -1 - w
        a, b, c, d = self.a, self.b, other.a, other.b
        return CycloNumber(a * c - b * d, a * d + b * c - b * d)

    def norm(self) -> Fraction:
        """Field norm a^2 - ab + b^2 (zero iff the element is zero)."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "CycloNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        return CycloNumber((self.a - self.b) / n, -self.b / n)

    def __truediv__(self, other):
        return self * other.inverse()

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation: a + bw -> (a - b) - bw."""
        return CycloNumber(self.a - self.b, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def real(self) -> "SqrtThreeReal":
        return SqrtThreeReal(self.a - self.b / 2, 0)

    def imag(self) -> "SqrtThreeReal":
        return SqrtThreeReal(0, Fraction(self.b, 2))

    def sort_key(self):
        """Exact (Re, Im) lexicographic key; valid because sqrt(3) > 0 and
        distinct field elements give distinct (p, q) pairs coordinatewise here."""
        return (self.a - self.b / 2, self.b)

    def __eq__(self, other):
        return isinstance(other, CycloNumber) and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"CycloNumber({self.a!r}, {self.b!r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"({self.a}+{self.b}w)"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, d: dict) -> "CycloNumber":
        return cls(Fraction(d["a"]), Fraction(d["b"]))


CYCLO_ZERO = CycloNumber(0, 0)
CYCLO_ONE = CycloNumber(1, 0)
OMEGA = CycloNumber(0, 1)
# 2w + 1 = i*sqrt(3): the purely imaginary unit-scale element of Q(w)
I_SQRT3 = CycloNumber(1, 2)


class SqrtThreeReal:
    """Element p + q*sqrt(3) of the ordered field Q(sqrt 3); total order exact."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = as_fraction(p)
        self.q = as_fraction(q)

    def __add__(self, other):
        return SqrtThreeReal(self.p + other.p, self.q + other.q)

    def __sub__(self, other):
        return SqrtThreeReal(self.p - other.p, self.q - other.q)

    def __neg__(self):
        return SqrtThreeReal(-self.p, -self.q)

    def __mul__(self, other):
        return SqrtThreeReal(self.p * other.p + 3 * self.q * other.q,
                             self.p * other.q + self.q * other.p)

    def inverse(self) -> "SqrtThreeReal":
        d = self.p * self.p - 3 * self.q * self.q
        if d == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt 3)")
        return SqrtThreeReal(self.p / d, -self.q / d)

    def __truediv__(self, other):
        return self * other.inverse()

    def sign(self) -> int:
        """Exact sign of p + q*sqrt(3): compare p^2 with 3q^2 when signs differ."""
        p, q = self.p, self.q
        if p == 0 and q == 0:
            return 0
        if p >= 0 and q >= 0:
            return 1
        if p <= 0 and q <= 0:
            return -1
        # p, q of opposite signs; p^2 = 3q^2 only at zero since sqrt(3) is irrational
        if p > 0:
            return 1 if p * p > 3 * q * q else -1
        return 1 if p * p < 3 * q * q else -1

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def __eq__(self, other):
        return isinstance(other, SqrtThreeReal) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"SqrtThreeReal({self.p!r}, {self.q!r})"
