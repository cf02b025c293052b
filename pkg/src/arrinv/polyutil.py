"""Minimal multivariate integer-coefficient polynomials.

Monomials are frozensets-free sorted tuples of (var, exponent); coefficients
are Fractions so linear solving stays exact.  Only the operations needed by
the admissibility engine are provided: ring arithmetic, substitution of a
variable by a polynomial, linear-variable extraction, and evaluation.
"""

from __future__ import annotations

from fractions import Fraction


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls({(): c} if c else {})

    @classmethod
    def var(cls, name):
        return cls({((name, 1),): Fraction(1)})

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    def __sub__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) - c
        return Poly(t)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    def scale(self, c):
        c = Fraction(c)
        return Poly({m: c * v for m, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(m == () for m in self.terms)

    def const_value(self):
        return self.terms.get((), Fraction(0))

    def variables(self):
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def monomial_form(self):
        """If the poly is c * (single monomial), return (c, vars); else None."""
        if len(self.terms) != 1:
            return None
        (m, c), = self.terms.items()
        return c, [v for v, e in m for _ in range(e)]

    def linear_in(self, var):
        """If poly = a*var + b with `a` a nonzero constant and `b` free of var,
        return (a, b); else None."""
        a = Fraction(0)
        b = {}
        for m, c in self.terms.items():
            d = dict(m)
            if var in d:
                if d[var] != 1 or len(d) != 1:
                    return None
                a += c
            else:
                b[m] = b.get(m, 0) + c
        if a == 0:
            return None
        return a, Poly(b)

    def substitute(self, var, value: "Poly"):
        out = Poly()
        for m, c in self.terms.items():
            d = dict(m)
            e = d.pop(var, 0)
            base = Poly({tuple(sorted(d.items())): c})
            for _ in range(e):
                base = base * value
            out = out + base
        return out

    def evaluate(self, assignment):
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for var, e in m:
                v *= Fraction(assignment[var]) ** e
            total += v
        return total

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in m)
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(bits)


P_ZERO = Poly()
P_ONE = Poly.const(1)
