"""Exact sparse polynomials, partitions and symmetric polynomials.

Coefficients are exact rationals (``gmpy2.mpq``).  :class:`Poly` is a plain
mapping from exponent tuples to coefficients with the few operations the
q-difference operators need: products with linear forms, variable scaling
and exact division by linear forms ``z_i - c z_j``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import ExactnessViolation


def to_mpq(value) -> mpq:
    """Convert ints, Fractions, mpq or strings like ``"3/5"`` to ``mpq``."""
    if isinstance(value, str):
        return mpq(Fraction(value.strip()))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a 'p/q' string")
    return mpq(value)


class Poly:
    """Polynomial in ``n`` variables with exact rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, object] | None = None):
        self.n = n
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[tuple(e)] = mpq(c)

    @classmethod
    def constant(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        return cls(n, {tuple(int(k == i) for k in range(n)): 1})

    @classmethod
    def linear(cls, n: int, i: int, ci, j: int, cj) -> "Poly":
        """ci z_i + cj z_j."""
        return cls.constant(n, 1).mul_linear(i, ci, j, cj)

    def copy(self) -> "Poly":
        p = Poly(self.n)
        p.terms = dict(self.terms)
        return p

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = [f"{c}*z^{e}" for e, c in sorted(self.terms.items(), reverse=True)]
        return "Poly(" + " + ".join(parts) + ")"

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "Poly") -> "Poly":
        out = self.copy()
        out.iadd(other)
        return out

    def iadd(self, other: "Poly", factor=1) -> "Poly":
        """In-place self += factor * other."""
        terms = self.terms
        for e, c in other.terms.items():
            v = terms.get(e, 0) + factor * c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self

    def __sub__(self, other: "Poly") -> "Poly":
        out = self.copy()
        out.iadd(other, -1)
        return out

    def __neg__(self) -> "Poly":
        return self.scale(-1)

    def scale(self, c) -> "Poly":
        c = mpq(c)
        out = Poly(self.n)
        if c:
            out.terms = {e: v * c for e, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def mul_linear(self, i: int, ci, j: int, cj) -> "Poly":
        """self * (ci z_i + cj z_j)."""
        out: dict = {}
        for e, c in self.terms.items():
            for k, ck in ((i, ci), (j, cj)):
                if ck:
                    f = e[:k] + (e[k] + 1,) + e[k + 1:]
                    out[f] = out.get(f, 0) + c * ck
        p = Poly(self.n)
        p.terms = {e: c for e, c in out.items() if c}
        return p

    def div_linear(self, i: int, j: int, c) -> "Poly":
        """Exact quotient by (z_i - c z_j); a nonzero remainder is an error.

        Monomials are cleared from the highest power of z_i downwards: a
        term a z_i^e m goes into the quotient as a z_i^{e-1} m and leaves
        c a z_i^{e-1} z_j m behind in the dividend.
        """
        work = dict(self.terms)
        by_degree: dict[int, list] = {}
        for e in work:
            by_degree.setdefault(e[i], []).append(e)
        quotient = {}
        for deg in range(max(by_degree, default=0), 0, -1):
            for e in by_degree.get(deg, ()):
                a = work.pop(e, 0)
                if not a:
                    continue
                g = list(e)
                g[i] -= 1
                qe = tuple(g)
                quotient[qe] = quotient.get(qe, 0) + a
                g[j] += 1
                r = tuple(g)
                v = work.get(r, 0) + c * a
                if r not in work and v:
                    by_degree.setdefault(deg - 1, []).append(r)
                if v:
                    work[r] = v
                else:
                    work.pop(r, None)
        if any(work.values()):
            raise ExactnessViolation(
                f"division by z_{i} - ({c}) z_{j} left {len(work)} remainder terms"
            )
        return Poly(self.n, quotient)

    def scale_vars(self, factors) -> "Poly":
        """f(c_1 z_1, ..., c_n z_n)."""
        out = Poly(self.n)
        powers = [dict() for _ in range(self.n)]

        def pw(k, e):
            table = powers[k]
            if e not in table:
                table[e] = mpq(factors[k]) ** e
            return table[e]

        for e, c in self.terms.items():
            v = c
            for k, ek in enumerate(e):
                if ek:
                    v *= pw(k, ek)
            out.terms[e] = v
        return out

    def permute(self, perm) -> "Poly":
        """Substitute z_k -> z_{perm[k]}."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * self.n
            for k, ek in enumerate(e):
                f[perm[k]] += ek
            out[tuple(f)] = c
        return Poly(self.n, out)

    def evaluate(self, point):
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_symmetric(self) -> bool:
        for e, c in self.terms.items():
            for perm in itertools.permutations(e):
                if self.terms.get(perm, 0) != c:
                    return False
        return True


# -- partitions ----------------------------------------------------------------


class Partition(tuple):
    """A weakly decreasing tuple of positive integers (trailing zeros dropped)."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be non-negative")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not weakly decreasing")
        return super().__new__(cls, tuple(p for p in parts if p > 0))

    def __repr__(self):
        return f"Partition({tuple(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def padded(self, n: int) -> tuple:
        if len(self) > n:
            raise ValueError(f"{self} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def dominates(self, other: "Partition") -> bool:
        """self >= other in dominance order (equal sizes required)."""
        if self.size != other.size:
            return False
        a = b = 0
        for k in range(max(len(self), len(other))):
            a += self[k] if k < len(self) else 0
            b += other[k] if k < len(other) else 0
            if a < b:
                return False
        return True


def partitions(total: int, max_parts: int | None = None, max_part: int | None = None):
    """Partitions of ``total`` in reverse lexicographic order."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield Partition()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        rest_parts = None if max_parts is None else max_parts - 1
        for rest in partitions(total - first, rest_parts, first):
            yield Partition((first,) + tuple(rest))


def dominated_partitions(lam: Partition, n: int) -> list[Partition]:
    """Partitions mu <= lam in dominance with at most n parts, lexicographically descending."""
    return [mu for mu in partitions(lam.size, n) if lam.dominates(mu)]


# -- symmetric polynomials -----------------------------------------------------


def monomial_symmetric(lam: Partition, n: int) -> Poly:
    """m_lambda(z_1, ..., z_n); zero when lambda has more than n parts."""
    lam = Partition(lam)
    if lam.length > n:
        return Poly(n)
    return Poly(n, {e: 1 for e in set(itertools.permutations(lam.padded(n)))})


class SymPoly:
    """Symmetric polynomial stored in the monomial symmetric basis."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping | None = None):
        self.n = n
        self.coeffs = {}
        for lam, c in (coeffs or {}).items():
            lam = Partition(lam)
            if lam.length > n:
                raise ValueError(f"{lam} has more than {n} parts")
            if c:
                self.coeffs[lam] = mpq(c)

    @classmethod
    def monomial(cls, lam, n: int) -> "SymPoly":
        return cls(n, {Partition(lam): 1})

    @classmethod
    def from_poly(cls, p: Poly) -> "SymPoly":
        """Read off m-basis coefficients; raise if ``p`` is not symmetric."""
        coeffs = {}
        for e, c in p.terms.items():
            if all(a >= b for a, b in zip(e, e[1:])):
                coeffs[Partition(e)] = c
        sym = cls(p.n, coeffs)
        if sym.to_poly() != p:
            raise ExactnessViolation("operator image is not symmetric")
        return sym

    def to_poly(self) -> Poly:
        out = Poly(self.n)
        for lam, c in self.coeffs.items():
            out.iadd(monomial_symmetric(lam, self.n), c)
        return out

    def __repr__(self):
        if not self.coeffs:
            return "SymPoly(0)"
        return " + ".join(f"({c})*m{tuple(lam)}" for lam, c in sorted(self.coeffs.items(), reverse=True))

    def __eq__(self, other):
        if isinstance(other, SymPoly):
            return self.n == other.n and self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, 0) + c
        return SymPoly(self.n, out)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "SymPoly":
        c = mpq(c)
        return SymPoly(self.n, {lam: v * c for lam, v in self.coeffs.items()})

    __rmul__ = scale

    def __mul__(self, other):
        if isinstance(other, SymPoly):
            return SymPoly.from_poly(self.to_poly() * other.to_poly())
        return self.scale(other)

    def coefficient(self, lam) -> mpq:
        return self.coeffs.get(Partition(lam), mpq(0))

    def support(self) -> list[Partition]:
        return sorted(self.coeffs, reverse=True)

    def evaluate(self, point):
        return self.to_poly().evaluate(point)


def elementary(r: int, n: int) -> SymPoly:
    """e_r in n variables (zero for r > n)."""
    if r > n:
        return SymPoly(n)
    return SymPoly.monomial((1,) * r, n)


def power_sum(k: int, n: int) -> SymPoly:
    return SymPoly.monomial((k,), n)
