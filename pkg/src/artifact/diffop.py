"""Finite difference operators sum_mu A_mu(x) T_x^{mu delta}.

Coefficients are evaluator functions, never symbolic expressions.  An
operator is evaluated at a :class:`Point`, which is a base point plus an
integer shift vector in units of delta.  All shifts of one base share a
cache, so the brackets [x_i - x_j + a kappa + b delta] that recur across
the terms of a composition are computed once per sample.

Each evaluation returns, per multi-index, the coefficient value together
with a float "scale": the sum of absolute values of the products that were
added to form it.  Residual checks divide by this scale, which makes them
relative to the largest individual term rather than to a possibly
cancelled total.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

from .bracket import BracketFunction
from .errors import DimensionMismatch, PoleProximity
from .report import CheckRecord, IdentityReport

MultiIndex = tuple  # tuple[int, ...] of length n, entries >= 0

POLE_GUARD = 1e-6
MAX_RESAMPLES = 100


# -- multi-indices -------------------------------------------------------------


def zero_index(n: int) -> MultiIndex:
    return (0,) * n


def unit(n: int, i: int) -> MultiIndex:
    """The unit vector epsilon_i (0-based i)."""
    return tuple(int(k == i) for k in range(n))


def subset_index(n: int, subset: Iterable[int]) -> MultiIndex:
    """epsilon_I, the indicator vector of a subset I of {0, ..., n-1}."""
    s = set(subset)
    return tuple(int(k in s) for k in range(n))


def add_index(mu: MultiIndex, nu: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(mu, nu))


def sub_index(mu: MultiIndex, nu: MultiIndex) -> MultiIndex:
    return tuple(a - b for a, b in zip(mu, nu))


def multi_indices(n: int, total: int) -> list[MultiIndex]:
    """All mu in N^n with |mu| = total (stars and bars, lexicographically descending)."""
    if n == 0:
        return [()] if total == 0 else []
    if n == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in multi_indices(n - 1, total - first):
            out.append((first,) + rest)
    return out


def support_of(mu: MultiIndex) -> tuple[int, ...]:
    return tuple(i for i, m in enumerate(mu) if m > 0)


# -- parameters and points -----------------------------------------------------


@dataclass(frozen=True)
class ModelParams:
    """Variable count n, shift unit delta, coupling kappa and the bracket."""

    n: int
    delta: complex
    kappa: complex
    bracket: BracketFunction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.delta == 0:
            raise ValueError("delta must be nonzero")

    @property
    def precision(self) -> int:
        return self.bracket.precision

    def swapped(self) -> "ModelParams":
        """The same model with the roles of delta and kappa exchanged."""
        return replace(self, delta=self.kappa, kappa=self.delta)

    def with_n(self, n: int) -> "ModelParams":
        return replace(self, n=n)


class Point:
    """A base point x in C^n shifted by ``shift * delta``.

    ``coords`` are always computed from the base, so equal shifts give
    bit-identical coordinates however they were reached.
    """

    __slots__ = ("base", "shift", "delta", "cache", "_coords")

    def __init__(self, base, delta, shift=None, cache=None):
        self.base = tuple(base)
        self.delta = delta
        self.shift = shift if shift is not None else zero_index(len(self.base))
        self.cache = cache if cache is not None else {}
        self._coords = None

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def coords(self) -> tuple:
        if self._coords is None:
            self._coords = tuple(
                x + s * self.delta if s else x for x, s in zip(self.base, self.shift)
            )
        return self._coords

    def shifted(self, mu: MultiIndex) -> "Point":
        if not any(mu):
            return self
        return Point(self.base, self.delta, add_index(self.shift, mu), self.cache)

    def base_difference(self, i: int, j: int):
        key = ("diff", i, j)
        value = self.cache.get(key)
        if value is None:
            value = self.cache[key] = self.base[i] - self.base[j]
        return value


def guard(value, what: str = "denominator"):
    """Return ``value`` unless it is within the pole guard of zero."""
    if abs(value) < POLE_GUARD:
        raise PoleProximity(f"{what} {mpmath.nstr(value, 5)} is below the pole guard")
    return value


class BracketTable:
    """Cached brackets of differences at a :class:`Point` for one model.

    ``diff(pt, i, j, a, b)`` is [x_i - x_j + a kappa + b delta] at the shifted
    point; ``const(a, b)`` is [a kappa + b delta].
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self.tag = ("bt", id(self))
        self._consts = {}

    def diff(self, pt: Point, i: int, j: int, a: int = 0, b: int = 0):
        m = b + pt.shift[i] - pt.shift[j]
        key = (self.tag, i, j, a, m)
        value = pt.cache.get(key)
        if value is None:
            p = self.params
            arg = pt.base_difference(i, j)
            if a:
                arg = arg + a * p.kappa
            if m:
                arg = arg + m * p.delta
            value = pt.cache[key] = p.bracket(arg)
        return value

    def inv_diff(self, pt: Point, i: int, j: int, a: int = 0, b: int = 0):
        m = b + pt.shift[i] - pt.shift[j]
        key = (self.tag, "inv", i, j, a, m)
        value = pt.cache.get(key)
        if value is None:
            value = pt.cache[key] = 1 / guard(self.diff(pt, i, j, a, b))
        return value

    def const(self, a: int = 0, b: int = 0):
        value = self._consts.get((a, b))
        if value is None:
            p = self.params
            with mp.workdps(p.precision):
                value = self._consts[(a, b)] = p.bracket(a * p.kappa + b * p.delta)
        return value


# -- operators -----------------------------------------------------------------

Evaluation = dict  # MultiIndex -> (value, scale)


class DiffOperator:
    """A finite difference operator in ``n`` variables with shift unit ``delta``.

    ``support`` lists the multi-indices that may carry nonzero coefficients;
    ``evaluator(point)`` returns ``{mu: (value, scale)}`` over that support.
    """

    def __init__(
        self,
        n: int,
        delta,
        support: Iterable[MultiIndex],
        evaluator: Callable[[Point], Evaluation],
        precision: int = 64,
        label: str = "",
    ):
        self.n = n
        self.delta = delta
        self.support = tuple(sorted(set(support), reverse=True))
        for mu in self.support:
            if len(mu) != n or min(mu, default=0) < 0:
                raise ValueError(f"bad multi-index {mu} for n={n}")
        self._evaluator = evaluator
        self.precision = precision
        self.label = label

    def __repr__(self):
        name = self.label or "DiffOperator"
        return f"<{name}: n={self.n}, {len(self.support)} terms>"

    @classmethod
    def from_terms(cls, n, delta, terms: Mapping[MultiIndex, Callable], precision=64, label=""):
        """Build from ``{mu: f}`` where each ``f`` maps a coordinate tuple to a number."""
        terms = dict(terms)

        def evaluator(pt):
            x = pt.coords
            out = {}
            for mu, f in terms.items():
                v = f(x)
                out[mu] = (v, float(abs(v)))
            return out

        return cls(n, delta, terms, evaluator, precision, label)

    def evaluate(self, pt: Point) -> Evaluation:
        key = ("op", id(self), pt.shift)
        cached = pt.cache.get(key)
        if cached is None:
            cached = pt.cache[key] = self._evaluator(pt)
        return cached

    def point(self, x) -> Point:
        with mp.workdps(self.precision):
            return Point([mpmath.mpmathify(v) for v in x], mpmath.mpmathify(self.delta))

    def coefficients(self, x) -> dict:
        """``{mu: A_mu(x)}`` at a coordinate tuple ``x``."""
        with mp.workdps(self.precision):
            return {mu: v for mu, (v, _) in self.evaluate(self.point(x)).items()}

    def coefficient(self, mu: MultiIndex, x):
        return self.coefficients(x).get(tuple(mu), mpmath.mpc(0))

    @property
    def terms(self) -> dict:
        """``{mu: callable}``: one coefficient evaluator per supported multi-index."""
        return {mu: (lambda x, mu=mu: self.coefficient(mu, x)) for mu in self.support}

    def is_zero(self) -> bool:
        return not self.support

    # operator sugar
    def __matmul__(self, other):
        return op_compose(self, other)

    def __add__(self, other):
        return op_linear([1, 1], [self, other])

    def __sub__(self, other):
        return op_linear([1, -1], [self, other])

    def __rmul__(self, scalar):
        return op_scale(self, scalar)


def _check_compatible(ops: Sequence[DiffOperator]):
    if not ops:
        return
    n = ops[0].n
    for op in ops[1:]:
        if op.n != n:
            raise DimensionMismatch(f"variable counts differ: {n} vs {op.n}")
        if op.delta != ops[0].delta:
            raise DimensionMismatch("shift units differ")


def op_identity(n: int, delta, precision: int = 64) -> DiffOperator:
    one = mpmath.mpc(1)
    zero = zero_index(n)
    return DiffOperator(n, delta, [zero], lambda pt: {zero: (one, 1.0)}, precision, "identity")


def op_zero(n: int, delta, precision: int = 64) -> DiffOperator:
    return DiffOperator(n, delta, [], lambda pt: {}, precision, "zero")


def op_linear(coeffs: Sequence, ops: Sequence[DiffOperator]) -> DiffOperator:
    """Pointwise linear combination sum_k c_k A_k, merging equal multi-indices."""
    if len(coeffs) != len(ops):
        raise ValueError("need one coefficient per operator")
    if not ops:
        raise ValueError("op_linear needs at least one operator")
    _check_compatible(ops)
    pairs = [(c, op) for c, op in zip(coeffs, ops) if c != 0 and not op.is_zero()]
    precision = max(op.precision for op in ops)
    support = set()
    for _, op in pairs:
        support.update(op.support)

    def evaluator(pt):
        out = {}
        for c, op in pairs:
            c_abs = float(abs(c))
            for mu, (v, s) in op.evaluate(pt).items():
                if mu in out:
                    v0, s0 = out[mu]
                    out[mu] = (v0 + c * v, s0 + c_abs * s)
                else:
                    out[mu] = (c * v, c_abs * s)
        return out

    return DiffOperator(ops[0].n, ops[0].delta, support, evaluator, precision)


def op_scale(op: DiffOperator, c) -> DiffOperator:
    return op_linear([c], [op])


def op_compose(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """A o B: the coefficient at lambda is sum_{mu+nu=lambda} A_mu(x) B_nu(x + mu delta)."""
    _check_compatible([a, b])
    precision = max(a.precision, b.precision)
    if a.is_zero() or b.is_zero():
        return op_zero(a.n, a.delta, precision)
    support = {add_index(mu, nu) for mu in a.support for nu in b.support}

    def evaluator(pt):
        out = {}
        for mu, (va, sa) in a.evaluate(pt).items():
            for nu, (vb, sb) in b.evaluate(pt.shifted(mu)).items():
                lam = add_index(mu, nu)
                if lam in out:
                    v0, s0 = out[lam]
                    out[lam] = (v0 + va * vb, s0 + sa * sb)
                else:
                    out[lam] = (va * vb, sa * sb)
        return out

    return DiffOperator(a.n, a.delta, support, evaluator, precision)


def op_compose_all(ops: Sequence[DiffOperator]) -> DiffOperator:
    """Left-to-right composition ops[0] o ops[1] o ... ."""
    result = ops[0]
    for op in ops[1:]:
        result = op_compose(result, op)
    return result


def op_apply(a: DiffOperator, f: Callable, x) -> complex:
    """(A f)(x) = sum_mu A_mu(x) f(x + mu delta); ``f`` takes a coordinate tuple."""
    with mp.workdps(a.precision):
        pt = a.point(x)
        total = mpmath.mpc(0)
        for mu, (v, _) in a.evaluate(pt).items():
            total += v * f(pt.shifted(mu).coords)
        return total


# -- sampling and equality testing --------------------------------------------


def sample_complex(rng: random.Random, radius: float = 1.0):
    """Real and imaginary parts uniform in [-radius, radius]."""
    return mpmath.mpc(rng.uniform(-radius, radius), rng.uniform(-radius, radius))


def sample_point(rng: random.Random, n: int) -> tuple:
    return tuple(sample_complex(rng) for _ in range(n))


def with_resampling(rng: random.Random, draw: Callable, compute: Callable):
    """Call ``compute(draw(rng))``, redrawing while a pole guard trips."""
    for _ in range(MAX_RESAMPLES):
        sample = draw(rng)
        try:
            return sample, compute(sample)
        except PoleProximity:
            continue
    raise PoleProximity(f"no admissible sample after {MAX_RESAMPLES} draws")


def default_tolerance(precision: int) -> float:
    return 10.0 ** -(precision - 25)


def max_relative_residual(op: DiffOperator, pt: Point) -> float:
    """max over the support of |coefficient| / scale at one point (0 where scale is 0)."""
    worst = 0.0
    for v, s in op.evaluate(pt).values():
        if s > 0:
            worst = max(worst, float(abs(v)) / s)
    return worst


def op_vanishes_at(
    op: DiffOperator,
    num_samples: int = 20,
    tol: float | None = None,
    seed: int = 0,
    identity: str = "zero-operator",
    anchor: str = "",
) -> IdentityReport:
    """Check that every coefficient of ``op`` vanishes at random admissible points."""
    tol = default_tolerance(op.precision) if tol is None else tol
    rng = random.Random(seed)
    start = time.perf_counter()
    worst = 0.0
    with mp.workdps(op.precision):
        delta = mpmath.mpmathify(op.delta)
        for _ in range(num_samples):
            _, r = with_resampling(
                rng,
                lambda g: sample_point(g, op.n),
                lambda x: max_relative_residual(op, Point(x, delta)),
            )
            worst = max(worst, r)
    record = CheckRecord(
        identity=identity,
        anchor=anchor,
        max_residual=worst,
        passed=worst < tol,
        samples=num_samples,
        elapsed=time.perf_counter() - start,
        tolerance=tol,
    )
    return IdentityReport(identity, {"seed": seed, "n": op.n}, [record])


def op_equal_at(
    a: DiffOperator,
    b: DiffOperator,
    num_samples: int = 20,
    tol: float | None = None,
    seed: int = 0,
    identity: str = "operator-equality",
    anchor: str = "",
) -> IdentityReport:
    """Compare A and B coefficient-wise on the union of supports at random points.

    The deviation at a multi-index is |A_mu - B_mu| divided by the combined
    term scale of both sides.
    """
    diff = op_linear([1, -1], [a, b])
    return op_vanishes_at(diff, num_samples, tol, seed, identity, anchor)


def permutations(n: int):
    return itertools.permutations(range(n))
