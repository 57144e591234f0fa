"""Ruijsenaars operators D_r, the commuting family H_l, and their relations.

D_r = sum_{|I|=r} prod_{i in I, j not in I} [x_i-x_j+kappa]/[x_i-x_j] T^{eps_I delta}

H_l = sum_{|mu|=l} Delta(x+mu delta)/Delta(x)
          prod_{i,j} [x_i-x_j+kappa]_{mu_i} / [x_i-x_j+delta]_{mu_i}  T^{mu delta}

with Delta(x) = prod_{i<j}[x_i-x_j].  The two families satisfy the
alternating recurrence sum_{r+s=l} (-1)^r [r kappa + s delta] D_r H_s = 0,
from which H_l is a determinant (or a sum over compositions) in the D_r.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

import mpmath
from mpmath import mp

from .bracket import BracketFunction
from .diffop import (
    BracketTable,
    DiffOperator,
    ModelParams,
    Point,
    guard,
    multi_indices,
    op_compose,
    op_compose_all,
    op_identity,
    op_linear,
    op_zero,
    sample_complex,
    sub_index,
    subset_index,
    support_of,
)
from .errors import PoleProximity

# -- coefficient evaluators ----------------------------------------------------


def _d_coefficient(table: BracketTable, pt: Point, subset: Sequence[int]):
    n = pt.n
    value = mpmath.mpc(1)
    inside = set(subset)
    for i in subset:
        for j in range(n):
            if j not in inside:
                value *= table.diff(pt, i, j, 1, 0) * table.inv_diff(pt, i, j)
    return value


def _h_coefficient(table: BracketTable, pt: Point, mu, kappa_defect=0):
    n = pt.n
    value = mpmath.mpc(1)
    for i in range(n):
        for j in range(i + 1, n):
            if mu[i] != mu[j]:
                value *= table.diff(pt, i, j, 0, mu[i] - mu[j]) * table.inv_diff(pt, i, j)
    for i in range(n):
        for k in range(mu[i]):
            value *= table.const(1, k) / guard(table.const(0, k + 1))
            for j in range(n):
                if j != i:
                    value *= table.diff(pt, i, j, 1, k) * table.inv_diff(pt, i, j, 0, k + 1)
    if kappa_defect and any(mu):
        # negative control: kappa -> kappa + defect in the single factor
        # [kappa + (mu_i - 1) delta] of the first active variable; its ratio
        # depends on mu, so no overall rescaling can absorb it
        p = table.params
        top = next(m for m in mu if m) - 1
        value *= p.bracket(p.kappa + top * p.delta + kappa_defect) / table.const(1, top)
    return value


def d_coefficient(subset: Sequence[int], x, p: ModelParams):
    """A_I(x), the coefficient of T^{eps_I delta} in D_{|I|}."""
    with mp.workdps(p.precision):
        pt = Point([mpmath.mpmathify(v) for v in x], mpmath.mpmathify(p.delta))
        return _d_coefficient(BracketTable(p), pt, subset)


def h_coefficient(mu, x, p: ModelParams, form: str = "compact"):
    """H_mu(x), the coefficient of T^{mu delta} in H_{|mu|}.

    ``form`` selects one of three algebraically equivalent expressions,
    each evaluated directly from brackets of the coordinates:

    ``"compact"``
        Delta(x+mu delta)/Delta(x) prod_{i,j}[x_i-x_j+kappa]_{mu_i}/[x_i-x_j+delta]_{mu_i}
    ``"product"``
        the same with the Delta ratio and shifted factorials written out
        as products over i<j and k = 0..mu_i-1
    ``"transposed"``
        Delta(x+mu delta)/Delta(x) prod_{i,j}[x_j-x_i+kappa]_{mu_j}/[x_j-x_i+delta]_{mu_j}
    """
    b = p.bracket
    with mp.workdps(p.precision):
        x = [mpmath.mpmathify(v) for v in x]
        n = len(x)
        d, k_ = p.delta, p.kappa
        shifted = [x[i] + mu[i] * d for i in range(n)]

        def fact(z, k):
            out = mpmath.mpc(1)
            for m in range(k):
                out *= b(z + m * d)
            return out

        if form in ("compact", "transposed"):
            value = mpmath.mpc(1)
            for i in range(n):
                for j in range(i + 1, n):
                    value *= b(shifted[i] - shifted[j]) / guard(b(x[i] - x[j]))
            for i in range(n):
                for j in range(n):
                    if form == "compact":
                        value *= fact(x[i] - x[j] + k_, mu[i]) / guard(fact(x[i] - x[j] + d, mu[i]))
                    else:
                        value *= fact(x[j] - x[i] + k_, mu[j]) / guard(fact(x[j] - x[i] + d, mu[j]))
            return value
        if form == "product":
            value = mpmath.mpc(1)
            for i in range(n):
                for j in range(i + 1, n):
                    value *= b(x[i] - x[j] + (mu[i] - mu[j]) * d) / guard(b(x[i] - x[j]))
            for i in range(n):
                for j in range(n):
                    for k in range(mu[i]):
                        value *= b(x[i] - x[j] + k_ + k * d) / guard(b(x[i] - x[j] + d + k * d))
            return value
        raise ValueError(f"unknown form {form!r}")


# -- builders ------------------------------------------------------------------


def build_D(r: int, p: ModelParams) -> DiffOperator:
    """The Ruijsenaars operator D_r; D_0 is the identity and D_r = 0 for r > n."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return op_identity(p.n, p.delta, p.precision)
    if r > p.n:
        return op_zero(p.n, p.delta, p.precision)
    table = BracketTable(p)
    subsets = {subset_index(p.n, s): s for s in itertools.combinations(range(p.n), r)}

    def evaluator(pt):
        out = {}
        for mu, s in subsets.items():
            v = _d_coefficient(table, pt, s)
            out[mu] = (v, float(abs(v)))
        return out

    return DiffOperator(p.n, p.delta, subsets, evaluator, p.precision, f"D_{r}")


def build_H(l: int, p: ModelParams, kappa_defect=0) -> DiffOperator:
    """The operator H_l; H_0 is the identity.

    ``kappa_defect`` perturbs kappa in exactly one factor of every
    coefficient.  It exists only to show that the identity checks detect a
    wrong operator.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    if l == 0:
        return op_identity(p.n, p.delta, p.precision)
    table = BracketTable(p)
    indices = multi_indices(p.n, l)

    def evaluator(pt):
        out = {}
        for mu in indices:
            v = _h_coefficient(table, pt, mu, kappa_defect)
            out[mu] = (v, float(abs(v)))
        return out

    return DiffOperator(p.n, p.delta, indices, evaluator, p.precision, f"H_{l}")


def bracket_const(p: ModelParams, a, b):
    """[a kappa + b delta] at the model's precision (a, b may be any numbers)."""
    with mp.workdps(p.precision):
        return p.bracket(a * p.kappa + b * p.delta)


# -- the recurrence and its coefficient form ----------------------------------


def wronski_terms(l: int, p: ModelParams, h_builder=build_H):
    """[(c_r, D_r o H_s)] for r + s = l with c_r = (-1)^r [r kappa + s delta]."""
    terms = []
    for r in range(0, min(l, p.n) + 1):
        s = l - r
        with mp.workdps(p.precision):
            c = (-1) ** r * bracket_const(p, r, s)
        terms.append((c, op_compose(build_D(r, p), h_builder(s, p))))
    return terms


def wronski_residual_op(l: int, p: ModelParams, h_builder=build_H) -> DiffOperator:
    """sum_{r+s=l} (-1)^r [r kappa + s delta] D_r H_s, which should vanish for l >= 1."""
    if l < 1:
        raise ValueError("the recurrence starts at l = 1")
    terms = wronski_terms(l, p, h_builder)
    return op_linear([c for c, _ in terms], [op for _, op in terms])


def coefficient_identity_terms(lam, x, p: ModelParams) -> list:
    """Summands of the coefficient of T^{lambda delta} in the recurrence.

    One term per I within supp(lambda):
    (-1)^|I| [|I| kappa + (|lambda|-|I|) delta] A_I(x) H_{lambda - eps_I}(x + eps_I delta).
    """
    lam = tuple(lam)
    if sum(lam) <= 0:
        raise ValueError("|lambda| must be positive")
    with mp.workdps(p.precision):
        table = BracketTable(p)
        pt = Point([mpmath.mpmathify(v) for v in x], mpmath.mpmathify(p.delta))
        supp = support_of(lam)
        total = sum(lam)
        terms = []
        for size in range(len(supp) + 1):
            for subset in itertools.combinations(supp, size):
                eps = subset_index(p.n, subset)
                a = _d_coefficient(table, pt, subset)
                h = _h_coefficient(table, pt.shifted(eps), sub_index(lam, eps))
                c = (-1) ** size * table.const(size, total - size)
                terms.append(c * a * h)
        return terms


def coefficient_identity_residual(lam, x, p: ModelParams):
    with mp.workdps(p.precision):
        return mpmath.fsum(coefficient_identity_terms(lam, x, p))


def key_identity_terms(z, w, a, b: BracketFunction) -> list:
    """Summands of the alternating subset sum whose total vanishes identically:

    sum_I (-1)^|I| [|w|-|z|+|I|a]/[|w|-|z|] prod_{i in I, j not in I}[z_j-z_i+a]/[z_j-z_i]
          prod_{i in I, k}[w_k-z_i]/[w_k-z_i+a].
    """
    if len(z) != len(w):
        raise ValueError("z and w must have the same length")
    n = len(z)
    with mp.workdps(b.precision):
        z = [mpmath.mpmathify(v) for v in z]
        w = [mpmath.mpmathify(v) for v in w]
        a = mpmath.mpmathify(a)
        gap = mpmath.fsum(w) - mpmath.fsum(z)
        base = guard(b(gap))
        terms = []
        for size in range(n + 1):
            for subset in itertools.combinations(range(n), size):
                value = (-1) ** size * b(gap + size * a) / base
                for i in subset:
                    for j in range(n):
                        if j not in subset:
                            value *= b(z[j] - z[i] + a) / guard(b(z[j] - z[i]))
                    for k in range(n):
                        value *= b(w[k] - z[i]) / guard(b(w[k] - z[i] + a))
                terms.append(value)
        return terms


def key_identity_residual(z, w, a, b: BracketFunction):
    with mp.workdps(b.precision):
        return mpmath.fsum(key_identity_terms(z, w, a, b))


# -- explicit expansions in the D_r --------------------------------------------


def _leibniz(l: int, entry, n: int, delta, precision: int, order: str) -> DiffOperator:
    """Leibniz expansion of det(M) for an operator matrix with entries ``entry(i, j)``.

    ``entry`` returns ``None`` for a zero entry or ``(scalar, operator)``;
    indices are 1-based.  Products are composed in row order (i = 1..l) or
    in column order (j = 1..l).
    """
    if l == 0:
        return op_identity(n, delta, precision)
    coeffs, ops = [], []
    for perm in itertools.permutations(range(1, l + 1)):
        pairs = [(i, perm[i - 1]) for i in range(1, l + 1)]
        if order == "column":
            pairs.sort(key=lambda ij: ij[1])
        elif order != "row":
            raise ValueError("order must be 'row' or 'column'")
        factors = [entry(i, j) for i, j in pairs]
        if any(f is None for f in factors):
            continue
        with mp.workdps(precision):
            scalar = mpmath.mpc(_perm_sign(perm))
            for c, _ in factors:
                scalar *= c
        coeffs.append(scalar)
        ops.append(op_compose_all([op for _, op in factors]))
    if not ops:
        return op_zero(n, delta, precision)
    return op_linear(coeffs, ops)


def _perm_sign(perm) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def h_via_determinant(l: int, p: ModelParams, order: str = "row") -> DiffOperator:
    """H_l = det( [(i-j+1)kappa + (j-1)delta]/[i delta] D_{i-j+1} )_{i,j=1..l}."""
    ds = {r: build_D(r, p) for r in range(0, l + 1)}

    def entry(i, j):
        r = i - j + 1
        if r < 0:
            return None
        with mp.workdps(p.precision):
            c = bracket_const(p, r, j - 1) / guard(bracket_const(p, 0, i))
        return c, ds[r]

    return _leibniz(l, entry, p.n, p.delta, p.precision, order)


def d_via_determinant(l: int, p: ModelParams, order: str = "row", h_builder=build_H) -> DiffOperator:
    """D_l = det( [(i-j+1)delta + (j-1)kappa]/[i kappa] H_{i-j+1} )_{i,j=1..l}."""
    hs = {r: h_builder(r, p) for r in range(0, l + 1)}

    def entry(i, j):
        r = i - j + 1
        if r < 0:
            return None
        with mp.workdps(p.precision):
            c = bracket_const(p, j - 1, r) / guard(bracket_const(p, i, 0))
        return c, hs[r]

    return _leibniz(l, entry, p.n, p.delta, p.precision, order)


def compositions(l: int):
    """Integer compositions (r_1, ..., r_d) of l with all parts >= 1."""
    if l == 0:
        yield ()
        return
    for first in range(1, l + 1):
        for rest in compositions(l - first):
            yield (first,) + rest


def composition_scalar(parts: Sequence[int], p: ModelParams):
    """(-1)^{l-d} prod_i [(r_1+..+r_{i-1}) delta + r_i kappa] / [(r_1+..+r_i) delta]."""
    with mp.workdps(p.precision):
        l, d = sum(parts), len(parts)
        value = mpmath.mpc((-1) ** (l - d))
        partial = 0
        for r in parts:
            value *= bracket_const(p, r, partial) / guard(bracket_const(p, 0, partial + r))
            partial += r
        return value


def h_via_compositions(l: int, p: ModelParams) -> DiffOperator:
    """H_l as the signed sum over compositions of l of scalar * D_{r_1} ... D_{r_d}."""
    if l < 1:
        raise ValueError("l must be positive")
    ds = {r: build_D(r, p) for r in range(1, l + 1)}
    coeffs, ops = [], []
    for parts in compositions(l):
        if any(r > p.n for r in parts):
            continue
        coeffs.append(composition_scalar(parts, p))
        ops.append(op_compose_all([ds[r] for r in parts]))
    if not ops:
        return op_zero(p.n, p.delta, p.precision)
    return op_linear(coeffs, ops)


def h2_closed_form(p: ModelParams) -> DiffOperator:
    """[k][k+d]/([d][2d]) D_1 D_1 - [2k]/[2d] D_2, written out term by term."""
    c = lambda a, b: bracket_const(p, a, b)  # noqa: E731
    with mp.workdps(p.precision):
        c11 = c(1, 0) * c(1, 1) / (c(0, 1) * c(0, 2))
        c2 = -c(2, 0) / c(0, 2)
    d1, d2 = build_D(1, p), build_D(2, p)
    return op_linear([c11, c2], [op_compose_all([d1, d1]), d2])


def h3_closed_form(p: ModelParams, d2d1_numerator=(1, 1)) -> DiffOperator:
    """Four-term expression of H_3 in D_1, D_2, D_3.

    [k][k+d][k+2d]/([d][2d][3d]) D_1^3 - [2k][k + m d]/([2d][3d]) D_2 D_1
    - [k][2k+d]/([d][3d]) D_1 D_2 + [3k]/[3d] D_3,

    where ``d2d1_numerator = (1, m)`` selects the bracket [k + m d] in the
    D_2 D_1 coefficient.
    """
    c = lambda a, b: bracket_const(p, a, b)  # noqa: E731
    with mp.workdps(p.precision):
        c111 = c(1, 0) * c(1, 1) * c(1, 2) / (c(0, 1) * c(0, 2) * c(0, 3))
        c21 = -c(2, 0) * c(*d2d1_numerator) / (c(0, 2) * c(0, 3))
        c12 = -c(1, 0) * c(2, 1) / (c(0, 1) * c(0, 3))
        c3 = c(3, 0) / c(0, 3)
    d1, d2, d3 = (build_D(r, p) for r in (1, 2, 3))
    return op_linear(
        [c111, c21, c12, c3],
        [op_compose_all([d1, d1, d1]), op_compose_all([d2, d1]), op_compose_all([d1, d2]), d3],
    )


# -- commutators ---------------------------------------------------------------


def commutator_residual(r: int, s: int, p: ModelParams, kind: str = "DH") -> DiffOperator:
    """X_r Y_s - Y_s X_r for kind in {"DD", "DH", "HH"}."""
    builders = {"D": build_D, "H": build_H}
    if len(kind) != 2 or any(k not in builders for k in kind):
        raise ValueError("kind must be one of 'DD', 'DH', 'HH'")
    x = builders[kind[0]](r, p)
    y = builders[kind[1]](s, p)
    return op_linear([1, -1], [op_compose_all([x, y]), op_compose_all([y, x])])


# -- parameter sampling --------------------------------------------------------


def sample_params(
    n: int, bracket: BracketFunction, rng: random.Random, levels: int = 6
) -> ModelParams:
    """Draw generic (delta, kappa) from the unit box.

    Rejects any draw with |[a kappa + b delta]| below the pole guard for
    0 <= a, b <= levels (not both zero), so constants like [l delta] and
    [r kappa + s delta] are safely nonzero.
    """
    with mp.workdps(bracket.precision):
        for _ in range(100):
            delta, kappa = sample_complex(rng), sample_complex(rng)
            p = ModelParams(n, delta, kappa, bracket)
            try:
                for a in range(levels + 1):
                    for b in range(levels + 1):
                        if a or b:
                            guard(bracket(a * kappa + b * delta))
                return p
            except PoleProximity:
                continue
    raise RuntimeError("could not draw generic parameters")

