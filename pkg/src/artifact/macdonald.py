"""Macdonald q-difference operators and Macdonald polynomials, exactly.

With z_i = e(x_i), q = e(delta), t = e(kappa):

    calD_r = t^{C(r,2)} sum_{|I|=r} prod_{i in I, j not in I} (t z_i - z_j)/(z_i - z_j) T_q^{eps_I}

    calH_l = sum_{|mu|=l} prod_{i<j} (q^{mu_i} z_i - q^{mu_j} z_j)/(z_i - z_j)
                 prod_{i,j} (t z_i/z_j; q)_{mu_i} / (q z_i/z_j; q)_{mu_i}  T_q^{mu}

Both act on symmetric polynomials.  Exact application puts the sum over
I (or mu) on one common denominator, expands the numerator and divides
by every linear factor exactly; a nonzero remainder raises
:class:`~artifact.errors.ExactnessViolation`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
from gmpy2 import mpq
from mpmath import mp

from .errors import DegenerateSpectrum, InvalidParameters
from .symmetric import (
    Partition,
    Poly,
    SymPoly,
    dominated_partitions,
    elementary,
    monomial_symmetric,
    partitions,
    to_mpq,
)


@dataclass(frozen=True)
class QTField:
    """Exact rational values for q and t."""

    q: object = mpq(3, 5)
    t: object = mpq(2, 7)

    def __post_init__(self):
        q, t = to_mpq(self.q), to_mpq(self.t)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", t)
        # the only rational roots of unity are 1 and -1
        if q == 0 or q == 1 or q == -1:
            raise InvalidParameters(f"q = {q} is zero or a root of unity")
        if t == 0:
            raise InvalidParameters("t must be nonzero")

    @classmethod
    def parse(cls, q: str, t: str) -> "QTField":
        return cls(to_mpq(q), to_mpq(t))


def qpoch(x, q, k: int):
    """Finite q-shifted factorial (x; q)_k over any field."""
    result = x * 0 + 1  # the field's one, so that 1/1 never turns into a float
    for j in range(k):
        result = result * (1 - x * q**j)
    return result


def subsets(n: int, r: int):
    return itertools.combinations(range(n), r)


def compositions_of(n: int, total: int):
    """All mu in N^n with |mu| = total."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in compositions_of(n - 1, total - first):
            yield (first,) + rest


# -- numeric coefficients ------------------------------------------------------


def calD_terms(r: int, z, q, t) -> dict:
    """{shift: coefficient} of calD_r at the point z (any field)."""
    n = len(z)
    out = {}
    if r > n:
        return out
    pref = t ** comb(r, 2)
    for subset in subsets(n, r):
        inside = set(subset)
        c = pref
        for i in subset:
            for j in range(n):
                if j not in inside:
                    c = c * (t * z[i] - z[j]) / (z[i] - z[j])
        out[tuple(int(k in inside) for k in range(n))] = c
    return out


def calH_coefficient(mu, z, q, t):
    n = len(z)
    c = 1
    for i in range(n):
        for j in range(i + 1, n):
            c = c * (q ** mu[i] * z[i] - q ** mu[j] * z[j]) / (z[i] - z[j])
    for i in range(n):
        for j in range(n):
            ratio = z[i] / z[j]
            c = c * qpoch(t * ratio, q, mu[i]) / qpoch(q * ratio, q, mu[i])
    return c


def calH_terms(l: int, z, q, t) -> dict:
    """{shift: coefficient} of calH_l at the point z (any field)."""
    return {mu: calH_coefficient(mu, z, q, t) for mu in compositions_of(len(z), l)}


def apply_terms(terms: dict, f, z, q):
    """sum_mu c_mu f(q^mu z), also returning the individual products."""
    parts = []
    for mu, c in terms.items():
        parts.append(c * f(tuple(zi * q**m for zi, m in zip(z, mu))))
    return sum(parts), parts


# -- exact application on polynomials ------------------------------------------


def _shift(poly: Poly, mu, q) -> Poly:
    return poly.scale_vars([q**m for m in mu])


def _divide_all(poly: Poly, factors) -> Poly:
    for i, j, c in factors:
        poly = poly.div_linear(i, j, c)
    return poly


def apply_calD_poly(r: int, f: Poly, qt: QTField) -> Poly:
    """calD_r f for an arbitrary polynomial f whose image is polynomial."""
    n, q, t = f.n, qt.q, qt.t
    if r == 0:
        return f.copy()
    if r > n:
        return Poly(n)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    total = Poly(n)
    for subset in subsets(n, r):
        inside = set(subset)
        num = _shift(f, [int(k in inside) for k in range(n)], q)
        sign = 1
        for a, b in pairs:
            a_in, b_in = a in inside, b in inside
            if a_in == b_in:
                num = num.mul_linear(a, 1, b, -1)
            elif b_in:
                sign = -sign
        for i in subset:
            for j in range(n):
                if j not in inside:
                    num = num.mul_linear(i, t, j, -1)
        total.iadd(num, sign)
    total = _divide_all(total, [(a, b, 1) for a, b in pairs])
    return total.scale(t ** comb(r, 2))


def apply_calH_poly(l: int, f: Poly, qt: QTField) -> Poly:
    """calH_l f for an arbitrary polynomial f whose image is polynomial."""
    n, q, t = f.n, qt.q, qt.t
    if l == 0:
        return f.copy()
    qq = [q**k for k in range(l + 1)]
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    ordered = [(i, j) for i in range(n) for j in range(n) if i != j]
    total = Poly(n)
    for mu in compositions_of(n, l):
        num = _shift(f, mu, q)
        for a, b in pairs:
            num = num.mul_linear(a, qq[mu[a]], b, -qq[mu[b]])
        const = mpq(1)
        for i in range(n):
            const *= qpoch(t, q, mu[i]) / qpoch(q, q, mu[i])
        for i, j in ordered:
            for k in range(mu[i]):
                num = num.mul_linear(j, 1, i, -t * qq[k])
            # denominator factors this term lacks relative to the common one
            for k in range(mu[i] + 1, l + 1):
                num = num.mul_linear(j, 1, i, -qq[k])
        total.iadd(num, const)
    factors = [(a, b, 1) for a, b in pairs]
    factors += [(j, i, qq[k]) for i, j in ordered for k in range(1, l + 1)]
    return _divide_all(total, factors)


@lru_cache(maxsize=None)
def _calD_monomial(r: int, lam: Partition, n: int, q, t) -> SymPoly:
    return SymPoly.from_poly(apply_calD_poly(r, monomial_symmetric(lam, n), QTField(q, t)))


@lru_cache(maxsize=None)
def _calH_monomial(l: int, lam: Partition, n: int, q, t) -> SymPoly:
    return SymPoly.from_poly(apply_calH_poly(l, monomial_symmetric(lam, n), QTField(q, t)))


def _linear_extension(image, f: SymPoly, qt: QTField) -> SymPoly:
    out = SymPoly(f.n)
    for lam, c in f.coeffs.items():
        out = out + image(lam, f.n, qt.q, qt.t).scale(c)
    return out


def apply_calD(r: int, f: SymPoly, qt: QTField = QTField()) -> SymPoly:
    """Exact image calD_r f of a symmetric polynomial."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return SymPoly(f.n, f.coeffs)
    return _linear_extension(lambda lam, n, q, t: _calD_monomial(r, lam, n, q, t), f, qt)


def apply_calH(l: int, f: SymPoly, qt: QTField = QTField()) -> SymPoly:
    """Exact image calH_l f of a symmetric polynomial."""
    if l < 0:
        raise ValueError("l must be non-negative")
    if l == 0:
        return SymPoly(f.n, f.coeffs)
    return _linear_extension(lambda lam, n, q, t: _calH_monomial(l, lam, n, q, t), f, qt)


# -- spectrum and Macdonald polynomials -----------------------------------------


def spectral_point(lam, n: int, qt: QTField) -> tuple:
    """t^delta q^lambda = (t^{n-1} q^{lam_1}, ..., t^0 q^{lam_n})."""
    parts = Partition(lam).padded(n)
    return tuple(qt.t ** (n - 1 - i) * qt.q ** parts[i] for i in range(n))


def e_values(xi) -> list:
    """[e_0(xi), ..., e_n(xi)] from prod (1 + u xi_i)."""
    coeffs = [mpq(1)]
    for x in xi:
        coeffs = [a + x * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


def eigenvalue_D(lam, r: int, n: int, qt: QTField):
    vals = e_values(spectral_point(lam, n, qt))
    return vals[r] if r <= n else mpq(0)


def check_separation(parts, n: int, qt: QTField) -> None:
    """Raise DegenerateSpectrum unless (e_1..e_n)(t^delta q^lambda) separates ``parts``."""
    seen = {}
    for lam in parts:
        key = tuple(e_values(spectral_point(lam, n, qt))[1:])
        if key in seen:
            raise DegenerateSpectrum(f"{seen[key]} and {lam} share the joint eigenvalue")
        seen[key] = lam


@lru_cache(maxsize=None)
def _macdonald(lam: Partition, n: int, q, t) -> SymPoly:
    qt = QTField(q, t)
    basis = dominated_partitions(lam, n)  # lexicographically descending
    coeffs = {lam: mpq(1)}
    target = [eigenvalue_D(lam, r, n, qt) for r in range(n + 1)]
    for k, nu in enumerate(basis[1:], start=1):
        for r in range(1, n + 1):
            gap = target[r] - eigenvalue_D(nu, r, n, qt)
            if gap:
                break
        else:
            raise DegenerateSpectrum(f"{lam} and {nu} cannot be separated at q={q}, t={t}")
        # a_nu (E_lam - E_nu) = sum over higher mu of a_mu [m_nu] calD_r m_mu
        acc = mpq(0)
        for mu in basis[:k]:
            if coeffs.get(mu):
                acc += coeffs[mu] * _calD_monomial(r, mu, n, q, t).coefficient(nu)
        coeffs[nu] = acc / gap
    return SymPoly(n, coeffs)


def macdonald_poly(lam, n: int, qt: QTField = QTField()) -> SymPoly:
    """Monic Macdonald polynomial P_lambda in n variables."""
    lam = Partition(lam)
    if lam.length > n:
        raise InvalidParameters(f"{lam} has more than {n} parts")
    return _macdonald(lam, n, qt.q, qt.t)


def eigen_check_D(lam, r: int, n: int, qt: QTField = QTField()) -> bool:
    """calD_r P_lambda == e_r(t^delta q^lambda) P_lambda, exactly."""
    p = macdonald_poly(lam, n, qt)
    return apply_calD(r, p, qt) == p.scale(eigenvalue_D(lam, r, n, qt))


# -- the H eigenvalues g_l -------------------------------------------------------


def g_poly(l: int, n: int, qt: QTField = QTField()) -> Poly:
    """g_l(xi) = sum_{|nu|=l} prod (t;q)_{nu_i}/(q;q)_{nu_i} xi^nu."""
    q, t = qt.q, qt.t
    terms = {}
    for nu in compositions_of(n, l):
        c = mpq(1)
        for k in nu:
            c *= qpoch(t, q, k) / qpoch(q, q, k)
        terms[nu] = c
    return Poly(n, terms)


def g_value(l: int, xi, qt: QTField = QTField()):
    return g_poly(l, len(xi), qt).evaluate(xi)


def g_matches_one_row(l: int, n: int, qt: QTField = QTField()) -> bool:
    """g_l == (t;q)_l/(q;q)_l P_(l), both as polynomials in xi."""
    q, t = qt.q, qt.t
    one_row = macdonald_poly((l,) if l else (), n, qt).to_poly()
    return g_poly(l, n, qt) == one_row.scale(qpoch(t, q, l) / qpoch(q, q, l))


def eigen_check_H(lam, l: int, n: int, qt: QTField = QTField()) -> bool:
    """calH_l P_lambda == g_l(t^delta q^lambda) P_lambda, exactly."""
    p = macdonald_poly(lam, n, qt)
    return apply_calH(l, p, qt) == p.scale(g_value(l, spectral_point(lam, n, qt), qt))


def scalar_wronski_check(l_max: int, n: int, qt: QTField = QTField()) -> bool:
    """sum_{r+s=l} (-1)^r (1 - t^r q^s) e_r(xi) g_s(xi) == 0 for l = 1..l_max."""
    q, t = qt.q, qt.t
    for l in range(1, l_max + 1):
        total = Poly(n)
        for r in range(min(l, n) + 1):
            s = l - r
            e_r = elementary(r, n).to_poly()
            total.iadd(e_r * g_poly(s, n, qt), (-1) ** r * (1 - t**r * q**s))
        if not total.is_zero():
            return False
    return True


def _series_mul(a: list, b: list, order: int) -> list:
    out = [mpq(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def q_binomial_series(a, x, q, order: int) -> list:
    """u-coefficients of (a x u; q)_inf / (x u; q)_inf = sum (a;q)_k/(q;q)_k (xu)^k."""
    return [qpoch(a, q, k) / qpoch(q, q, k) * x**k for k in range(order + 1)]


def genfun_check(lam, n: int, qt: QTField = QTField(), order: int = 3) -> bool:
    """Generating-function identities on P_lambda through u^order.

    Checks the u-coefficients of calD(u) calH(u) = calD(tu) calH(qu) applied
    to P_lambda, and calH(u) P_lambda against the product of q-binomial
    series prod_i (u t^{n-i+1} q^{lam_i}; q)_inf / (u t^{n-i} q^{lam_i}; q)_inf.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    q, t = qt.q, qt.t
    p = macdonald_poly(lam, n, qt)
    h_images = [apply_calH(s, p, qt) for s in range(order + 1)]
    for l in range(order + 1):
        lhs = SymPoly(n)
        rhs = SymPoly(n)
        for r in range(min(l, n) + 1):
            s = l - r
            img = apply_calD(r, h_images[s], qt).scale((-1) ** r)
            lhs = lhs + img
            rhs = rhs + img.scale(t**r * q**s)
        if lhs != rhs:
            return False
    series = [mpq(1)] + [mpq(0)] * order
    for xi in spectral_point(lam, n, qt):
        series = _series_mul(series, q_binomial_series(t, xi, q, order), order)
    return all(h_images[l] == p.scale(series[l]) for l in range(order + 1))


def operator_wronski_trig_check(l_max: int, n: int, qt: QTField = QTField()) -> bool:
    """sum_{r+s=l} (-1)^r (1 - t^r q^s) calD_r calH_s annihilates every m_mu, |mu| <= l_max+2."""
    q, t = qt.q, qt.t
    for degree in range(l_max + 3):
        for mu in partitions(degree, n):
            m = SymPoly.monomial(mu, n)
            h_images = [apply_calH(s, m, qt) for s in range(l_max + 1)]
            for l in range(1, l_max + 1):
                total = SymPoly(n)
                for r in range(min(l, n) + 1):
                    s = l - r
                    img = apply_calD(r, h_images[s], qt)
                    total = total + img.scale((-1) ** r * (1 - t**r * q**s))
                if not total.is_zero():
                    return False
    return True


# -- bridge to the additive trigonometric operators ----------------------------

PREFACTORS = ("naive", "full")


def normalization_prefactor(kind: str, k: int, n: int, delta, kappa, prefactor: str = "full"):
    """Scalar c with (additive operator) = c * (multiplicative operator).

    ``naive``: D_r = t^{-r(n-r)/2} calD_r and H_l = q^{-l/2} t^{-nl/2} calH_l,
    counting only the pair factors; it is right for D_1 alone.
    ``full``: D_r = t^{-r(n-1)/2} calD_r and H_l = q^{l/2} t^{-nl/2} calH_l,
    which is what the coefficient formulas give once the t^{C(r,2)} in calD_r
    and the Delta(x+mu delta)/Delta(x) factor are accounted for.
    Half powers are t^{1/2} = e(kappa/2) and q^{1/2} = e(delta/2).
    """
    if prefactor not in PREFACTORS:
        raise ValueError(f"prefactor must be one of {PREFACTORS}")
    th = mpmath.expjpi(kappa)
    qh = mpmath.expjpi(delta)
    if kind == "D":
        exponent = k * (n - k) if prefactor == "naive" else k * (n - 1)
        return th ** (-exponent)
    if kind == "H":
        q_exp = -k if prefactor == "naive" else k
        return qh**q_exp * th ** (-k * n)
    raise ValueError("kind must be 'D' or 'H'")


def normalization_bridge_residual(
    kind: str, k: int, x, delta, kappa, prefactor: str = "full", precision: int = 64
) -> float:
    """max_mu |A_mu(x) - c calA_mu(z)| / |A_mu(x)| for the trigonometric bracket sin(pi z)."""
    from .bracket import BracketFunction
    from .diffop import ModelParams, Point
    from .ruijsenaars import build_D, build_H

    n = len(x)
    with mp.workdps(precision):
        b = BracketFunction("trigonometric", omega=1, precision=precision)
        p = ModelParams(n, delta, kappa, b)
        op = build_D(k, p) if kind == "D" else build_H(k, p)
        additive = op.evaluate(Point(x, mpmath.mpmathify(delta)))
        z = [mpmath.expjpi(2 * xi) for xi in x]
        q, t = mpmath.expjpi(2 * delta), mpmath.expjpi(2 * kappa)
        mult = calD_terms(k, z, q, t) if kind == "D" else calH_terms(k, z, q, t)
        c = normalization_prefactor(kind, k, n, delta, kappa, prefactor)
        worst = 0.0
        for mu in set(mult) | set(additive):
            a = additive.get(mu, (0, 0))[0]
            m = c * mult.get(mu, 0)
            scale = max(abs(a), abs(m))
            if scale:
                worst = max(worst, float(abs(a - m) / scale))
        return worst
