"""Kernel functions and the identities they satisfy.

* Dual Cauchy kernel Psi(x;y) = prod [x_i - y_k]: with m kappa + n delta = 0,
  H_r^x Psi = (-1)^r Dhat_r^y Psi, where Dhat has delta and kappa exchanged.
* Balanced duality sums (sum a_i = sum b_k) over mu in N^m and nu in N^n.
* Trigonometric kernels Pi(z;w) and Psi(z;w) for the multiplicative
  operators, compared as power series in u.
* Kajihara's Euler transformation, order by order in u, over any field.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mp

from .bracket import BracketFunction, delta_product, shifted_factorial
from .diffop import ModelParams, Point, guard, multi_indices
from .errors import Divergence, InvalidParameters, PrecisionUnreachable
from .macdonald import apply_terms, calD_terms, calH_terms, compositions_of, qpoch
from .ruijsenaars import build_D, build_H

MAX_PRODUCT_FACTORS = 100_000


def relative_residual(lhs_parts: Sequence, rhs_parts: Sequence, precision: int = 64) -> float:
    """|sum lhs - sum rhs| / (sum |lhs parts| + sum |rhs parts|); 0 when all parts vanish.

    Sums run at ``precision`` digits or the ambient precision, whichever is higher.
    """
    with mp.workdps(max(precision, mp.dps)):
        diff = sum(lhs_parts) - sum(rhs_parts)
        scale = sum(abs(v) for v in lhs_parts) + sum(abs(v) for v in rhs_parts)
        if not scale:
            return 0.0
        return float(abs(diff) / scale)


# -- dual Cauchy kernel --------------------------------------------------------


def dual_cauchy_psi(x: Sequence, y: Sequence, b: BracketFunction):
    """Psi(x;y) = prod_{i,k} [x_i - y_k]."""
    with mp.workdps(b.precision):
        value = mpmath.mpc(1)
        for xi in x:
            for yk in y:
                value *= b(xi - yk)
        return value


def hd_parameters(m: int, n: int, delta, b: BracketFunction):
    """Model parameters for both sides: (x-side, y-side) with kappa = -n delta / m."""
    with mp.workdps(b.precision):
        delta = mpmath.mpmathify(delta)
        kappa = -n * delta / m
        return ModelParams(m, delta, kappa, b), ModelParams(n, kappa, delta, b)


def hd_identity_terms(r: int, x: Sequence, y: Sequence, delta, b: BracketFunction):
    """Individual products of H_r^x Psi and (-1)^r Dhat_r^y Psi."""
    m, n = len(x), len(y)
    px, py = hd_parameters(m, n, delta, b)
    with mp.workdps(b.precision):
        h_op = build_H(r, px)
        d_op = build_D(r, py)
        lhs = []
        for mu, (c, _) in h_op.evaluate(Point(x, px.delta)).items():
            shifted = [xi + k * px.delta for xi, k in zip(x, mu)]
            lhs.append(c * dual_cauchy_psi(shifted, y, b))
        sign = (-1) ** r
        rhs = []
        for nu, (c, _) in d_op.evaluate(Point(y, py.delta)).items():
            shifted = [yk + k * py.delta for yk, k in zip(y, nu)]
            rhs.append(sign * c * dual_cauchy_psi(x, shifted, b))
        return lhs, rhs


def hd_identity_residual(r: int, x: Sequence, y: Sequence, delta, b: BracketFunction):
    """H_r^x Psi - (-1)^r Dhat_r^y Psi at (x, y) under m kappa + n delta = 0."""
    lhs, rhs = hd_identity_terms(r, x, y, delta, b)
    with mp.workdps(b.precision):
        return mpmath.fsum(lhs) - mpmath.fsum(rhs)


# -- balanced duality sums -----------------------------------------------------


@dataclass(frozen=True)
class DualityParams:
    """Parameters of the duality transformation; a and b must balance."""

    a: tuple
    b: tuple
    delta: complex
    bracket: BracketFunction

    def __post_init__(self):
        if not self.a or not self.b:
            raise InvalidParameters("a and b must be non-empty")
        with mp.workdps(self.bracket.precision):
            a = tuple(mpmath.mpmathify(v) for v in self.a)
            b = tuple(mpmath.mpmathify(v) for v in self.b)
            gap = abs(mpmath.fsum(a) - mpmath.fsum(b))
            size = max(abs(v) for v in a + b) or 1
            if gap > size * mpmath.mpf(10) ** (-(self.bracket.precision - 10)):
                raise InvalidParameters(f"balancing fails: |sum a - sum b| = {mpmath.nstr(gap, 5)}")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
            object.__setattr__(self, "delta", mpmath.mpmathify(self.delta))

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return len(self.b)

    @classmethod
    def balanced(cls, a, b_head, delta, bracket) -> "DualityParams":
        """Complete ``b_head`` with the one entry that balances the sums."""
        with mp.workdps(bracket.precision):
            last = mpmath.fsum(mpmath.mpmathify(v) for v in a) - mpmath.fsum(
                mpmath.mpmathify(v) for v in b_head
            )
        return cls(tuple(a), tuple(b_head) + (last,), delta, bracket)

    def swapped(self) -> "DualityParams":
        return DualityParams(self.b, self.a, self.delta, self.bracket)


def _duality_side(r: int, x, y, a, b, delta, bracket) -> list:
    # sum over mu in N^m, |mu| = r, of the one-sided summand
    m = len(x)
    br = bracket
    fac = shifted_factorial
    dx = guard(delta_product(br, x), "difference product")
    parts = []
    for mu in multi_indices(m, r):
        shifted = [xi + k * delta for xi, k in zip(x, mu)]
        v = delta_product(br, shifted) / dx
        for i in range(m):
            for j in range(m):
                d = x[i] - x[j]
                v *= fac(br, d + a[j], mu[i], delta) / guard(fac(br, d + delta, mu[i], delta))
            for k, yk in enumerate(y):
                s = x[i] + yk
                v *= fac(br, s - b[k], mu[i], delta) / guard(fac(br, s, mu[i], delta))
        parts.append(v)
    return parts


def duality_sum_terms(r: int, x: Sequence, y: Sequence, dp: DualityParams):
    if len(x) != dp.m or len(y) != dp.n:
        raise InvalidParameters("point sizes must match (m, n) of the parameters")
    with mp.workdps(dp.bracket.precision):
        lhs = _duality_side(r, x, y, dp.a, dp.b, dp.delta, dp.bracket)
        rhs = _duality_side(r, y, x, dp.b, dp.a, dp.delta, dp.bracket)
        return lhs, rhs


def duality_sum_residual(r: int, x: Sequence, y: Sequence, dp: DualityParams):
    """Left sum over |mu| = r minus right sum over |nu| = r."""
    lhs, rhs = duality_sum_terms(r, x, y, dp)
    with mp.workdps(dp.bracket.precision):
        return mpmath.fsum(lhs) - mpmath.fsum(rhs)


# -- trigonometric kernels ------------------------------------------------------


def qpoch_inf(a, q, precision: int = 64):
    """(a; q)_inf, stopping once |a q^k| < 10^-(precision+10)."""
    with mp.workdps(precision):
        a, q = mpmath.mpmathify(a), mpmath.mpmathify(q)
        if abs(q) >= 1:
            raise Divergence(f"|q| = {mpmath.nstr(abs(q), 5)} is not below 1")
        eps = mpmath.mpf(10) ** (-(precision + 10))
        result = mpmath.mpc(1)
        term = a
        for _ in range(MAX_PRODUCT_FACTORS):
            if abs(term) < eps:
                return result
            result *= 1 - term
            term *= q
        raise PrecisionUnreachable(f"(a;q)_inf needs more than {MAX_PRODUCT_FACTORS} factors")


def trig_cauchy_pi(z: Sequence, w: Sequence, q, t, precision: int = 64):
    """Pi(z;w) = prod_{i,k} (t z_i w_k; q)_inf / (z_i w_k; q)_inf."""
    with mp.workdps(precision):
        value = mpmath.mpc(1)
        for zi in z:
            for wk in w:
                s = zi * wk
                value *= qpoch_inf(t * s, q, precision) / qpoch_inf(s, q, precision)
        return value


def trig_dual_psi(z: Sequence, w: Sequence):
    """Psi(z;w) = prod_{i,k} (z_i - w_k)."""
    value = 1
    for zi in z:
        for wk in w:
            value = value * (zi - wk)
    return value


def _poly_coefficients(roots_scale, count: int):
    # coefficients of prod_{k<count} (1 - roots_scale^k u)
    coeffs = [mpmath.mpc(1)]
    for k in range(count):
        c = roots_scale**k
        coeffs = [a - c * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


def _qbinomial_coefficients(a, q, order: int):
    # u-coefficients of (a u; q)_inf / (u; q)_inf
    return [qpoch(a, q, k) / qpoch(q, q, k) for k in range(order + 1)]


def _exp_series_coefficients(x, q, order: int):
    # u-coefficients of (x u; q)_inf = sum (-1)^k q^{C(k,2)} x^k / (q;q)_k u^k
    return [(-1) ** k * q ** math.comb(k, 2) * x**k / qpoch(q, q, k) for k in range(order + 1)]


def _convolve(prefactor, sides, order):
    # u^N coefficient parts of (sum_a prefactor_a u^a)(sum_b sides_b u^b)
    out = []
    for big_n in range(order + 1):
        parts = []
        for a in range(big_n + 1):
            if a < len(prefactor) and big_n - a < len(sides):
                parts.extend(prefactor[a] * v for v in sides[big_n - a])
        out.append(parts)
    return out


KINDS = ("DD", "HH", "HD")


def trig_kernel_coefficients(kind: str, z, w, q, t, order: int, precision: int = 64):
    """u-coefficient parts [(lhs_parts, rhs_parts) for u^0..u^order]."""
    if kind not in KINDS:
        raise InvalidParameters(f"kind must be one of {KINDS}")
    m, n = len(z), len(w)
    if kind in ("DD", "HH") and m < n:
        raise InvalidParameters("DD and HH need m >= n")
    with mp.workdps(precision):
        z = [mpmath.mpmathify(v) for v in z]
        w = [mpmath.mpmathify(v) for v in w]
        q, t = mpmath.mpmathify(q), mpmath.mpmathify(t)
        if abs(q) >= 1:
            raise Divergence("|q| must be below 1")

        if kind == "HD":
            def kernel_z(zz):
                return trig_dual_psi(zz, w)

            def kernel_w(ww):
                return trig_dual_psi(z, ww)
        else:
            def kernel_z(zz):
                return trig_cauchy_pi(zz, w, q, t, precision)

            def kernel_w(ww):
                return trig_cauchy_pi(z, ww, q, t, precision)

        lhs_side, rhs_side = [], []
        for k in range(order + 1):
            if kind == "DD":
                # D(u) = sum (-u)^r D_r; the w side carries (t^{m-n} u)^r
                _, lp = apply_terms(calD_terms(k, z, q, t), kernel_z, z, q)
                _, rp = apply_terms(calD_terms(k, w, q, t), kernel_w, w, q)
                lhs_side.append([(-1) ** k * v for v in lp])
                rhs_side.append([(-1) ** k * t ** ((m - n) * k) * v for v in rp])
            elif kind == "HH":
                _, lp = apply_terms(calH_terms(k, z, q, t), kernel_z, z, q)
                _, rp = apply_terms(calH_terms(k, w, q, t), kernel_w, w, q)
                lhs_side.append(lp)
                rhs_side.append([t ** ((m - n) * k) * v for v in rp])
            else:
                # Dhat: calD with q and t exchanged, shifting w by t
                _, lp = apply_terms(calH_terms(k, z, q, t), kernel_z, z, q)
                _, rp = apply_terms(calD_terms(k, w, t, q), kernel_w, w, t)
                lhs_side.append(lp)
                rhs_side.append([(-1) ** k * v for v in rp])

        if kind == "DD":
            lhs_pre = [mpmath.mpc(1)]
            rhs_pre = _poly_coefficients(t, m - n)
        elif kind == "HH":
            lhs_pre = [mpmath.mpc(1)]
            rhs_pre = _qbinomial_coefficients(t ** (m - n), q, order)
        else:
            lhs_pre = _exp_series_coefficients(1, q, order)
            rhs_pre = _exp_series_coefficients(t**m * q**n, q, order)
        return list(zip(_convolve(lhs_pre, lhs_side, order), _convolve(rhs_pre, rhs_side, order)))


def trig_kernel_residuals(
    kind: str,
    u=None,
    m: int = 2,
    n: int = 2,
    q=None,
    t=None,
    series_order: int = 3,
    z=None,
    w=None,
    precision: int = 64,
    seed: int = 0,
) -> float:
    """Max relative residual of the u-coefficients u^0..u^series_order.

    DD is a polynomial identity in u (both sides have degree at most m), so
    when ``u`` is given the two sides are also compared at that value with
    the full polynomial.  Random z, w (|z_i w_k| < 1) and q, t are drawn
    from ``seed`` when not supplied.
    """
    rng = random.Random(seed)

    def draw(radius):
        return mpmath.mpc(rng.uniform(-radius, radius), rng.uniform(-radius, radius))

    with mp.workdps(precision):
        q = draw(0.5) if q is None else mpmath.mpmathify(q)
        t = draw(0.9) if t is None else mpmath.mpmathify(t)
        z = [draw(0.7) for _ in range(m)] if z is None else list(z)
        w = [draw(0.7) for _ in range(n)] if w is None else list(w)
        coeffs = trig_kernel_coefficients(kind, z, w, q, t, series_order, precision)
        worst = max(relative_residual(l, r) for l, r in coeffs)
        if kind == "DD" and u is not None:
            full = trig_kernel_coefficients(kind, z, w, q, t, m, precision)
            u = mpmath.mpmathify(u)
            lhs = [u**k * v for k, (l, _) in enumerate(full) for v in l]
            rhs = [u**k * v for k, (_, r) in enumerate(full) for v in r]
            worst = max(worst, relative_residual(lhs, rhs))
        return worst


# -- Kajihara's Euler transformation ------------------------------------------


def _kajihara_side(order: int, z, w, a, b, q) -> list:
    # [sum over |mu| = N of the summand without (u/alpha)^N] for N = 0..order
    m = len(z)
    out = []
    for big_n in range(order + 1):
        parts = []
        for mu in compositions_of(m, big_n):
            v = z[0] * 0 + 1
            for i in range(m):
                for j in range(i + 1, m):
                    v = v * (q ** mu[i] * z[i] - q ** mu[j] * z[j]) / (z[i] - z[j])
            for i in range(m):
                for j in range(m):
                    ratio = z[i] / z[j]
                    v = v * qpoch(a[j] * ratio, q, mu[i]) / qpoch(q * ratio, q, mu[i])
                for l, wl in enumerate(w):
                    s = z[i] * wl
                    v = v * qpoch(s / b[l], q, mu[i]) / qpoch(s, q, mu[i])
            parts.append(v)
        out.append(parts)
    return out


def kajihara_coefficients(order: int, z, w, a, b, q):
    """u-coefficient parts of both sides, over any field (exact for rationals)."""
    if len(a) != len(z) or len(b) != len(w):
        raise InvalidParameters("len(a) must equal len(z) and len(b) equal len(w)")
    alpha = math.prod(a)
    beta = math.prod(b)
    sides = []
    for zz, ww, aa, bb, scale in ((z, w, a, b, alpha), (w, z, b, a, beta)):
        raw = _kajihara_side(order, zz, ww, aa, bb, q)
        weighted = [[v / scale**k for v in parts] for k, parts in enumerate(raw)]
        # (u/scale; q)_inf / (u; q)_inf = sum (1/scale; q)_k/(q; q)_k u^k
        pre = [qpoch(1 / scale, q, k) / qpoch(q, q, k) for k in range(order + 1)]
        sides.append(_convolve(pre, weighted, order))
    return list(zip(*sides))


def kajihara_residual(R: int, z, w, a, b, q) -> float:
    """Max relative residual over u-orders 0..R (exactly 0.0 for exact inputs that agree)."""
    worst = 0.0
    for lhs, rhs in kajihara_coefficients(R, z, w, a, b, q):
        diff = sum(lhs) - sum(rhs)
        if diff == 0:
            continue
        worst = max(worst, relative_residual(lhs, rhs))
    return worst


def kajihara_preset(kind: str, m: int, n: int, q, t) -> tuple:
    """(a, b) for the specializations matching the DD, HH and HD kernel identities."""
    presets = {"DD": (1 / q, 1 / q), "HH": (t, t), "HD": (t, 1 / q)}
    if kind not in presets:
        raise InvalidParameters(f"kind must be one of {tuple(presets)}")
    a_val, b_val = presets[kind]
    return (a_val,) * m, (b_val,) * n
