"""Identity suites: grids of checks that each produce a CheckRecord.

Every check is reproducible from its seed.  Numeric checks report the
worst relative residual (residual over the summed magnitudes of the
individual terms); exact checks report a boolean verdict.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

import mpmath
from gmpy2 import mpq
from mpmath import mp

from . import kernels, macdonald, ruijsenaars
from .bracket import FLAVORS, BracketFunction, hirota_terms
from .diffop import (
    MAX_RESAMPLES,
    ModelParams,
    default_tolerance,
    guard,
    multi_indices,
    op_equal_at,
    op_vanishes_at,
    sample_complex,
    sample_point,
)
from .errors import DegenerateSpectrum, ExactnessViolation, PoleProximity, PrecisionUnreachable
from .report import CheckRecord, IdentityReport
from .symmetric import partitions

SUITES = (
    "hirota",
    "commute",
    "wronski",
    "expansions",
    "keyidentity",
    "kernels",
    "kajihara",
    "macdonald",
    "displays",
)

KERNEL_GRID = ((1, 1), (2, 1), (2, 2), (3, 2))


@dataclass
class SuiteConfig:
    flavors: tuple = FLAVORS
    n: int = 3
    lmax: int = 4
    rmax: int = 3
    precision: int = 64
    seed: int = 0
    q: str = "3/5"
    t: str = "2/7"
    tol: float | None = None
    samples: int = 20

    def tolerance(self) -> float:
        return default_tolerance(self.precision) if self.tol is None else self.tol

    def bracket(self, flavor: str) -> BracketFunction:
        return BracketFunction(flavor, precision=self.precision)

    def qt_field(self) -> macdonald.QTField:
        return macdonald.QTField.parse(self.q, self.t)

    def as_dict(self) -> dict:
        return {
            "flavors": list(self.flavors),
            "n": self.n,
            "lmax": self.lmax,
            "rmax": self.rmax,
            "precision": self.precision,
            "seed": self.seed,
            "q": self.q,
            "t": self.t,
            "tol": self.tol,
            "samples": self.samples,
        }


# -- record helpers ------------------------------------------------------------


def _relative(parts) -> float:
    total = mpmath.fsum(parts)
    scale = mpmath.fsum(abs(v) for v in parts)
    return float(abs(total) / scale) if scale else 0.0


def sampled_check(
    identity: str,
    anchor: str,
    residual: Callable[[random.Random], float],
    samples: int,
    tol: float,
    seed: int = 0,
    precision: int = 64,
) -> CheckRecord:
    """Worst value of ``residual(rng)`` over ``samples`` admissible draws.

    ``residual`` draws its own sample from the generator it is given; a
    PoleProximity makes it draw again (up to the resample cap).
    """
    rng = random.Random(seed)
    start = time.perf_counter()
    worst = 0.0
    try:
        with mp.workdps(precision):
            for _ in range(samples):
                for attempt in range(MAX_RESAMPLES):
                    try:
                        worst = max(worst, residual(rng))
                        break
                    except PoleProximity:
                        if attempt == MAX_RESAMPLES - 1:
                            raise
    except (PrecisionUnreachable, PoleProximity) as exc:
        return CheckRecord(identity, anchor, None, False, samples, time.perf_counter() - start, tol,
                           error=f"{type(exc).__name__}: {exc}")
    return CheckRecord(identity, anchor, worst, worst < tol, samples,
                       time.perf_counter() - start, tol)


def exact_check(identity: str, anchor: str, verdict: Callable[[], bool], samples: int = 1) -> CheckRecord:
    start = time.perf_counter()
    try:
        ok = bool(verdict())
        error = None
    except (ExactnessViolation, DegenerateSpectrum, ZeroDivisionError) as exc:
        ok, error = False, f"{type(exc).__name__}: {exc}"
    return CheckRecord(identity, anchor, None, ok, samples, time.perf_counter() - start,
                       exact=True, error=error)


def operator_check(identity: str, anchor: str, build: Callable[[], object], samples: int, tol: float,
                   seed: int = 0, against=None) -> CheckRecord:
    """Coefficient-wise vanishing of build() (or equality with ``against()``)."""
    start = time.perf_counter()
    try:
        op = build()
        if against is None:
            rep = op_vanishes_at(op, samples, tol, seed, identity, anchor)
        else:
            rep = op_equal_at(op, against(), samples, tol, seed, identity, anchor)
    except (PrecisionUnreachable, PoleProximity) as exc:
        return CheckRecord(identity, anchor, None, False, samples, time.perf_counter() - start, tol,
                           error=f"{type(exc).__name__}: {exc}")
    record = rep.checks[0]
    record.elapsed = time.perf_counter() - start
    return record


def model(n: int, bracket: BracketFunction, seed: int) -> ModelParams:
    return ruijsenaars.sample_params(n, bracket, random.Random(seed))


# -- bracket ---------------------------------------------------------------------


def hirota_checks(b: BracketFunction, samples: int = 200, seed: int = 0, tol: float | None = None):
    tol = 10.0 ** -(b.precision - 20) if tol is None else tol
    tag = b.flavor

    def hirota(rng):
        args = [sample_complex(rng) for _ in range(4)]
        return _relative(hirota_terms(b, *args))

    def permuted(rng):
        z, *abc = [sample_complex(rng) for _ in range(4)]
        values = [mpmath.fsum(hirota_terms(b, z, *perm)) for perm in itertools.permutations(abc)]
        scale = mpmath.fsum(abs(v) for v in hirota_terms(b, z, *abc))
        return float(max(abs(v - values[0]) for v in values) / scale)

    def oddness(rng):
        z = sample_complex(rng)
        fz = b(z)
        return float(abs(b(-z) + fz) / max(1, abs(fz)))

    def covariance(rng):
        z, c = sample_complex(rng), sample_complex(rng)
        shifted = BracketFunction(b.flavor, b.omega1, b.omega2, b.omega, b.gauss_c + c, b.precision)
        expected = b(z) * mpmath.exp(c * z * z)
        return float(abs(shifted(z) - expected) / abs(expected))

    return [
        sampled_check(f"hirota[{tag}]", "three-term relation", hirota, samples, tol, seed, b.precision),
        sampled_check(f"hirota-permutation[{tag}]", "three-term relation", permuted, samples // 4 or 1,
                      tol, seed + 1, b.precision),
        sampled_check(f"oddness[{tag}]", "bracket parity", oddness, samples,
                      10.0 ** -(b.precision - 10), seed + 2, b.precision),
        sampled_check(f"gauss-covariance[{tag}]", "Gaussian factor", covariance, samples // 4 or 1,
                      10.0 ** -(b.precision - 10), seed + 3, b.precision),
    ]


# -- operator identities ---------------------------------------------------------


def commutator_checks(b, n, rmax, samples, tol, seed=0):
    p = model(n, b, seed)
    records = []
    for kind in ("DD", "DH", "HH"):
        for r in range(1, rmax + 1):
            for s in range(1, rmax + 1):
                if kind != "DH" and r >= s:
                    continue
                records.append(operator_check(
                    f"commutator-{kind}[{b.flavor},n={n},r={r},s={s}]", "commutativity",
                    lambda r=r, s=s, kind=kind: ruijsenaars.commutator_residual(r, s, p, kind),
                    samples, tol, seed))
    return records


def wronski_checks(b, n, lmax, samples, tol, seed=0, h_builder=ruijsenaars.build_H, label="wronski"):
    p = model(n, b, seed)
    return [
        operator_check(f"{label}[{b.flavor},n={n},l={l}]", "wronski-recurrence",
                       lambda l=l: ruijsenaars.wronski_residual_op(l, p, h_builder), samples, tol, seed)
        for l in range(1, lmax + 1)
    ]


def expansion_checks(b, n, lmax, samples, tol, seed=0, h_builder=ruijsenaars.build_H):
    p = model(n, b, seed)
    tag = f"{b.flavor},n={n}"
    records = []
    for l in range(1, min(lmax, 3) + 1):
        records.append(operator_check(
            f"h-determinant[{tag},l={l}]", "determinant-expansion",
            lambda l=l: ruijsenaars.h_via_determinant(l, p), samples, tol, seed,
            against=lambda l=l: h_builder(l, p)))
        records.append(operator_check(
            f"d-determinant[{tag},l={l}]", "determinant-expansion",
            lambda l=l: ruijsenaars.d_via_determinant(l, p, h_builder=h_builder), samples, tol, seed,
            against=lambda l=l: ruijsenaars.build_D(l, p)))
    for l in range(2, min(lmax, 3) + 1):
        records.append(operator_check(
            f"determinant-order[{tag},l={l}]", "determinant-expansion",
            lambda l=l: ruijsenaars.h_via_determinant(l, p, "column"), samples, tol, seed,
            against=lambda l=l: ruijsenaars.h_via_determinant(l, p, "row")))
    for l in range(1, lmax + 1):
        records.append(operator_check(
            f"h-compositions[{tag},l={l}]", "composition-expansion",
            lambda l=l: ruijsenaars.h_via_compositions(l, p), samples, tol, seed,
            against=lambda l=l: h_builder(l, p)))
    records.append(operator_check(
        f"h2-display[{tag}]", "composition-expansion",
        lambda: ruijsenaars.h2_closed_form(p), samples, tol, seed,
        against=lambda: h_builder(2, p)))
    records.append(operator_check(
        f"h3-display-corrected[{tag}]", "composition-expansion",
        lambda: ruijsenaars.h3_closed_form(p, d2d1_numerator=(1, 2)), samples, tol, seed,
        against=lambda: h_builder(3, p)))
    return records


def _random_lambda(rng, n, lmax):
    total = rng.randint(1, lmax)
    choices = multi_indices(n, total)
    return choices[rng.randrange(len(choices))]


def key_identity_checks(b, n, lmax, samples, tol, seed=0):
    p = model(n, b, seed)

    def wr1(rng):
        lam = _random_lambda(rng, n, lmax)
        return _relative(ruijsenaars.coefficient_identity_terms(lam, sample_point(rng, n), p))

    def key(rng):
        z, w = sample_point(rng, n), sample_point(rng, n)
        return _relative(ruijsenaars.key_identity_terms(z, w, sample_complex(rng), b))

    tag = f"{b.flavor},n={n}"
    return [
        sampled_check(f"coefficient-identity[{tag}]", "wronski-coefficients", wr1, samples, tol, seed,
                      b.precision),
        sampled_check(f"key-identity[{tag}]", "key-identity", key, samples, tol, seed + 1, b.precision),
    ]


# -- kernels -----------------------------------------------------------------------


def hd_checks(b, m, n, rmax, samples, tol, seed=0):
    records = []
    for r in range(rmax + 1):
        def residual(rng, r=r):
            x, y = sample_point(rng, m), sample_point(rng, n)
            delta = sample_complex(rng)
            guard(b(delta))
            guard(b(-n * delta / m))
            lhs, rhs = kernels.hd_identity_terms(r, x, y, delta, b)
            return kernels.relative_residual(lhs, rhs)

        records.append(sampled_check(f"dual-cauchy[{b.flavor},m={m},n={n},r={r}]", "dual-cauchy-kernel",
                                     residual, samples, tol, seed + r, b.precision))
    return records


def duality_checks(b, m, n, rmax, samples, tol, seed=0):
    records = []
    for r in range(rmax + 1):
        def residual(rng, r=r):
            x, y = sample_point(rng, m), sample_point(rng, n)
            a = [sample_complex(rng) for _ in range(m)]
            head = [sample_complex(rng) for _ in range(n - 1)]
            dp = kernels.DualityParams.balanced(a, head, sample_complex(rng), b)
            guard(b(dp.delta))
            return kernels.relative_residual(*kernels.duality_sum_terms(r, x, y, dp))

        records.append(sampled_check(f"duality-sum[{b.flavor},m={m},n={n},r={r}]", "duality-transformation",
                                     residual, samples, tol, seed + r, b.precision))
    return records


def trig_kernel_checks(m, n, order, samples, tol, seed=0, precision=64):
    records = []
    for kind in kernels.KINDS:
        def residual(rng, kind=kind):
            return kernels.trig_kernel_residuals(kind, u=sample_complex(rng), m=m, n=n, series_order=order,
                                                 precision=precision, seed=rng.randrange(2**31))

        records.append(sampled_check(f"trig-kernel-{kind}[m={m},n={n},order={order}]", "trig-kernels",
                                     residual, samples, tol, seed, precision))
    return records


def _random_rational(rng, low=1, high=19):
    return mpq(rng.randint(low, high), rng.randint(high + 1, 2 * high + 2)) * rng.choice((1, -1))


def kajihara_checks(m, n, order, qt: macdonald.QTField, samples=3, seed=0):
    rng = random.Random(seed)
    records = []
    for kind in ("DD", "HH", "HD", "generic"):
        def verdict(kind=kind):
            for _ in range(samples):
                z = [_random_rational(rng) for _ in range(m)]
                w = [_random_rational(rng) for _ in range(n)]
                if kind == "generic":
                    a = [_random_rational(rng) for _ in range(m)]
                    b = [_random_rational(rng) for _ in range(n)]
                else:
                    a, b = kernels.kajihara_preset(kind, m, n, qt.q, qt.t)
                if kernels.kajihara_residual(order, z, w, a, b, qt.q) != 0:
                    return False
            return True

        records.append(exact_check(f"kajihara-{kind}[m={m},n={n},R={order}]", "euler-transformation",
                                   verdict, samples))
    return records


# -- Macdonald ---------------------------------------------------------------------


def macdonald_checks(n, qt: macdonald.QTField, max_size=4, lmax=4, genfun_order=3):
    parts = [lam for d in range(max_size + 1) for lam in partitions(d, n)]
    records = [exact_check(f"spectrum-separation[n={n}]", "eigenvalues",
                           lambda: macdonald.check_separation(parts, n, qt) is None)]
    records.append(exact_check(
        f"eigen-D[n={n},|lambda|<={max_size}]", "eigenvalues",
        lambda: all(macdonald.eigen_check_D(lam, r, n, qt) for lam in parts for r in range(n + 1)),
        len(parts)))
    records.append(exact_check(
        f"eigen-H[n={n},|lambda|<={max_size},l<={lmax}]", "eigenvalues",
        lambda: all(macdonald.eigen_check_H(lam, l, n, qt) for lam in parts for l in range(lmax + 1)),
        len(parts)))
    records.append(exact_check(
        f"g-one-row[n={n},l<={lmax}]", "eigenvalues",
        lambda: all(macdonald.g_matches_one_row(l, n, qt) for l in range(lmax + 1))))
    records.append(exact_check(f"scalar-wronski[n={n},l<={lmax}]", "trig-wronski",
                               lambda: macdonald.scalar_wronski_check(lmax, n, qt)))
    records.append(exact_check(f"operator-wronski[n={n},l<={lmax}]", "trig-wronski",
                               lambda: macdonald.operator_wronski_trig_check(lmax, n, qt)))
    records.append(exact_check(
        f"generating-functions[n={n},order={genfun_order}]", "generating-functions",
        lambda: all(macdonald.genfun_check(lam, n, qt, genfun_order) for lam in parts),
        len(parts)))
    return records


def bridge_checks(n, kmax, samples, tol, seed=0, precision=64, prefactor="full"):
    records = []
    for kind in ("D", "H"):
        for k in range(1, kmax + 1):
            if kind == "D" and k > n:
                continue

            def residual(rng, kind=kind, k=k):
                x = sample_point(rng, n)
                delta, kappa = sample_complex(rng), sample_complex(rng)
                return macdonald.normalization_bridge_residual(kind, k, x, delta, kappa, prefactor, precision)

            records.append(sampled_check(f"normalization-{prefactor}-{kind}[n={n},k={k}]",
                                         "additive-multiplicative bridge", residual, samples, tol,
                                         seed + k, precision))
    return records


def display_checks(b, n, samples, tol, seed=0):
    """The H_2 and H_3 displays taken literally."""
    p = model(n, b, seed)
    tag = f"{b.flavor},n={n}"
    records = [
        operator_check(f"h2-display[{tag}]", "composition-expansion", lambda: ruijsenaars.h2_closed_form(p),
                       samples, tol, seed, against=lambda: ruijsenaars.build_H(2, p)),
        operator_check(f"h3-display-kappa-plus-delta[{tag}]", "composition-expansion",
                       lambda: ruijsenaars.h3_closed_form(p), samples, tol, seed,
                       against=lambda: ruijsenaars.build_H(3, p)),
    ]
    return records


# -- driver --------------------------------------------------------------------------


def run_suite(name: str, config: SuiteConfig | None = None) -> IdentityReport:
    """Run one named suite (or ``all``) and collect its checks."""
    cfg = config or SuiteConfig()
    if name != "all" and name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    names = SUITES if name == "all" else (name,)
    report = IdentityReport(name, cfg.as_dict())
    tol = cfg.tolerance()
    for suite in names:
        for flavor in cfg.flavors:
            b = cfg.bracket(flavor)
            if suite == "hirota":
                report.checks += hirota_checks(b, max(cfg.samples, 200), cfg.seed, cfg.tol)
            elif suite == "commute":
                report.checks += commutator_checks(b, cfg.n, cfg.rmax, cfg.samples, tol, cfg.seed)
            elif suite == "wronski":
                report.checks += wronski_checks(b, cfg.n, cfg.lmax, cfg.samples, tol, cfg.seed)
            elif suite == "expansions":
                report.checks += expansion_checks(b, cfg.n, cfg.lmax, cfg.samples, tol, cfg.seed)
            elif suite == "keyidentity":
                report.checks += key_identity_checks(b, cfg.n, cfg.lmax, cfg.samples, tol, cfg.seed)
            elif suite == "kernels":
                for m, k in KERNEL_GRID:
                    report.checks += hd_checks(b, m, k, 4, max(cfg.samples // 2, 1), tol, cfg.seed)
                    report.checks += duality_checks(b, m, k, 3, max(cfg.samples // 2, 1), tol, cfg.seed)
            elif suite == "displays":
                report.checks += display_checks(b, cfg.n, cfg.samples, tol, cfg.seed)
        if suite == "kernels":
            for m, k in KERNEL_GRID:
                report.checks += trig_kernel_checks(m, k, 3, 2, tol, cfg.seed, cfg.precision)
        elif suite == "kajihara":
            for m, k in KERNEL_GRID:
                report.checks += kajihara_checks(m, k, 3, cfg.qt_field(), 3, cfg.seed)
        elif suite == "macdonald":
            report.checks += macdonald_checks(cfg.n, cfg.qt_field(), lmax=cfg.lmax)
            report.checks += bridge_checks(cfg.n, 3, 10, tol, cfg.seed, cfg.precision)
        elif suite == "displays":
            report.checks += bridge_checks(cfg.n, 3, 10, tol, cfg.seed, cfg.precision, prefactor="naive")
    return report
