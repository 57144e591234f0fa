import itertools
import random

import mpmath
import pytest
from mpmath import mp

from artifact.bracket import BracketFunction
from artifact.diffop import op_equal_at, op_identity, op_scale, op_vanishes_at, sample_point
from artifact.ruijsenaars import (
    bracket_const,
    build_D,
    build_H,
    coefficient_identity_residual,
    coefficient_identity_terms,
    commutator_residual,
    compositions,
    d_coefficient,
    d_via_determinant,
    h2_closed_form,
    h3_closed_form,
    h_coefficient,
    h_via_compositions,
    h_via_determinant,
    key_identity_residual,
    key_identity_terms,
    sample_params,
    wronski_residual_op,
)

FLAVORS = ("elliptic", "trigonometric", "rational")
TOL = 1e-39


def params(n, flavor="elliptic", seed=0):
    return sample_params(n, BracketFunction(flavor), random.Random(seed))


def relative(terms):
    return abs(mpmath.fsum(terms)) / sum(abs(t) for t in terms)


# -- builders --------------------------------------------------------------------


def test_d1_single_variable_is_pure_shift():
    p = params(1)
    d1 = build_D(1, p)
    assert d1.support == ((1,),)
    assert abs(d1.coefficient((1,), (0.3,)) - 1) < 1e-60


def test_d1_coefficient_n2():
    p = params(2, seed=1)
    with mp.workdps(64):
        x = (mpmath.mpc(0.2, 0.1), mpmath.mpc(-0.35, 0.3))
        b = p.bracket
        expected = b(x[0] - x[1] + p.kappa) / b(x[0] - x[1])
        assert abs(build_D(1, p).coefficient((1, 0), x) - expected) < 1e-60
        assert abs(d_coefficient([0], x, p) - expected) < 1e-60


def test_d_vanishes_beyond_n_and_d0_is_identity():
    p = params(2)
    assert build_D(3, p).is_zero()
    assert build_D(0, p).support == ((0, 0),)
    assert build_H(0, p).support == ((0, 0),)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_h_single_variable_collapse(l):
    p = params(1, "trigonometric", seed=3)
    with mp.workdps(64):
        expected = mpmath.mpc(1)
        for k in range(l):
            expected *= bracket_const(p, 1, k) / bracket_const(p, 0, k + 1)
        assert abs(build_H(l, p).coefficient((l,), (0.17,)) - expected) < 1e-58 * abs(expected)


@pytest.mark.parametrize("flavor", FLAVORS)
def test_h1_proportional_to_d1(flavor):
    p = params(3, flavor)
    with mp.workdps(64):
        ratio = bracket_const(p, 1, 0) / bracket_const(p, 0, 1)
    assert op_equal_at(build_H(1, p), op_scale(build_D(1, p), ratio), tol=TOL).passed


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("mu", [(2, 1, 0), (0, 3, 1), (1, 1, 2)])
def test_h_coefficient_forms_agree(flavor, mu):
    p = params(3, flavor, seed=5)
    x = sample_point(random.Random(6), 3)
    x = x[: len(mu)]
    with mp.workdps(64):
        compact = h_coefficient(mu, x, p, "compact")
        for form in ("product", "transposed"):
            assert abs(h_coefficient(mu, x, p, form) - compact) < 1e-55 * abs(compact)
        assert abs(build_H(sum(mu), p).coefficient(mu, x) - compact) < 1e-55 * abs(compact)


def test_h_coefficient_unknown_form():
    with pytest.raises(ValueError):
        h_coefficient((1, 0), (0.1, 0.2), params(2), "other")


@pytest.mark.parametrize("flavor", FLAVORS)
def test_symmetry_under_permutations(flavor):
    p = params(3, flavor, seed=7)
    rng = random.Random(8)
    ops = [build_D(2, p), build_H(2, p), build_H(3, p)]
    with mp.workdps(64):
        for op in ops:
            x = sample_point(rng, 3)
            coeffs = op.coefficients(x)
            for sigma in itertools.permutations(range(3)):
                sx = tuple(x[sigma[k]] for k in range(3))
                scoeffs = op.coefficients(sx)
                for mu, v in coeffs.items():
                    # x'_k = x_{sigma(k)} carries shift mu_{sigma(k)}
                    smu = tuple(mu[sigma[k]] for k in range(3))
                    assert abs(scoeffs[smu] - v) < 1e-55 * max(1, abs(v))


# -- recurrence and identities ---------------------------------------------------


def test_recurrence_low_orders_written_out():
    p = params(2, "trigonometric", seed=11)
    c = lambda a, b: bracket_const(p, a, b)  # noqa: E731
    d1, d2, h1, h2 = build_D(1, p), build_D(2, p), build_H(1, p), build_H(2, p)
    with mp.workdps(64):
        l1 = op_equal_at(op_scale(h1, c(0, 1)), op_scale(d1, c(1, 0)), tol=TOL)
        lhs = op_scale(h2, c(0, 2)) + op_scale(d2, c(2, 0))
        rhs = op_scale(d1 @ h1, c(1, 1))
    assert l1.passed
    assert op_equal_at(lhs, rhs, tol=TOL).passed


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("n,l", [(1, 3), (2, 2), (3, 4)])
def test_wronski_recurrence(flavor, n, l):
    p = params(n, flavor, seed=n * 10 + l)
    assert op_vanishes_at(wronski_residual_op(l, p), num_samples=5, tol=TOL).passed


def test_wronski_rejects_l0():
    with pytest.raises(ValueError):
        wronski_residual_op(0, params(2))


def test_coefficient_identity_n1_by_hand():
    p = params(1, seed=12)
    terms = coefficient_identity_terms((1,), (0.3,), p)
    assert len(terms) == 2
    with mp.workdps(64):
        assert abs(terms[0] - bracket_const(p, 1, 0)) < 1e-58
        assert abs(terms[1] + bracket_const(p, 1, 0)) < 1e-58


@pytest.mark.parametrize("flavor,lam", [("trigonometric", (2, 1, 0)), ("elliptic", (1, 1)), ("rational", (0, 2, 2))])
def test_coefficient_identity(flavor, lam):
    p = params(len(lam), flavor, seed=13)
    x = sample_point(random.Random(14), len(lam))
    assert relative(coefficient_identity_terms(lam, x, p)) < TOL
    assert abs(coefficient_identity_residual(lam, x, p)) < 1e-50


def test_coefficient_identity_rejects_zero():
    with pytest.raises(ValueError):
        coefficient_identity_terms((0, 0), (0.1, 0.2), params(2))


def test_key_identity_n1_is_two_term_cancellation():
    b = BracketFunction("elliptic")
    terms = key_identity_terms([0.1 + 0.2j], [-0.3 + 0.1j], 0.45 - 0.2j, b)
    assert len(terms) == 2
    assert abs(terms[0] - 1) < 1e-60
    assert abs(terms[0] + terms[1]) < 1e-58


def test_key_identity_small_a_limit():
    b = BracketFunction("trigonometric")
    with mp.workdps(64):
        terms = key_identity_terms([0.1, 0.35j], [-0.3, 0.2 + 0.1j], mpmath.mpf("1e-30"), b)
        assert abs(mpmath.fsum(terms)) < 1e-25


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("n", [2, 4])
def test_key_identity(flavor, n):
    rng = random.Random(n)
    b = BracketFunction(flavor)
    z, w = sample_point(rng, n), sample_point(rng, n)
    a = sample_point(rng, 1)[0]
    assert relative(key_identity_terms(z, w, a, b)) < TOL
    assert abs(key_identity_residual(z, w, a, b)) < 1e-45


def test_key_identity_length_mismatch():
    with pytest.raises(ValueError):
        key_identity_terms([0.1], [0.2, 0.3], 0.4, BracketFunction("rational"))


# -- expansions ------------------------------------------------------------------


def test_compositions_count():
    assert len(list(compositions(4))) == 8
    assert list(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]


@pytest.mark.parametrize("flavor", FLAVORS)
@pytest.mark.parametrize("l", [1, 2, 3])
def test_h_determinant(flavor, l):
    p = params(3, flavor, seed=20 + l)
    assert op_equal_at(h_via_determinant(l, p), build_H(l, p), num_samples=5, tol=TOL).passed


def test_determinant_row_and_column_orders_agree():
    p = params(3, "elliptic", seed=30)
    row = h_via_determinant(3, p, "row")
    col = h_via_determinant(3, p, "column")
    assert op_equal_at(row, col, num_samples=5, tol=TOL).passed
    with pytest.raises(ValueError):
        h_via_determinant(2, p, "diagonal")


@pytest.mark.parametrize("flavor", FLAVORS)
def test_d_determinant(flavor):
    p = params(2, flavor, seed=31)
    assert op_equal_at(d_via_determinant(1, p), build_D(1, p), num_samples=5, tol=TOL).passed
    assert op_equal_at(d_via_determinant(2, p), build_D(2, p), num_samples=5, tol=TOL).passed


def test_d_determinant_collapses_beyond_n():
    p = params(2, "elliptic", seed=32)
    report = op_vanishes_at(d_via_determinant(3, p), num_samples=5, tol=TOL)
    assert report.passed


@pytest.mark.parametrize("l,n", [(2, 2), (3, 3), (4, 3)])
def test_h_compositions(l, n):
    p = params(n, "trigonometric", seed=40 + l)
    assert op_equal_at(h_via_compositions(l, p), build_H(l, p), num_samples=5, tol=TOL).passed


def test_h2_closed_form():
    p = params(3, "elliptic", seed=50)
    assert op_equal_at(h2_closed_form(p), build_H(2, p), num_samples=5, tol=TOL).passed


def test_h3_closed_form_needs_kappa_plus_two_delta():
    p = params(3, "elliptic", seed=51)
    corrected = op_equal_at(h3_closed_form(p, (1, 2)), build_H(3, p), num_samples=5, tol=TOL)
    naive = op_equal_at(h3_closed_form(p, (1, 1)), build_H(3, p), num_samples=5, tol=TOL)
    assert corrected.passed
    assert not naive.passed and naive.max_residual > 1e-6


# -- commutators -----------------------------------------------------------------


def test_commutator_with_identity_is_empty():
    p = params(2)
    assert commutator_residual(1, 0, p, "DD").is_zero() or op_vanishes_at(
        commutator_residual(1, 0, p, "DD"), num_samples=2
    ).max_residual == 0


@pytest.mark.parametrize(
    "kind,r,s,n,flavor",
    [("DD", 1, 2, 3, "elliptic"), ("HH", 1, 2, 2, "trigonometric"), ("DH", 2, 2, 3, "rational")],
)
def test_commutators_vanish(kind, r, s, n, flavor):
    p = params(n, flavor, seed=60)
    assert op_vanishes_at(commutator_residual(r, s, p, kind), num_samples=5, tol=TOL).passed


def test_commutator_kind_validation():
    with pytest.raises(ValueError):
        commutator_residual(1, 1, params(2), "DX")


def test_identity_operator_support():
    assert op_identity(3, 0.2).support == ((0, 0, 0),)
