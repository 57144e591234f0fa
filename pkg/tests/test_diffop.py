import random

import mpmath
import pytest
from mpmath import mp

from artifact.bracket import BracketFunction
from artifact.diffop import (
    DiffOperator,
    multi_indices,
    op_apply,
    op_compose,
    op_compose_all,
    op_equal_at,
    op_identity,
    op_linear,
    op_scale,
    op_vanishes_at,
    op_zero,
    sample_point,
    subset_index,
    unit,
)
from artifact.errors import DimensionMismatch
from artifact.ruijsenaars import bracket_const, build_D, build_H, sample_params


def params(n, flavor="elliptic", seed=0):
    return sample_params(n, BracketFunction(flavor), random.Random(seed))


def random_operator(n, delta, rng, terms=4, degree=2):
    """A small operator whose coefficients are random linear forms in x."""
    pool = [mu for d in range(degree + 1) for mu in multi_indices(n, d)]
    chosen = rng.sample(pool, min(terms, len(pool)))
    terms = {}
    for mu in chosen:
        a = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n + 1)]
        terms[mu] = lambda x, a=a: a[0] + sum(ai * xi for ai, xi in zip(a[1:], x))
    return DiffOperator.from_terms(n, delta, terms)


def max_coefficient_gap(a, b, x):
    ca, cb = a.coefficients(x), b.coefficients(x)
    return max((abs(ca.get(mu, 0) - cb.get(mu, 0)) for mu in set(ca) | set(cb)), default=0)


def test_multi_index_helpers():
    assert unit(3, 1) == (0, 1, 0)
    assert subset_index(4, [0, 3]) == (1, 0, 0, 1)
    assert len(multi_indices(4, 4)) == 35
    assert multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_identity_examples():
    ident = op_identity(2, 0.3)
    f = lambda x: x[0] ** 2 + 3 * x[1]  # noqa: E731
    x = (0.2 + 0.1j, -0.4)
    with mp.workdps(64):
        assert op_apply(ident, f, x) == f([mpmath.mpmathify(v) for v in x])
        assert op_apply(op_scale(ident, 3), f, x) == 3 * f([mpmath.mpmathify(v) for v in x])
    a = random_operator(2, 0.3, random.Random(1))
    for left in (op_compose(ident, a), op_compose(a, ident)):
        assert op_equal_at(left, a, num_samples=5).passed


def test_linear_cancellation_and_zero_scalar():
    a = build_D(1, params(2))
    diff = op_linear([1, -1], [a, a])
    report = op_vanishes_at(diff, num_samples=5)
    assert report.passed and report.max_residual == 0
    assert op_scale(a, 0).is_zero()


def test_linear_matches_direct_application():
    p = params(3, "trigonometric")
    d1, d2 = build_D(1, p), build_D(2, p)
    combo = op_linear([2, 3], [d1, d2])
    f = lambda x: x[0] ** 2 * x[1] + x[2] ** 3  # noqa: E731
    x = (0.1 + 0.2j, -0.3 + 0.05j, 0.4 - 0.1j)
    with mp.workdps(64):
        expected = 2 * op_apply(d1, f, x) + 3 * op_apply(d2, f, x)
        assert abs(op_apply(combo, f, x) - expected) < 1e-55 * abs(expected)


def test_single_term_composition_n1():
    t = DiffOperator.from_terms(1, 0.25, {(1,): lambda x: 1})
    a = DiffOperator.from_terms(1, 0.25, {(1,): lambda x: x[0] ** 2 + 1})
    comp = op_compose(t, a)
    assert comp.support == ((2,),)
    with mp.workdps(64):
        x = mpmath.mpf("0.3")
        assert abs(comp.coefficient((2,), (x,)) - ((x + 0.25) ** 2 + 1)) < 1e-60


def test_apply_d1_n1_rational():
    p = sample_params(1, BracketFunction("rational"), random.Random(2))
    assert abs(op_apply(build_D(1, p), lambda x: x[0], (0,)) - p.delta) < 1e-60


def test_apply_d1_n2_trig_hand_expansion():
    p = params(2, "trigonometric", seed=4)
    b = p.bracket
    f = lambda x: mpmath.expjpi(2 * x[0]) + mpmath.expjpi(2 * x[1])  # noqa: E731
    with mp.workdps(64):
        x = sample_point(random.Random(9), 2)
        d, k = p.delta, p.kappa
        a1 = b(x[0] - x[1] + k) / b(x[0] - x[1])
        a2 = b(x[1] - x[0] + k) / b(x[1] - x[0])
        expected = a1 * f((x[0] + d, x[1])) + a2 * f((x[0], x[1] + d))
        assert abs(op_apply(build_D(1, p), f, x) - expected) < 1e-58 * abs(expected)


def test_equal_at_examples():
    p = params(3)
    d1 = build_D(1, p)
    same = op_equal_at(d1, d1, num_samples=4)
    assert same.passed and same.max_residual == 0
    with mp.workdps(64):
        ratio = bracket_const(p, 0, 1) / bracket_const(p, 1, 0)
    assert op_equal_at(d1, op_scale(build_H(1, p), ratio), num_samples=5).passed
    wrong = op_equal_at(d1, build_D(2, p), num_samples=5)
    assert not wrong.passed and wrong.max_residual > 0.1


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        op_compose(op_identity(2, 0.3), op_identity(3, 0.3))
    with pytest.raises(DimensionMismatch):
        op_linear([1, 1], [op_identity(2, 0.3), op_identity(2, 0.5)])


def test_bad_multi_index_rejected():
    with pytest.raises(ValueError):
        DiffOperator.from_terms(2, 0.1, {(1,): lambda x: 1})
    with pytest.raises(ValueError):
        DiffOperator.from_terms(2, 0.1, {(1, -1): lambda x: 1})


@pytest.mark.parametrize("seed", range(5))
def test_associativity(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    a, b, c = (random_operator(n, 0.37 - 0.1j, rng, terms=rng.randint(1, 5)) for _ in range(3))
    left = op_compose(op_compose(a, b), c)
    right = op_compose(a, op_compose(b, c))
    assert op_equal_at(left, right, num_samples=10).passed


@pytest.mark.parametrize("seed", range(3))
def test_bilinearity(seed):
    rng = random.Random(100 + seed)
    a, b, c = (random_operator(2, 0.21, rng) for _ in range(3))
    s, t = 2 - 1j, 0.5
    lhs = op_compose(op_linear([s, t], [a, b]), c)
    rhs = op_linear([s, t], [op_compose(a, c), op_compose(b, c)])
    assert op_equal_at(lhs, rhs, num_samples=5).passed
    lhs = op_compose(c, op_linear([s, t], [a, b]))
    rhs = op_linear([s, t], [op_compose(c, a), op_compose(c, b)])
    assert op_equal_at(lhs, rhs, num_samples=5).passed


@pytest.mark.parametrize("seed", range(4))
def test_support_and_grading(seed):
    rng = random.Random(200 + seed)
    a = random_operator(3, 0.4, rng)
    b = random_operator(3, 0.4, rng)
    comp = op_compose(a, b)
    sums = {tuple(x + y for x, y in zip(mu, nu)) for mu in a.support for nu in b.support}
    assert set(comp.support) <= sums
    p = params(3, seed=seed)
    graded = op_compose_all([build_D(1, p), build_H(2, p)])
    assert {sum(mu) for mu in graded.support} == {3}


def test_zero_composition_is_zero():
    p = params(2)
    assert op_compose(op_zero(2, p.delta), build_D(1, p)).is_zero()
    assert build_D(3, p).is_zero()
