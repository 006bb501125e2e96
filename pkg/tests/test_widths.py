import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import function_classes, measures
from fuzzyvc import widths
from fuzzyvc.core import FunctionClass
from fuzzyvc.errors import CapacityError, DomainError, NotFoundError
from fuzzyvc.widths import DiscreteMeasure

U2 = DiscreteMeasure.uniform(2)
Q01 = FunctionClass(2, ((0, 1),))
CRISP4 = FunctionClass(2, ((0, 0), (1, 1), (0, 1), (1, 0)))

point_sets = st.integers(1, 4).flatmap(lambda n: st.lists(
    st.tuples(*[st.integers(-4, 4).map(lambda v: Fr(v, 4))] * n), min_size=1, max_size=4))


def test_measure_validation():
    with pytest.raises(DomainError):
        DiscreteMeasure((Fr(1, 2), Fr(1, 3)))
    with pytest.raises(DomainError):
        DiscreteMeasure((Fr(3, 2), Fr(-1, 2)))
    mu = DiscreteMeasure((Fr(1, 4), 0, Fr(3, 4)))
    assert mu.support == (0, 2)
    assert mu.mass({0, 1}) == Fr(1, 4)
    assert mu.expectation((1, 1, 0)) == Fr(1, 4)


# --- mean width -----------------------------------------------------------


def test_mean_width_examples():
    assert widths.mean_width([(0,)]).value == 0
    assert widths.mean_width([(0,), (1,)]).value == Fr(1, 2)
    est = widths.mean_width([(1, 0), (0, 1)])
    assert est.value == Fr(1, 2) and est.std_error == 0 and est.mode == "exact"


def test_mean_width_errors():
    with pytest.raises(DomainError):
        widths.mean_width([(0,)], "gaussian", "exact")
    with pytest.raises(CapacityError):
        widths.mean_width([(0,) * 21])
    with pytest.raises(DomainError):
        widths.mean_width([])
    with pytest.raises(DomainError):
        widths.mean_width([(0,), (0, 1)])


@given(point_sets)
def test_exact_width_matches_enumeration(A):
    assert widths.mean_width(A).value == oracles.rademacher(A)


@given(point_sets, st.integers(-4, 4), st.integers(0, 4))
def test_width_translation_and_scaling(A, shift, c):
    w = widths.mean_width(A).value
    assert w >= 0
    v = Fr(shift, 3)
    assert widths.mean_width([tuple(a + v for a in p) for p in A]).value == w
    assert widths.mean_width([tuple(Fr(c, 2) * a for a in p) for p in A]).value == Fr(c, 2) * w


def test_exact_width_handles_large_integers():
    A = [(Fr(10 ** 15),) * 20, (Fr(0),) * 20]
    # each sign vector picks the positive part of sigma . a
    n = 20
    expected = Fr(10 ** 15) * sum(max(0, 2 * k - n) * math.comb(n, k) for k in range(n + 1)) / 2 ** n
    assert widths.mean_width(A).value == expected


def test_monte_carlo_is_seeded():
    A = [(Fr(1, 2), 0, 1), (1, 0, 0)]
    a = widths.mean_width(A, "gaussian", "monte_carlo", 5000, seed=11)
    b = widths.mean_width(A, "gaussian", "monte_carlo", 5000, seed=11)
    assert a == b and isinstance(a.value, float) and a.std_error > 0
    r = widths.mean_width(A, "rademacher", "monte_carlo", 40000, seed=3)
    assert abs(r.value - float(widths.mean_width(A).value)) < 4 * r.std_error + 1e-12


# --- width profile --------------------------------------------------------


def test_width_profile_examples():
    assert widths.width_profile(FunctionClass(3, ((Fr(1, 3),) * 3,)), 2).value == 0
    Q = FunctionClass(1, ((0,), (1,)))
    assert widths.width_profile(Q, 1).value == Fr(1, 2)
    assert widths.width_profile(Q, 1, mu=DiscreteMeasure.uniform(1)).value == Fr(1, 2)


@settings(max_examples=25)
@given(function_classes(max_points=3, max_rows=3), st.integers(1, 3))
def test_sup_width_matches_ordered_tuples(Q, n):
    est = widths.width_profile(Q, n)
    assert not est.lower_bound
    assert est.value == oracles.r_sup(Q.rows, Q.point_count, n)


@settings(max_examples=25)
@given(function_classes(max_points=3, max_rows=3), st.integers(1, 3), st.data())
def test_complexity_matches_weighted_enumeration(Q, n, data):
    mu = data.draw(measures(Q.point_count))
    assert widths.width_profile(Q, n, mu=mu).value == oracles.r_mu(Q.rows, mu.weights, n)
    assert widths.symmetric_rademacher_complexity(Q, mu, n) == oracles.symmetric_r(Q.rows, mu.weights, n)


def test_complexity_monte_carlo_close_to_exact():
    Q = FunctionClass(3, ((0, Fr(1, 2), 1), (1, 0, Fr(1, 4)), (Fr(1, 2), Fr(1, 2), 0)))
    mu = DiscreteMeasure((Fr(1, 2), Fr(1, 4), Fr(1, 4)))
    exact = float(widths.width_profile(Q, 3, mu=mu).value)
    mc = widths.width_profile(Q, 3, mu=mu, mode="monte_carlo", samples=60000, seed=2)
    assert abs(mc.value - exact) < 4 * mc.std_error


def test_profile_falls_back_to_lower_bound():
    Q = FunctionClass(6, ((0, 1, 0, 1, 0, 1), (1, 0, 1, 0, 1, 0)))
    est = widths.width_profile(Q, 4, enumeration_limit=10, samples=50, seed=1)
    assert est.lower_bound
    assert est.value <= widths.width_profile(Q, 4).value


@given(function_classes(max_points=3, max_rows=4), st.integers(1, 4))
def test_mean_width_dominates_complexity(Q, n):
    # the weighted average never exceeds the supremum
    mu = DiscreteMeasure.uniform(Q.point_count)
    assert widths.width_profile(Q, n, mu=mu).value * n <= widths.width_profile(Q, n).value


# --- approximations -------------------------------------------------------


def test_is_eps_approximation_examples():
    assert widths.is_eps_approximation((0, 1), Q01, U2, 0)
    assert not widths.is_eps_approximation((0,), Q01, U2, Fr(1, 4))
    assert widths.is_eps_approximation((0, 1), CRISP4, U2, Fr(1, 2))


def test_find_approximation_examples():
    mu = DiscreteMeasure((Fr(1, 3), Fr(2, 3)))
    xbar = widths.find_eps_approximation(FunctionClass(2, ((Fr(1, 5),) * 2,)), mu, Fr(1, 100),
                                         "exhaustive_min")
    assert len(xbar) == 1
    assert widths.find_eps_approximation(Q01, U2, Fr(1, 4), "exhaustive_min") == (0, 1)
    with pytest.raises(NotFoundError) as info:
        widths.find_eps_approximation(Q01, U2, Fr(1, 4), "exhaustive_min", size_cap=1)
    assert info.value.best == Fr(1, 2)


def test_skewed_crisp_example_by_exhaustion():
    mu = DiscreteMeasure((Fr(3, 4), Fr(1, 4)))
    xbar = widths.find_eps_approximation(CRISP4, mu, Fr(1, 4), "exhaustive_min")
    assert len(xbar) == oracles.min_approximation_size(CRISP4.rows, mu.weights, Fr(1, 4), 6)
    assert widths.approximation_error(xbar, CRISP4, mu) <= Fr(1, 4)
    # the single point 0 is already within 1/4 of every expectation
    assert xbar == (0,)
    assert widths.approximation_error((0, 0, 0, 1), CRISP4, mu) == 0


@settings(max_examples=40)
@given(function_classes(max_points=3, max_rows=3), st.sampled_from([Fr(1, 4), Fr(1, 3), Fr(1, 2)]),
       st.data())
def test_exhaustive_min_is_minimum(Q, eps, data):
    mu = data.draw(measures(Q.point_count))
    want = oracles.min_approximation_size(Q.rows, mu.weights, eps, 4)
    try:
        xbar = widths.find_eps_approximation(Q, mu, eps, "exhaustive_min", size_cap=4)
    except NotFoundError:
        assert want is None
        return
    assert len(xbar) == want
    assert set(xbar) <= set(mu.support)
    assert oracles.deviation(xbar, Q.rows, mu.weights) <= eps


def test_random_approximation_is_verified_and_seeded():
    Q = FunctionClass(3, ((0, Fr(1, 2), 1), (1, 1, 0)))
    mu = DiscreteMeasure((Fr(1, 4), Fr(1, 2), Fr(1, 4)))
    a = widths.find_eps_approximation(Q, mu, Fr(1, 5), "random", seed=4)
    assert a == widths.find_eps_approximation(Q, mu, Fr(1, 5), "random", seed=4)
    assert widths.is_eps_approximation(a, Q, mu, Fr(1, 5))


def test_approximation_errors():
    with pytest.raises(DomainError):
        widths.find_eps_approximation(Q01, U2, 0)
    with pytest.raises(DomainError):
        widths.find_eps_approximation(Q01, U2, Fr(1, 2), "psychic")
    with pytest.raises(DomainError):
        widths.approximation_error((), Q01, U2)


def test_stated_existence_fails_for_one_function():
    # The plain mean width of a single function is 0, yet one sample point
    # cannot approximate its mean.  The symmetrized complexity sees this.
    assert widths.width_profile(Q01, 1).value == 0
    with pytest.raises(NotFoundError):
        widths.find_eps_approximation(Q01, U2, Fr(1, 4), "exhaustive_min", size_cap=1)
    assert 2 * widths.symmetric_rademacher_complexity(Q01, U2, 1) >= Fr(1, 4)


@settings(max_examples=40)
@given(function_classes(max_points=3, max_rows=3), st.integers(1, 4),
       st.sampled_from([Fr(1, 4), Fr(1, 3), Fr(1, 2)]), st.data())
def test_symmetrized_existence(Q, n, eps, data):
    mu = data.draw(measures(Q.point_count))
    if 2 * widths.symmetric_rademacher_complexity(Q, mu, n) < eps:
        widths.find_eps_approximation(Q, mu, eps, "exhaustive_min", size_cap=n)


# --- covering -------------------------------------------------------------


def test_covering_examples():
    Q = FunctionClass(1, ((0,), (1,)))
    assert widths.covering_number(Q, (0,), Fr(2, 5), "internal") == 2
    assert widths.covering_number(Q, (0,), Fr(1, 2), "grid", Fr(1, 2)) == 1
    assert widths.covering_number(Q, (0,), Fr(1, 2), "internal") == 2
    assert widths.covering_number(Q, (0,), Fr(1, 2), "packing") == 1
    assert widths.covering_number(Q, (0,), Fr(2, 5), "packing") == 2


def test_covering_errors():
    Q = FunctionClass(5, ((0,) * 5,))
    with pytest.raises(CapacityError):
        widths.covering_number(Q, range(5), Fr(1, 2), "grid", Fr(1, 2))
    with pytest.raises(DomainError):
        widths.covering_number(Q, (0,), Fr(1, 2), "grid", Fr(2, 5))
    with pytest.raises(DomainError):
        widths.covering_number(Q, (0,), 0)


@settings(max_examples=40)
@given(function_classes(max_points=2, max_rows=5), st.sampled_from([Fr(1, 8), Fr(1, 4), Fr(1, 2)]),
       st.data())
def test_covering_matches_oracles(Q, eps, data):
    xbar = data.draw(st.lists(st.integers(0, Q.point_count - 1), min_size=1, max_size=2))
    vecs = Q.values_at(xbar)
    internal = widths.covering_number(Q, xbar, eps, "internal")
    grid = widths.covering_number(Q, xbar, eps, "grid", Fr(1, 4))
    pack = widths.covering_number(Q, xbar, eps, "packing")
    assert internal == oracles.internal_cover(vecs, eps)
    assert grid == oracles.grid_cover(vecs, eps, Fr(1, 4))
    assert pack == oracles.packing(vecs, eps)
    assert pack <= grid and pack <= internal


@given(function_classes(max_points=3, max_rows=6, grid=8), st.data())
def test_covering_monotone_in_eps(Q, data):
    xbar = data.draw(st.lists(st.integers(0, Q.point_count - 1), min_size=1, max_size=3))
    for method in ("internal", "packing"):
        counts = [widths.covering_number(Q, xbar, Fr(k, 8), method) for k in range(1, 9)]
        assert counts == sorted(counts, reverse=True)


# --- bounds and deviation -------------------------------------------------


def test_covering_bound_values():
    v = widths.covering_bound(1, 1, 1)
    assert v == pytest.approx(2 * 4 ** math.log(2 * math.e))
    assert v == pytest.approx(20.9125, abs=1e-4)
    assert widths.covering_bound(1, 2, 1) > v
    assert widths.covering_bound(1, 1, Fr(1, 2)) > v
    with pytest.raises(DomainError):
        widths.covering_bound(0, 1, 1)


def test_deviation_bound_values():
    assert widths.deviation_bound(36, 1, 1) == pytest.approx(432 / math.e)
    assert widths.deviation_bound(36, 1, 1) == pytest.approx(158.92, abs=0.01)
    assert widths.deviation_bound(288, 1, 1) == pytest.approx(1.159, abs=1e-3)
    assert widths.deviation_bound(50, Fr(1, 2), 0) == 0
    with pytest.raises(DomainError):
        widths.deviation_bound(1, Fr(1, 2), 1)


def test_approximation_size_takes_callers_constant():
    a = widths.approximation_size(Fr(1, 4), Fr(1, 10), 2, 1.0)
    assert widths.approximation_size(Fr(1, 4), Fr(1, 10), 2, 3.0) == pytest.approx(3 * a)


def test_deviation_estimate_examples():
    const = FunctionClass(2, ((Fr(1, 3), Fr(1, 3)),))
    assert widths.deviation_estimate(const, U2, 3, Fr(1, 10), 500, seed=1) == 0.0
    est = widths.deviation_estimate(Q01, U2, 1, Fr(1, 4), 20000, seed=5)
    assert abs(est - 0.5) < 3 * math.sqrt(0.25 / 20000)
    assert est == widths.deviation_estimate(Q01, U2, 1, Fr(1, 4), 20000, seed=5)


def test_deviation_estimate_threshold_is_strict():
    # Av - E equals eps exactly on x = 1; a strict inequality never fires.
    assert widths.deviation_estimate(Q01, U2, 1, Fr(1, 2), 2000, seed=0) == 0.0
