import itertools
import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import as_pairs, crisp, function_classes, fuzzy_systems, measures
from fuzzyvc import core, lp, nets, widths
from fuzzyvc.core import FunctionClass, FuzzySet, FuzzySetSystem
from fuzzyvc.errors import DomainError, InfeasibleError, NotFoundError
from fuzzyvc.widths import DiscreteMeasure

TRIANGLE = crisp(3, [0, 1], [1, 2], [0, 2])


def test_clamp_examples():
    row = nets.clamp_class(FunctionClass(3, ((0, Fr(1, 2), 1),)), Fr(1, 4), Fr(3, 4)).rows[0]
    assert row == (Fr(1, 4), Fr(1, 2), Fr(3, 4))
    Q = FunctionClass(2, ((Fr(1, 3), 1), (0, Fr(2, 7))))
    assert nets.clamp_class(Q, 0, 1) == Q
    assert nets.clamp_class(FunctionClass(1, ((Fr(1, 3),),)), Fr(1, 2), Fr(3, 4)).rows[0] == (Fr(1, 2),)
    with pytest.raises(DomainError):
        nets.clamp_class(Q, Fr(1, 2), Fr(1, 2))


def test_is_eps_net_examples():
    singles = crisp(10, *[[i] for i in range(10)])
    assert nets.is_eps_net(set(), singles, DiscreteMeasure.uniform(10), Fr(1, 5))
    F = FuzzySetSystem(3, (FuzzySet({0, 1}, set()),))
    u3 = DiscreteMeasure.uniform(3)
    assert not nets.is_eps_net(set(), F, u3, Fr(1, 2))
    assert nets.is_eps_net({2}, F, u3, Fr(1, 2))
    with pytest.raises(DomainError):
        nets.is_eps_net({5}, F, u3, Fr(1, 2))


def test_certify_rejects_non_nets():
    F = FuzzySetSystem(3, (FuzzySet({0, 1}, {2}),))
    with pytest.raises(AssertionError):
        nets.certify_net({2}, F, DiscreteMeasure.uniform(3), Fr(1, 2))


def test_net_from_approximation_examples():
    u2 = DiscreteMeasure.uniform(2)
    cert = nets.net_from_approximation(FunctionClass(2, ((0, 0),)), u2, Fr(1, 4), Fr(3, 4), Fr(1, 2))
    assert len(cert.net) == 1
    cert = nets.net_from_approximation(FunctionClass(2, ((0, 1),)), u2, 0, 1, Fr(3, 4))
    assert len(cert.net) <= 2
    assert nets.is_eps_net(cert.net, core.slice_system(FunctionClass(2, ((0, 1),)), 0, 1), u2, Fr(3, 4))


def test_find_net_examples():
    u3 = DiscreteMeasure.uniform(3)
    light = crisp(3, [0])
    assert nets.find_eps_net(light, u3, Fr(1, 2)).net == ()
    cert = nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), "exhaustive_min")
    assert len(cert.net) == 2 and cert.heavy_sets == 3
    with_blank = FuzzySetSystem(3, TRIANGLE.sets + (FuzzySet(set(), set()),))
    for strategy in ("greedy", "exhaustive_min"):
        assert nets.find_eps_net(with_blank, u3, Fr(1, 3), strategy).net == \
            nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), strategy).net


def test_net_size_formula():
    assert nets.net_size(2, Fr(1, 4), 16) == math.ceil(16 * 2 * 4 * math.log(4 + math.e))
    assert nets.net_size(1, 1, 1) == math.ceil(math.log(1 + math.e))
    assert nets.net_size(0, Fr(1, 2)) == 0


def test_random_net_is_seeded_and_reports_failure():
    u3 = DiscreteMeasure.uniform(3)
    a = nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), "random", seed=9)
    assert a == nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), "random", seed=9)
    assert nets.is_eps_net(a.net, TRIANGLE, u3, Fr(1, 3))
    # one sample point can never meet all three edge complements
    with pytest.raises(NotFoundError):
        nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), "random", constant=1e-9, retries=5)
    with pytest.raises(DomainError):
        nets.find_eps_net(TRIANGLE, u3, Fr(1, 3), "lucky")


@given(fuzzy_systems(max_ground=5, max_sets=6, min_ground=1),
       st.sampled_from([Fr(1, 5), Fr(1, 3), Fr(1, 2), Fr(1)]), st.data())
def test_net_strategies(F, eps, data):
    mu = data.draw(measures(F.ground_size))
    best = oracles.min_net(as_pairs(F), mu.weights, eps)
    exact = nets.find_eps_net(F, mu, eps, "exhaustive_min")
    assert len(exact.net) == best
    greedy = nets.find_eps_net(F, mu, eps, "greedy")
    assert len(greedy.net) >= best
    for cert in (exact, greedy):
        assert nets.is_eps_net(cert.net, F, mu, eps)
    # supersets and larger eps keep the property
    assert nets.is_eps_net(set(exact.net) | {0}, F, mu, eps)
    assert nets.is_eps_net(exact.net, F, mu, min(Fr(1), eps * 2))


@settings(max_examples=40)
@given(function_classes(max_points=3, max_rows=3), st.integers(0, 3), st.integers(1, 4),
       st.sampled_from([Fr(1, 4), Fr(1, 2), Fr(1)]), st.data())
def test_every_small_approximation_is_a_net(Q, r4, gap, eps, data):
    r, s = Fr(r4, 4), Fr(min(4, r4 + gap), 4)
    if r >= s:
        return
    mu = data.draw(measures(Q.point_count))
    delta = (s - r) * eps / 2
    clamped = nets.clamp_class(Q, r, s)
    F = core.slice_system(Q, r, s)
    for size in range(1, 4):
        for xbar in itertools.combinations_with_replacement(range(Q.point_count), size):
            if oracles.deviation(xbar, clamped.rows, mu.weights) <= delta:
                assert nets.is_eps_net(set(xbar), F, mu, eps)


# --- transversals via nets ------------------------------------------------


def test_transversal_examples():
    T, cert = nets.transversal_via_net(TRIANGLE)
    assert cert.tau_star == Fr(3, 2)
    assert cert.measure == DiscreteMeasure.uniform(3)
    assert len(T) == 2 and core.inner_outer(TRIANGLE)[1].is_transversal(T)
    T, cert = nets.transversal_via_net(FuzzySetSystem(1, (FuzzySet({0}, set()),)))
    assert T == (0,) and cert.tau_star == 1
    assert cert.measure == DiscreteMeasure.point_mass(1, 0)


def test_transversal_needs_nonempty_inner_sets():
    with pytest.raises(InfeasibleError):
        nets.transversal_via_net(FuzzySetSystem(2, (FuzzySet(set(), {0}),)))


def test_tau_bound_below_tau_star_is_rejected():
    with pytest.raises(DomainError):
        nets.transversal_via_net(TRIANGLE, tau_bound=1)


@st.composite
def systems_with_inner_points(draw):
    F = draw(fuzzy_systems(max_ground=6, max_sets=7, min_ground=1))
    fixed = []
    for S in F.sets:
        if not S.plus:
            x = draw(st.integers(0, F.ground_size - 1))
            S = FuzzySet({x}, S.minus - {x})
        fixed.append(S)
    return FuzzySetSystem(F.ground_size, tuple(fixed))


@given(systems_with_inner_points(), st.sampled_from(["greedy", "exhaustive_min"]))
def test_transversal_via_net_is_a_transversal(F, strategy):
    T, cert = nets.transversal_via_net(F, strategy)
    inner, outer = core.inner_outer(F)
    if not F.sets:
        assert T == () and cert.tau_star == 0 and cert.measure is None
        return
    assert outer.is_transversal(T)
    assert cert.tau_star == lp.fractional_transversal(inner)[0]
    assert sum(cert.measure.weights) == 1
    # every set is heavy for the 1/tau_star net
    assert all(cert.measure.mass(s) >= 1 / cert.tau_star for s in inner.sets)
    outer_min = oracles.min_hitting([set(s) for s in outer.sets], F.ground_size)
    assert len(T) >= outer_min >= math.ceil(lp.fractional_transversal(outer)[0])
    assert oracles.min_hitting([set(s) for s in inner.sets], F.ground_size) >= math.ceil(cert.tau_star)


def test_net_respects_widths_measure_checks():
    with pytest.raises(DomainError):
        nets.heavy_sets(TRIANGLE, DiscreteMeasure.uniform(2), Fr(1, 2))
    assert widths.approximation_error((0,), FunctionClass(1, ((1,),)), DiscreteMeasure.uniform(1)) == 0
