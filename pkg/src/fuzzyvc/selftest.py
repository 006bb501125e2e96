"""Seeded property suites run by ``fuzzyvc selftest``.

Each suite draws its instances from a stream derived from the root seed and
returns a plain dict, so the whole report is a deterministic function of
``(seed, budget)``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import core, helly, lp, nets, widths
from .core import FunctionClass, FuzzySet, FuzzySetSystem, FuzzyRelation, Membership, SetSystem
from .errors import FuzzyVCError, PreconditionError
from .generators import distance_functions, random_function_matrix, random_fuzzy
from .widths import DiscreteMeasure

BUDGETS = {
    "small": {"sauer": 40, "fat": 20, "width": 8, "width_samples": 20_000, "approx": 20,
              "qnet": 12, "separation": 25, "duality": 40, "transversal": 20, "helly": 12,
              "pq": 5, "deviation": 5, "deviation_trials": 2000},
    "medium": {"sauer": 200, "fat": 100, "width": 50, "width_samples": 100_000, "approx": 60,
               "qnet": 50, "separation": 100, "duality": 200, "transversal": 100, "helly": 50,
               "pq": 25, "deviation": 20, "deviation_trials": 20_000},
}


def _rng(seed: int, suite: str, i: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, sum(map(ord, suite)), i])


def _measure(rng, size, support_max=None) -> DiscreteMeasure:
    w = [int(v) for v in rng.integers(0, 4, size=size)]
    if support_max is not None:
        for x in range(support_max, size):
            w[x] = 0
    if sum(w) == 0:
        w[0] = 1
    total = sum(w)
    return DiscreteMeasure(tuple(Fraction(v, total) for v in w))


def _result(name, failures, checked, **notes) -> dict:
    out = {"suite": name, "passed": not failures, "checked": checked,
           "failures": failures[:3]}
    out.update(notes)
    return out


# ---------------------------------------------------------------------------


def sauer_instance(seed, i) -> FuzzySetSystem:
    rng = _rng(seed, "sauer", i)
    n = int(rng.integers(1, 9))
    k = int(rng.integers(1, 41))
    p_plus = Fraction(int(rng.integers(1, 4)), 6)
    p_minus = Fraction(int(rng.integers(1, 4)), 6)
    if p_plus + p_minus > 1:
        p_minus = 1 - p_plus
    return random_fuzzy(n, k, p_plus, p_minus, seed=int(rng.integers(2 ** 32)))


def suite_sauer(seed, count):
    failures, checked = [], 0
    for i in range(count):
        F = sauer_instance(seed, i)
        d = core.vc_dimension(F)
        for n in range(F.ground_size + 1):
            checked += 1
            if core.shatter_function(F, n) > core.sauer_bound(d or 0, n):
                failures.append({"instance": i, "n": n})
    return _result("sauer-shelah", failures, checked)


def fat_instance(seed, i) -> FunctionClass:
    rng = _rng(seed, "fat", i)
    return random_function_matrix(int(rng.integers(1, 6)), int(rng.integers(1, 9)), 8,
                                  seed=int(rng.integers(2 ** 32)))


def suite_fat(seed, count):
    failures, checked = [], 0
    for i in range(count):
        Q = fat_instance(seed, i)
        for eps in (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)):
            checked += 1
            fs = core.fat_shattering(Q, eps)
            lo = core.vc_eps(Q, 2 * eps)
            hi = (2 * math.ceil(1 / eps) - 1) * core.vc_eps(Q, eps)
            if not lo <= fs <= hi:
                failures.append({"instance": i, "eps": str(eps), "bounds": [lo, fs, hi]})
    return _result("fat-shattering-sandwich", failures, checked)


def width_instance(seed, i) -> list:
    rng = _rng(seed, "width", i)
    dim = int(rng.integers(1, 7))
    size = int(rng.integers(1, 9))
    return [tuple(Fraction(int(v), 8) for v in rng.integers(0, 9, size=dim)) for _ in range(size)]


def width_sandwich(points, samples, seed) -> tuple:
    """Check both sides of ``w_R <= sqrt(pi/2) w_G <= 2 sqrt(ln n) w_R`` within 3 standard errors.

    The right side is skipped in dimension 1, where ``ln 1 = 0``.
    """
    n = len(points[0])
    wr = float(widths.mean_width(points).value)
    g = widths.mean_width(points, "gaussian", "monte_carlo", samples, seed)
    c = math.sqrt(math.pi / 2)
    left = wr <= c * (g.value + 3 * g.std_error)
    right = True if n == 1 else c * (g.value - 3 * g.std_error) <= 2 * math.sqrt(math.log(n)) * wr
    return left, right


def suite_width(seed, count, samples):
    failures = []
    for i in range(count):
        left, right = width_sandwich(width_instance(seed, i), samples, seed + i)
        if not (left and right):
            failures.append({"instance": i, "left": left, "right": right})
    return _result("rademacher-gaussian-sandwich", failures, count)


def approx_instance(seed, i) -> tuple:
    rng = _rng(seed, "approx", i)
    pts = int(rng.integers(1, 5))
    Q = random_function_matrix(pts, int(rng.integers(1, 5)), 4, seed=int(rng.integers(2 ** 32)))
    return Q, _measure(rng, pts)


def suite_approx(seed, count):
    """Approximations of size <= n whenever ``r_Q(n)/n < eps``, and the symmetrized variant.

    The first check is reported as stated; the single nonconstant function
    has zero mean width yet needs more than one sample point, so it can fail.
    """
    stated, symmetric, held, held_sym = [], [], 0, 0
    for i in range(count):
        Q, mu = approx_instance(seed, i)
        for n in range(1, 7):
            r = widths.width_profile(Q, n).value
            R = widths.symmetric_rademacher_complexity(Q, mu, n)
            for eps in (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
                for hyp, bucket in ((r / n < eps, stated), (2 * R < eps, symmetric)):
                    if not hyp:
                        continue
                    if bucket is stated:
                        held += 1
                    else:
                        held_sym += 1
                    try:
                        widths.find_eps_approximation(Q, mu, eps, "exhaustive_min", size_cap=n)
                    except FuzzyVCError:
                        bucket.append({"instance": i, "n": n, "eps": str(eps)})
    return [_result("approximation-existence", stated, held),
            _result("approximation-existence-symmetrized", symmetric, held_sym)]


def qnet_instance(seed, i) -> tuple:
    rng = _rng(seed, "qnet", i)
    pts = int(rng.integers(1, 5))
    Q = random_function_matrix(pts, int(rng.integers(1, 5)), 4, seed=int(rng.integers(2 ** 32)))
    r, s = sorted(rng.choice(5, size=2, replace=False))
    eps = Fraction(int(rng.integers(1, 5)), 4)
    return Q, _measure(rng, pts), Fraction(int(r), 4), Fraction(int(s), 4), eps


def suite_qnet(seed, count):
    failures, approximations = [], 0
    for i in range(count):
        Q, mu, r, s, eps = qnet_instance(seed, i)
        delta = (s - r) * eps / 2
        clamped = nets.clamp_class(Q, r, s)
        F = core.slice_system(Q, r, s)
        for size in range(1, 4):
            for xbar in itertools.combinations_with_replacement(range(Q.point_count), size):
                if widths.is_eps_approximation(xbar, clamped, mu, delta):
                    approximations += 1
                    if not nets.is_eps_net(set(xbar), F, mu, eps):
                        failures.append({"instance": i, "xbar": list(xbar)})
    return _result("approximation-to-net", failures, approximations)


def separation_instance(seed, i) -> tuple:
    rng = _rng(seed, "separation", i)
    pts = int(rng.integers(1, 6))
    Q = random_function_matrix(pts, int(rng.integers(1, 9)), 8, seed=int(rng.integers(2 ** 32)))
    xbar = tuple(int(x) for x in rng.integers(0, pts, size=int(rng.integers(1, min(pts, 4) + 1))))
    r, s = sorted(rng.choice(9, size=2, replace=False))
    return Q, xbar, Fraction(int(r), 8), Fraction(int(s), 8)


def separation_check(Q, xbar, r, s) -> list:
    problems = []
    Y = sorted(set(xbar))
    pattern = {}
    for j, row in enumerate(Q.rows):
        if all(row[y] <= r or row[y] >= s for y in Y):
            pattern[j] = frozenset(y for y in Y if row[y] <= r)
    for a, b in itertools.combinations(pattern, 2):
        if pattern[a] != pattern[b] and widths.linf(Q.rows[a], Q.rows[b]) < s - r:
            problems.append("separation")
    traced = len(set(pattern.values()))
    eps = (s - r) / 3
    if traced > widths.covering_number(Q, xbar, eps, "internal"):
        problems.append("internal")
    if traced > widths.covering_number(Q, xbar, eps, "packing"):
        problems.append("packing")
    if len(xbar) <= 2 and traced > widths.covering_number(Q, xbar, eps, "grid", Fraction(1, 24)):
        problems.append("grid")
    return problems


def suite_separation(seed, count):
    failures = []
    for i in range(count):
        problems = separation_check(*separation_instance(seed, i))
        if problems:
            failures.append({"instance": i, "problems": problems})
    return _result("trace-separation", failures, count)


def duality_instance(seed, i) -> SetSystem:
    rng = _rng(seed, "duality", i)
    n = int(rng.integers(1, 11))
    k = int(rng.integers(0, 31))
    sets = []
    for _ in range(k):
        size = int(rng.integers(1, n + 1))
        sets.append({int(x) for x in rng.choice(n, size=size, replace=False)})
    return SetSystem(n, tuple(sets))


def suite_duality(seed, count):
    failures = []
    for i in range(count):
        S = duality_instance(seed, i)
        tau, _ = lp.fractional_transversal(S)
        nu, _ = lp.fractional_packing(S)
        if tau != nu:
            failures.append({"instance": i, "tau": str(tau), "nu": str(nu)})
    return _result("lp-duality", failures, count)


def transversal_instance(seed, i) -> FuzzySetSystem:
    rng = _rng(seed, "transversal", i)
    n = int(rng.integers(1, 11))
    F = random_fuzzy(n, int(rng.integers(1, 13)), Fraction(1, 4), Fraction(1, 3),
                     seed=int(rng.integers(2 ** 32)))
    fixed = []
    for S in F.sets:
        if not S.plus:
            x = int(rng.integers(0, n))
            S = FuzzySet({x}, S.minus - {x})
        fixed.append(S)
    return FuzzySetSystem(n, tuple(fixed))


def suite_transversal(seed, count):
    failures, sizes = [], []
    for i in range(count):
        F = transversal_instance(seed, i)
        A, cert = nets.transversal_via_net(F)
        _, outer = core.inner_outer(F)
        tau = lp.transversal_number(outer)
        tau_star_outer, _ = lp.fractional_transversal(outer)
        sizes.append([len(A), tau])
        if not outer.is_transversal(A) or tau < math.ceil(tau_star_outer) or len(A) < tau:
            failures.append({"instance": i})
    excess = sum(a - t for a, t in sizes)
    return _result("transversal-via-net", failures, count, excess_over_minimum=excess)


def helly_instance(seed, i) -> FuzzyRelation:
    """Columns whose plus-parts mostly share a hub point, so many k-sets intersect."""
    rng = _rng(seed, "helly", i)
    xs = int(rng.integers(2, 6))
    ys = int(rng.integers(3, 13))
    entries = [[Membership.STAR] * ys for _ in range(xs)]
    for y in range(ys):
        for x in range(xs):
            u = rng.random()
            entries[x][y] = Membership.PLUS if u < 0.3 else Membership.MINUS if u < 0.7 else Membership.STAR
        if rng.random() < 0.8:
            entries[0][y] = Membership.PLUS
    return FuzzyRelation(xs, ys, tuple(tuple(r) for r in entries))


def helly_alpha(R: FuzzyRelation, k: int) -> Fraction:
    """The realized intersecting fraction rounded down to a multiple of 1/8 (at least 1/8)."""
    good = helly.intersecting_fraction(R, k)
    return max(Fraction(math.floor(good * 8), 8), Fraction(1, 8)) if good >= Fraction(1, 8) else good


def suite_helly(seed, count):
    failures, tested = [], 0
    for i in range(count):
        R = helly_instance(seed, i)
        k = 2
        alpha = helly_alpha(R, k)
        if alpha <= 0:
            continue
        tested += 1
        try:
            cert = helly.fractional_helly_witness(R, k, alpha)
            if not helly.verify_helly_certificate(R, cert):
                failures.append({"instance": i, "reason": "replay"})
        except FuzzyVCError as exc:
            failures.append({"instance": i, "reason": type(exc).__name__})
    return _result("fractional-helly", failures, tested)


def pq_instance(seed, i) -> tuple:
    rng = _rng(seed, "pq", i)
    Q = distance_functions(int(rng.integers(4, 8)), int(rng.integers(3, 7)), Fraction(1, 2),
                           seed=int(rng.integers(2 ** 32)))
    return Q, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)


def pq_candidates(seed, count, pq=((3, 3), (4, 3), (3, 2), (2, 2))):
    """Instances with the (p,q)-property at the inner threshold, with their (p,q)."""
    found, i = [], 0
    while len(found) < count and i < 50 * count:
        Q, r, t, s = pq_instance(seed, i)
        i += 1
        d = core.dual_vc_dimension(core.slice_system(Q, r, t)) or 0
        inner = core.at_most(Q, r)
        for p, q in pq:
            if q >= d + 1 and len(inner) >= p and helly.has_pq_property(inner, p, q):
                found.append((Q, r, t, s, p, q))
                break
    return found


def suite_pq(seed, count):
    failures, sizes = [], []
    cases = pq_candidates(seed, count)
    for j, (Q, r, t, s, p, q) in enumerate(cases):
        try:
            A, cert = helly.pq_pipeline(Q, r, t, s, p, q)
            sizes.append(len(A))
            if not helly.verify_pq_certificate(Q, r, s, A, cert):
                failures.append({"case": j, "reason": "replay"})
        except (FuzzyVCError, AssertionError) as exc:
            failures.append({"case": j, "reason": str(exc)})
    return _result("pq-pipeline", failures, len(cases), max_transversal=max(sizes, default=0))


def deviation_instance(seed, i) -> tuple:
    rng = _rng(seed, "deviation", i)
    pts = int(rng.integers(1, 5))
    Q = random_function_matrix(pts, int(rng.integers(1, 6)), 4, seed=int(rng.integers(2 ** 32)))
    eps = (Fraction(1), Fraction(1, 2))[i % 2]
    n = math.ceil(2 / eps ** 2) + int(rng.integers(0, 4))
    return Q, _measure(rng, pts), n, eps


def suite_deviation(seed, count, trials):
    failures = []
    for i in range(count):
        Q, mu, n, eps = deviation_instance(seed, i)
        ncov = len(set(Q.rows))
        bound = min(1.0, widths.deviation_bound(n, eps, ncov))
        est = widths.deviation_estimate(Q, mu, n, eps, trials, seed + i)
        se = math.sqrt(est * (1 - est) / trials)
        if bound < est - 3 * se:
            failures.append({"instance": i, "bound": bound, "estimate": est})
    return _result("deviation-bound", failures, count)


def run_selftest(seed: int = 7, budget: str = "small") -> dict:
    if budget not in BUDGETS:
        raise PreconditionError("budget", f"unknown budget {budget!r}")
    b = BUDGETS[budget]
    suites = [
        suite_sauer(seed, b["sauer"]),
        suite_fat(seed, b["fat"]),
        suite_width(seed, b["width"], b["width_samples"]),
        *suite_approx(seed, b["approx"]),
        suite_qnet(seed, b["qnet"]),
        suite_separation(seed, b["separation"]),
        suite_duality(seed, b["duality"]),
        suite_transversal(seed, b["transversal"]),
        suite_helly(seed, b["helly"]),
        suite_pq(seed, b["pq"]),
        suite_deviation(seed, b["deviation"], b["deviation_trials"]),
    ]
    return {"budget": budget, "suites": suites, "all_passed": all(s["passed"] for s in suites)}
