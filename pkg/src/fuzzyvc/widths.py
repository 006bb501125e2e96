"""Mean widths, Rademacher complexities, approximations and covering numbers.

Exact quantities use integer arithmetic on a common denominator and come
back as ``Fraction``; Monte Carlo quantities use ``numpy.random.default_rng``
seeded by the caller and report a standard error.  Gaussian signs come from
``Generator.standard_normal``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._cover import min_set_cover
from .core import FunctionClass, to_fraction
from .errors import CapacityError, DomainError, NotFoundError

EXACT_SIGN_LIMIT = 20
GRID_DIM_LIMIT = 4
MC_BATCH = 20000


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability weights, one per ground point."""

    weights: tuple

    def __post_init__(self):
        w = tuple(to_fraction(v) for v in self.weights)
        if any(v < 0 for v in w):
            raise DomainError("measure weights must be nonnegative")
        if sum(w) != 1:
            raise DomainError(f"measure weights sum to {sum(w)}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> "DiscreteMeasure":
        return cls((Fraction(1, n),) * n)

    @classmethod
    def point_mass(cls, n: int, x: int) -> "DiscreteMeasure":
        return cls(tuple(Fraction(int(i == x)) for i in range(n)))

    def __len__(self):
        return len(self.weights)

    @property
    def support(self) -> tuple:
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    def mass(self, points) -> Fraction:
        return sum((self.weights[x] for x in points), Fraction(0))

    def expectation(self, row: Sequence[Fraction]) -> Fraction:
        return sum((w * v for w, v in zip(self.weights, row)), Fraction(0))

    def probabilities(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights])


@dataclass(frozen=True)
class WidthEstimate:
    value: object
    std_error: float
    samples: int
    seed: Optional[int]
    mode: str
    lower_bound: bool = False


def _check_measure(Q: FunctionClass, mu: DiscreteMeasure) -> None:
    if len(mu) != Q.point_count:
        raise DomainError(f"measure has {len(mu)} weights, class has {Q.point_count} points")


def _scaled(points) -> tuple:
    """Integer matrix and common denominator for a list of rational vectors."""
    vals = [[to_fraction(v) for v in p] for p in points]
    den = 1
    for p in vals:
        for v in p:
            den = math.lcm(den, v.denominator)
    return [[int(v * den) for v in p] for p in vals], den


def _sign_block(n: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return 2 * bits - 1


def _exact_rademacher(points, absolute: bool = False) -> Fraction:
    ints, den = _scaled(points)
    n = len(ints[0])
    if n == 0:
        return Fraction(0)
    big = max(abs(v) for p in ints for v in p) * n * 2 ** n > 2 ** 62
    A = np.array(ints, dtype=object if big else np.int64)
    total = 0
    for start in range(0, 2 ** n, 2 ** 16):
        signs = _sign_block(n, start, min(2 ** n, start + 2 ** 16)).astype(A.dtype)
        prods = signs @ A.T
        if absolute:
            prods = abs(prods)
        total += int(prods.max(axis=1).sum())
    return Fraction(total, den * 2 ** n)


def _mc_width(points, dist: str, samples: int, rng: np.random.Generator) -> tuple:
    A = np.array([[float(to_fraction(v)) for v in p] for p in points])
    n = A.shape[1]
    total, total_sq, done = 0.0, 0.0, 0
    while done < samples:
        k = min(MC_BATCH, samples - done)
        if dist == "gaussian":
            sigma = rng.standard_normal((k, n))
        else:
            sigma = rng.integers(0, 2, size=(k, n)) * 2.0 - 1.0
        sup = (sigma @ A.T).max(axis=1)
        total += sup.sum()
        total_sq += (sup ** 2).sum()
        done += k
    mean = total / samples
    var = max(total_sq / samples - mean ** 2, 0.0) * samples / max(samples - 1, 1)
    return mean, math.sqrt(var / samples)


def _check_points(points) -> int:
    if not points:
        raise DomainError("point list must be nonempty")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise DomainError("all points must have the same dimension")
    return n


def mean_width(points, dist: str = "rademacher", mode: str = "exact",
               samples: int = 100_000, seed: int = 0) -> WidthEstimate:
    """``E[sup_{a in A} sigma . a]`` for Rademacher or Gaussian ``sigma``."""
    n = _check_points(points)
    if dist not in ("rademacher", "gaussian"):
        raise DomainError(f"unknown sign distribution {dist!r}")
    if mode == "exact":
        if dist != "rademacher":
            raise DomainError("exact mode is only available for Rademacher signs")
        if n > EXACT_SIGN_LIMIT:
            raise CapacityError(f"exact Rademacher width limited to dimension {EXACT_SIGN_LIMIT}")
        return WidthEstimate(_exact_rademacher(points), 0.0, 2 ** n, None, "exact")
    if mode != "monte_carlo":
        raise DomainError(f"unknown mode {mode!r}")
    value, err = _mc_width(points, dist, samples, np.random.default_rng(seed))
    return WidthEstimate(float(value), err, samples, seed, "monte_carlo")


def width_profile(Q: FunctionClass, n: int, dist: str = "rademacher",
                  mu: Optional[DiscreteMeasure] = None, mode: str = "exact",
                  samples: int = 20_000, seed: int = 0,
                  enumeration_limit: int = 5000) -> WidthEstimate:
    """``r_Q(n)`` / ``g_Q(n)`` without ``mu``; ``r_{Q,mu}(n)`` / ``g_{Q,mu}(n)`` with it.

    Without a measure the supremum runs over multisets of ``n`` columns
    (coordinate order only permutes the sign vectors).  When there are more
    than ``enumeration_limit`` multisets, ``samples`` random tuples are tried
    instead and the result is flagged as a lower bound.  With a measure the
    exact mode sums over multisets weighted by their multinomial
    probabilities and divides by ``n``; Monte Carlo draws tuple and signs
    jointly.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    if not len(Q):
        raise DomainError("function class has no rows")
    if mode == "exact" and dist != "rademacher":
        raise DomainError("exact mode is only available for Rademacher signs")
    if mode == "exact" and n > EXACT_SIGN_LIMIT:
        raise CapacityError(f"exact Rademacher width limited to n <= {EXACT_SIGN_LIMIT}")

    if mu is None:
        return _sup_width(Q, n, dist, mode, samples, seed, enumeration_limit)
    _check_measure(Q, mu)
    support = mu.support
    if mode == "exact":
        if math.comb(len(support) + n - 1, n) > enumeration_limit:
            raise CapacityError("too many support multisets for exact enumeration")
        total = Fraction(0)
        for xbar in itertools.combinations_with_replacement(support, n):
            prob = Fraction(math.factorial(n))
            for x, k in Counter(xbar).items():
                prob *= mu.weights[x] ** k / math.factorial(k)
            total += prob * _exact_rademacher(Q.values_at(xbar))
        return WidthEstimate(total / n, 0.0, 2 ** n, None, "exact")

    rng = np.random.default_rng(seed)
    table = np.array([[float(v) for v in row] for row in Q.rows])
    p = mu.probabilities()
    sups = np.empty(samples)
    for start in range(0, samples, MC_BATCH):
        k = min(MC_BATCH, samples - start)
        idx = rng.choice(Q.point_count, size=(k, n), p=p)
        if dist == "gaussian":
            sigma = rng.standard_normal((k, n))
        else:
            sigma = rng.integers(0, 2, size=(k, n)) * 2.0 - 1.0
        vals = table[:, idx]  # rows x k x n
        sups[start:start + k] = np.einsum("rkn,kn->rk", vals, sigma).max(axis=0)
    err = float(sups.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return WidthEstimate(float(sups.mean()) / n, err / n, samples, seed, "monte_carlo")


def symmetric_rademacher_complexity(Q: FunctionClass, mu: DiscreteMeasure, n: int,
                                    enumeration_limit: int = 5000) -> Fraction:
    """``E_{mu^n, sigma}[sup_q |(1/n) sum_i sigma_i q(x_i)|]``, exactly.

    This is the absolute-value complexity for which the uniform deviation
    bound ``P[sup_q |Av - E| > 2 R + delta] <= exp(-n delta^2 / 2)`` holds;
    unlike the mean width it is positive even for a single nonconstant
    function.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    _check_measure(Q, mu)
    support = mu.support
    if math.comb(len(support) + n - 1, n) > enumeration_limit:
        raise CapacityError("too many support multisets for exact enumeration")
    total = Fraction(0)
    for xbar in itertools.combinations_with_replacement(support, n):
        prob = Fraction(math.factorial(n))
        for x, k in Counter(xbar).items():
            prob *= mu.weights[x] ** k / math.factorial(k)
        total += prob * _exact_rademacher(Q.values_at(xbar), absolute=True)
    return total / n


def _sup_width(Q, n, dist, mode, samples, seed, enumeration_limit) -> WidthEstimate:
    cols = range(Q.point_count)
    exhaustive = math.comb(Q.point_count + n - 1, n) <= enumeration_limit
    if exhaustive:
        tuples = itertools.combinations_with_replacement(cols, n)
    else:
        rng = np.random.default_rng(seed)
        tuples = (tuple(t) for t in rng.integers(0, Q.point_count, size=(samples, n)))
    best, best_err = None, 0.0
    for i, xbar in enumerate(tuples):
        pts = Q.values_at(xbar)
        if mode == "exact":
            w, err = _exact_rademacher(pts), 0.0
        else:
            w, err = _mc_width(pts, dist, samples, np.random.default_rng([seed, i]))
            w = float(w)
        if best is None or w > best:
            best, best_err = w, err
    used = 2 ** n if mode == "exact" else samples
    return WidthEstimate(best, best_err, used, None if mode == "exact" else seed,
                         mode, lower_bound=not exhaustive)


# ---------------------------------------------------------------------------
# approximations


def average(xbar: Sequence[int], row: Sequence[Fraction]) -> Fraction:
    return Fraction(sum(row[x] for x in xbar), len(xbar))


def approximation_error(xbar: Sequence[int], Q: FunctionClass, mu: DiscreteMeasure) -> Fraction:
    """``max_q |Av(xbar; q) - E_mu[q]|`` (0 for an empty class)."""
    if not xbar:
        raise DomainError("xbar must be nonempty")
    if any(not 0 <= x < Q.point_count for x in xbar):
        raise DomainError("xbar mentions points outside the ground set")
    _check_measure(Q, mu)
    return max((abs(average(xbar, row) - mu.expectation(row)) for row in Q.rows), default=Fraction(0))


def is_eps_approximation(xbar: Sequence[int], Q: FunctionClass, mu: DiscreteMeasure, eps) -> bool:
    return approximation_error(xbar, Q, mu) <= to_fraction(eps)


def find_eps_approximation(Q: FunctionClass, mu: DiscreteMeasure, eps, strategy: str = "random",
                           size_cap: int = 64, seed: int = 0, tries_per_size: int = 8) -> tuple:
    """A verified eps-approximation supported on ``mu``'s support.

    ``exhaustive_min`` returns the lexicographically first multiset of the
    smallest possible size; ``random`` tries i.i.d. samples of growing size.
    Raises NotFoundError (carrying the best deviation seen) when ``size_cap``
    is exhausted.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    _check_measure(Q, mu)
    support = mu.support
    best = None
    if strategy == "exhaustive_min":
        for m in range(1, size_cap + 1):
            for xbar in itertools.combinations_with_replacement(support, m):
                err = approximation_error(xbar, Q, mu)
                if err <= eps:
                    return xbar
                best = err if best is None else min(best, err)
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        p = mu.probabilities()
        for m in range(1, size_cap + 1):
            for _ in range(tries_per_size):
                xbar = tuple(sorted(int(x) for x in rng.choice(Q.point_count, size=m, p=p)))
                err = approximation_error(xbar, Q, mu)
                if err <= eps:
                    return xbar
                best = err if best is None else min(best, err)
    else:
        raise DomainError(f"unknown strategy {strategy!r}")
    raise NotFoundError(f"no {eps}-approximation of size <= {size_cap}", best=best)


# ---------------------------------------------------------------------------
# covering and packing


def linf(a: Sequence, b: Sequence) -> Fraction:
    return max((abs(u - v) for u, v in zip(a, b)), default=Fraction(0))


def covering_number(Q: FunctionClass, xbar: Sequence[int], eps, method: str = "internal",
                    step=None) -> int:
    """l-infinity covering or packing count of ``Q(xbar)``.

    ``internal``: minimum cover with centers among the rows.  ``grid``:
    minimum cover with centers on the lattice ``step * Z`` in ``[0,1]^|xbar|``.
    ``packing``: maximum number of rows pairwise more than ``2 eps`` apart,
    a lower bound for every cover.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    pts = sorted(set(Q.values_at(xbar)))
    if not pts:
        return 0
    universe = (1 << len(pts)) - 1
    if method == "internal":
        centers = pts
    elif method == "grid":
        step = to_fraction(step if step is not None else eps)
        if step <= 0 or (1 / step).denominator != 1:
            raise DomainError(f"grid step {step} must divide 1")
        if len(xbar) > GRID_DIM_LIMIT:
            raise CapacityError(f"grid covering limited to dimension {GRID_DIM_LIMIT}")
        ticks = [step * i for i in range(int(1 / step) + 1)]
        centers = itertools.product(ticks, repeat=len(xbar))
    elif method == "packing":
        return _max_packing(pts, 2 * eps)
    else:
        raise DomainError(f"unknown covering method {method!r}")
    masks = []
    for c in centers:
        m = 0
        for i, p in enumerate(pts):
            if linf(c, p) <= eps:
                m |= 1 << i
        masks.append(m)
    return len(min_set_cover(universe, masks))


def _max_packing(pts, gap) -> int:
    n = len(pts)
    far = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and linf(pts[i], pts[j]) > gap:
                far[i] |= 1 << j
    best = 0

    def grow(size, cand):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = size
            return
        low = cand & -cand
        i = low.bit_length() - 1
        grow(size + 1, cand & far[i])
        grow(size, cand & ~low)

    grow(0, (1 << n) - 1)
    return best


# ---------------------------------------------------------------------------
# bound calculators


def covering_bound(d: int, n: int, eps) -> float:
    """``2 (4n/eps^2)^(d ln(2en/(d eps)))``, natural logarithm."""
    if d < 1 or n < 1:
        raise DomainError("d and n must be at least 1")
    eps = float(eps)
    if not 0 < eps <= 1:
        raise DomainError("eps must lie in (0, 1]")
    return 2.0 * (4.0 * n / eps ** 2) ** (d * math.log(2.0 * math.e * n / (d * eps)))


def deviation_bound(n: int, eps, ncov: int) -> float:
    """``12 n ncov exp(-eps^2 n / 36)``; requires ``n >= 2 / eps^2``."""
    eps = to_fraction(eps)
    if eps <= 0 or n * eps ** 2 < 2:
        raise DomainError(f"deviation bound needs n >= 2/eps^2 (n={n}, eps={eps})")
    return 12.0 * n * ncov * math.exp(-float(eps) ** 2 * n / 36.0)


def approximation_size(eps, delta, d: int, constant: float) -> float:
    """``constant / eps^2 * (d ln^2(d/eps) + ln(1/delta))``; the constant is the caller's."""
    eps, delta = float(eps), float(delta)
    return constant / eps ** 2 * (d * math.log(d / eps) ** 2 + math.log(1.0 / delta))


def deviation_estimate(Q: FunctionClass, mu: DiscreteMeasure, n: int, eps, trials: int,
                       seed: int = 0) -> float:
    """Fraction of ``trials`` i.i.d. ``mu``-samples of size n with ``sup_q (Av - E) > eps``.

    The comparison is exact: sums are kept as integers over a common
    denominator.
    """
    if trials < 1 or n < 1:
        raise DomainError("trials and n must be at least 1")
    _check_measure(Q, mu)
    eps = to_fraction(eps)
    if not len(Q):
        return 0.0
    expect = [mu.expectation(row) for row in Q.rows]
    den = eps.denominator
    for v in [*expect, *(x for row in Q.rows for x in row)]:
        den = math.lcm(den, v.denominator)
    vals = np.array([[int(v * den) for v in row] for row in Q.rows], dtype=object)
    limit = [int(n * e * den) + int(n * eps * den) for e in expect]
    if max(abs(int(v)) for v in vals.ravel()) * n < 2 ** 62 and max(abs(v) for v in limit) < 2 ** 62:
        vals = vals.astype(np.int64)
        limit = np.array(limit, dtype=np.int64)
    else:
        limit = np.array(limit, dtype=object)
    rng = np.random.default_rng(seed)
    p = mu.probabilities()
    hits = 0
    for start in range(0, trials, MC_BATCH):
        k = min(MC_BATCH, trials - start)
        idx = rng.choice(Q.point_count, size=(k, n), p=p)
        counts = np.zeros((k, Q.point_count), dtype=vals.dtype)
        for col in range(Q.point_count):
            counts[:, col] = (idx == col).sum(axis=1)
        sums = counts @ vals.T  # k x rows
        hits += int((sums > limit).any(axis=1).sum())
    return hits / trials
