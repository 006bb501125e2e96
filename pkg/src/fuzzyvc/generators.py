"""Seeded instance families.

Each generator is a pure function of its parameters and seed; the random
stream is ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import FunctionClass, FuzzySet, FuzzySetSystem, to_fraction
from .errors import DomainError

KINDS = ("crisp_intervals", "fuzzy_margin_intervals", "distance_functions",
         "random_fuzzy", "random_function_matrix")


def _need(cond, message):
    if not cond:
        raise DomainError(message)


def _interval(rng, n):
    a, b = sorted(int(v) for v in rng.integers(0, n, size=2))
    return a, b


def crisp_intervals(n: int = 8, k: int = 6, seed: int = 0) -> FuzzySetSystem:
    """k random intervals of the points ``0..n-1`` on a line."""
    _need(n >= 1 and k >= 0, "crisp_intervals needs n >= 1, k >= 0")
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(k):
        a, b = _interval(rng, n)
        sets.append(FuzzySet.crisp(range(a, b + 1), n))
    return FuzzySetSystem(n, tuple(sets))


def fuzzy_margin_intervals(n: int = 8, k: int = 6, w: int = 1, seed: int = 0) -> FuzzySetSystem:
    """Intervals ``[a, b]`` blurred by w: plus ``[a+w, b-w]``, minus outside ``[a-w, b+w]``."""
    _need(n >= 1 and k >= 0 and w >= 0, "fuzzy_margin_intervals needs n >= 1, k >= 0, w >= 0")
    rng = np.random.default_rng(seed)
    sets = []
    for _ in range(k):
        a, b = _interval(rng, n)
        plus = {x for x in range(n) if a + w <= x <= b - w}
        minus = {x for x in range(n) if x < a - w or x > b + w}
        sets.append(FuzzySet(plus, minus))
    return FuzzySetSystem(n, tuple(sets))


def distance_functions(n: int = 6, k: int = 5, w="1/2", seed: int = 0) -> FunctionClass:
    """Rows ``q_c(x) = min(1, |x - c| / w)`` with points and centers on the grid ``i/(n-1)``."""
    w = to_fraction(w)
    _need(n >= 2 and k >= 0 and w > 0, "distance_functions needs n >= 2, k >= 0, w > 0")
    rng = np.random.default_rng(seed)
    xs = [Fraction(i, n - 1) for i in range(n)]
    rows = []
    for _ in range(k):
        c = xs[int(rng.integers(0, n))]
        rows.append(tuple(min(Fraction(1), abs(x - c) / w) for x in xs))
    return FunctionClass(n, tuple(rows))


def random_fuzzy(n: int = 6, k: int = 8, p_plus="1/3", p_minus="1/3", seed: int = 0) -> FuzzySetSystem:
    """Independent entries: plus with probability p_plus, minus with p_minus, else undetermined."""
    p_plus, p_minus = to_fraction(p_plus), to_fraction(p_minus)
    _need(n >= 0 and k >= 0 and p_plus >= 0 and p_minus >= 0 and p_plus + p_minus <= 1,
          "random_fuzzy needs probabilities summing to at most 1")
    rng = np.random.default_rng(seed)
    draws = rng.random((k, n))
    sets = []
    for row in draws:
        sets.append(FuzzySet({x for x, u in enumerate(row) if u < p_plus},
                             {x for x, u in enumerate(row) if p_plus <= u < p_plus + p_minus}))
    return FuzzySetSystem(n, tuple(sets))


def random_function_matrix(n: int = 4, k: int = 6, grid: int = 8, seed: int = 0) -> FunctionClass:
    """Independent values ``j / grid`` with j uniform in ``0..grid``."""
    _need(n >= 0 and k >= 0 and grid >= 1, "random_function_matrix needs grid >= 1")
    rng = np.random.default_rng(seed)
    vals = rng.integers(0, grid + 1, size=(k, n))
    return FunctionClass(n, tuple(tuple(Fraction(int(v), grid) for v in row) for row in vals))


def generate(kind: str, seed: int = 0, **params):
    table = {
        "crisp_intervals": crisp_intervals,
        "fuzzy_margin_intervals": fuzzy_margin_intervals,
        "distance_functions": distance_functions,
        "random_fuzzy": random_fuzzy,
        "random_function_matrix": random_function_matrix,
    }
    if kind not in table:
        raise DomainError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    try:
        return table[kind](seed=seed, **params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {kind}: {exc}") from exc
