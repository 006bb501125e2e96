"""Fuzzy set systems, fuzzy relations and real-valued function classes.

A fuzzy set on a finite ground set ``{0, ..., n-1}`` is a pair of disjoint
index sets ``(plus, minus)``: points in ``plus`` are members, points in
``minus`` are non-members and every other point is undetermined.  All
combinatorics here are exact and exhaustive; the ground sets are meant to be
small (a dozen points or so).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from ._cover import indices_of, mask_of, min_set_cover
from .errors import CapacityError, DomainError

DISAMBIGUATION_LIMIT = 12


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and floats (via their repr) to Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class FuzzySet:
    plus: frozenset
    minus: frozenset

    def __post_init__(self):
        object.__setattr__(self, "plus", frozenset(self.plus))
        object.__setattr__(self, "minus", frozenset(self.minus))
        if self.plus & self.minus:
            raise DomainError(f"plus and minus overlap on {sorted(self.plus & self.minus)}")

    @classmethod
    def crisp(cls, members: Iterable[int], ground_size: int) -> "FuzzySet":
        members = frozenset(members)
        return cls(members, frozenset(range(ground_size)) - members)

    def is_crisp(self, ground_size: int) -> bool:
        return len(self.plus) + len(self.minus) == ground_size


@dataclass(frozen=True)
class FuzzySetSystem:
    """An ordered list of fuzzy sets on ``{0, ..., ground_size-1}``.

    Order is identity: duplicate sets are kept.
    """

    ground_size: int
    sets: tuple = ()

    def __post_init__(self):
        if self.ground_size < 0:
            raise DomainError("ground_size must be nonnegative")
        sets = tuple(s if isinstance(s, FuzzySet) else FuzzySet(*s) for s in self.sets)
        for i, s in enumerate(sets):
            bad = [x for x in s.plus | s.minus if not 0 <= x < self.ground_size]
            if bad:
                raise DomainError(f"set {i} mentions points {sorted(bad)} outside the ground set")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def crisp(cls, ground_size: int, members: Iterable[Iterable[int]]) -> "FuzzySetSystem":
        return cls(ground_size, tuple(FuzzySet.crisp(m, ground_size) for m in members))

    @cached_property
    def masks(self) -> tuple:
        return tuple((mask_of(s.plus), mask_of(s.minus)) for s in self.sets)

    def __len__(self):
        return len(self.sets)

    def matrix(self) -> list:
        """Membership matrix indexed ``[point][set]`` over ``Membership`` values."""
        return [
            [Membership.of(s, x) for s in self.sets]
            for x in range(self.ground_size)
        ]


@dataclass(frozen=True)
class SetSystem:
    ground_size: int
    sets: tuple = ()

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for i, s in enumerate(sets):
            bad = [x for x in s if not 0 <= x < self.ground_size]
            if bad:
                raise DomainError(f"set {i} mentions points {sorted(bad)} outside the ground set")
        object.__setattr__(self, "sets", sets)

    @cached_property
    def masks(self) -> tuple:
        return tuple(mask_of(s) for s in self.sets)

    def __len__(self):
        return len(self.sets)

    def is_transversal(self, points: Iterable[int]) -> bool:
        pts = set(points)
        return all(s & pts for s in self.sets)


class Membership(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    STAR = "*"

    @classmethod
    def of(cls, s: FuzzySet, x: int) -> "Membership":
        if x in s.plus:
            return cls.PLUS
        if x in s.minus:
            return cls.MINUS
        return cls.STAR


@dataclass(frozen=True)
class FuzzyRelation:
    """Fuzzy relation between ``X = range(x_size)`` and ``Y = range(y_size)``.

    ``entries[x][y]`` is the membership of ``(x, y)``.
    """

    x_size: int
    y_size: int
    entries: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(Membership(e) if not isinstance(e, Membership) else e for e in row)
                     for row in self.entries)
        if len(rows) != self.x_size or any(len(r) != self.y_size for r in rows):
            raise DomainError(f"entries must form a {self.x_size} x {self.y_size} matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_system(cls, F: FuzzySetSystem) -> "FuzzyRelation":
        """The relation ``X x F`` whose columns are the sets of ``F``."""
        return cls(F.ground_size, len(F), tuple(tuple(r) for r in F.matrix()))

    def transpose(self) -> "FuzzyRelation":
        return FuzzyRelation(self.y_size, self.x_size,
                             tuple(zip(*self.entries)) if self.x_size else ((),) * self.y_size)

    def column_system(self) -> FuzzySetSystem:
        """Fuzzy system on X with one set per ``y``: ``({x : (x,y) in R+}, {x : (x,y) in R-})``."""
        sets = []
        for y in range(self.y_size):
            col = [self.entries[x][y] for x in range(self.x_size)]
            sets.append(FuzzySet({x for x, e in enumerate(col) if e is Membership.PLUS},
                                 {x for x, e in enumerate(col) if e is Membership.MINUS}))
        return FuzzySetSystem(self.x_size, tuple(sets))

    def row_system(self) -> FuzzySetSystem:
        """Fuzzy system on Y with one set per ``x``."""
        return self.transpose().column_system()


@dataclass(frozen=True)
class FunctionClass:
    """Finite class of functions into [0, 1]; rows are functions, columns are points."""

    point_count: int
    rows: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(v) for v in row) for row in self.rows)
        for i, row in enumerate(rows):
            if len(row) != self.point_count:
                raise DomainError(f"row {i} has {len(row)} values, expected {self.point_count}")
            for j, v in enumerate(row):
                if not 0 <= v <= 1:
                    raise DomainError(f"value {v} at row {i}, column {j} is outside [0, 1]")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def values_at(self, xbar: Sequence[int]) -> list:
        """The projected class Q(xbar) as a list of tuples (duplicates kept)."""
        return [tuple(row[x] for x in xbar) for row in self.rows]

    def distinct_values(self) -> list:
        return sorted({v for row in self.rows for v in row})


# ---------------------------------------------------------------------------
# traces and shattering


def trace_patterns(F: FuzzySetSystem, Y: Iterable[int]) -> set:
    """``F ∩ Y``: the subsets Z of Y cut out by sets defined everywhere on Y.

    Patterns are returned as frozensets.
    """
    ymask = mask_of(Y)
    return {frozenset(indices_of(p)) for p in _trace_masks(F.masks, ymask)}


def _trace_masks(masks, ymask: int) -> set:
    out = set()
    for plus, minus in masks:
        if (plus | minus) & ymask == ymask:
            out.add(plus & ymask)
    return out


def shatters(F: FuzzySetSystem, Y: Iterable[int]) -> bool:
    Y = list(Y)
    return len(trace_patterns(F, Y)) == 2 ** len(Y)


def shatter_function(F: FuzzySetSystem, n: int) -> int:
    """Maximum number of trace patterns of ``F`` on an ``n``-point subset of the ground set."""
    if not 0 <= n <= F.ground_size:
        raise DomainError(f"n = {n} outside [0, {F.ground_size}]")
    masks = F.masks
    ceiling = min(2 ** n, len(masks))
    best = 0
    for Y in itertools.combinations(range(F.ground_size), n):
        count = len(_trace_masks(masks, mask_of(Y)))
        if count > best:
            best = count
            if best == ceiling:
                break
    return best


def vc_dimension(F: FuzzySetSystem) -> Optional[int]:
    """Largest d with ``shatter_function(F, n) == 2**n`` for all n <= d.

    Returns None for the empty family, which does not even trace the empty
    pattern.
    """
    if shatter_function(F, 0) != 1:
        return None
    d = 0
    limit = min(F.ground_size, int(math.log2(len(F))))
    while d < limit and shatter_function(F, d + 1) == 2 ** (d + 1):
        d += 1
    return d


def dual_vc_dimension(F: FuzzySetSystem) -> Optional[int]:
    return vc_dimension(dual_system(F))


def dual_system(F: FuzzySetSystem) -> FuzzySetSystem:
    """Transpose of the membership matrix: ground = sets of F, one set per point of F."""
    sets = []
    for x in range(F.ground_size):
        sets.append(FuzzySet({j for j, s in enumerate(F.sets) if x in s.plus},
                             {j for j, s in enumerate(F.sets) if x in s.minus}))
    return FuzzySetSystem(len(F), tuple(sets))


def inner_outer(F: FuzzySetSystem) -> tuple:
    """The crisp systems ``({S+}, {X minus S-})``, in the order of F."""
    ground = frozenset(range(F.ground_size))
    inner = SetSystem(F.ground_size, tuple(s.plus for s in F.sets))
    outer = SetSystem(F.ground_size, tuple(ground - s.minus for s in F.sets))
    return inner, outer


def sauer_bound(d: int, n: int) -> int:
    """``sum_{k <= d} n**k`` (with ``0**0 == 1``)."""
    return sum(n ** k for k in range(d + 1))


def binomial_sauer_bound(d: int, n: int) -> int:
    """The classical ``sum_{k <= d} C(n, k)``; reported alongside, never asserted."""
    return sum(math.comb(n, k) for k in range(d + 1))


# ---------------------------------------------------------------------------
# function classes


def _check_thresholds(r: Fraction, s: Fraction) -> None:
    if not 0 <= r < s <= 1:
        raise DomainError(f"need 0 <= r < s <= 1, got r={r}, s={s}")


def slice_system(Q: FunctionClass, r, s) -> FuzzySetSystem:
    """The fuzzy system ``Q_{r,s}``: one set ``({q <= r}, {q >= s})`` per row."""
    r, s = to_fraction(r), to_fraction(s)
    _check_thresholds(r, s)
    return FuzzySetSystem(Q.point_count, tuple(
        FuzzySet({x for x, v in enumerate(row) if v <= r},
                 {x for x, v in enumerate(row) if v >= s})
        for row in Q.rows))


def at_most(Q: FunctionClass, r) -> SetSystem:
    """Crisp system ``Q_{<=r}`` (inner system of any slice at r)."""
    r = to_fraction(r)
    return SetSystem(Q.point_count, tuple(
        {x for x, v in enumerate(row) if v <= r} for row in Q.rows))


def below(Q: FunctionClass, s) -> SetSystem:
    """Crisp system ``Q_{<s}`` (outer system of any slice with upper threshold s)."""
    s = to_fraction(s)
    return SetSystem(Q.point_count, tuple(
        {x for x, v in enumerate(row) if v < s} for row in Q.rows))


def _check_eps(eps: Fraction) -> None:
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")


def vc_eps_thresholds(Q: FunctionClass, eps) -> list:
    """Lower thresholds r at which ``Q_{r, r+eps}`` can change, clamped to [0, 1-eps].

    Between two consecutive candidates the plus-sets are constant and the
    minus-sets only shrink, so the left candidate dominates.
    """
    eps = to_fraction(eps)
    top = 1 - eps
    cands = {Fraction(0), top}
    for v in Q.distinct_values():
        for r in (v, v - eps):
            cands.add(min(max(r, Fraction(0)), top))
    return sorted(cands)


def vc_eps(Q: FunctionClass, eps) -> int:
    """``sup_r vc(Q_{r, r+eps})`` over ``r in [0, 1-eps]``; an empty class counts as 0."""
    eps = to_fraction(eps)
    _check_eps(eps)
    best = 0
    for r in vc_eps_thresholds(Q, eps):
        d = vc_dimension(slice_system(Q, r, r + eps))
        best = max(best, d or 0)
    return best


def _column_statuses(values: Sequence[Fraction], eps: Fraction) -> list:
    """Non-dominated (low_mask, high_mask) row sets for one column.

    A witness value f makes row i "low" when ``v_i <= f - eps`` and "high"
    when ``v_i >= f + eps``.  Only midpoints of pairs of values matter.
    """
    found = set()
    distinct = sorted(set(values))
    for a, b in itertools.combinations_with_replacement(distinct, 2):
        f = (a + b) / 2
        low = mask_of(i for i, v in enumerate(values) if v <= f - eps)
        high = mask_of(i for i, v in enumerate(values) if v >= f + eps)
        if low and high:
            found.add((low, high))
    kept = []
    for lo, hi in sorted(found, key=lambda p: -(p[0].bit_count() + p[1].bit_count())):
        if not any(lo & k[0] == lo and hi & k[1] == hi for k in kept):
            kept.append((lo, hi))
    return kept


def fat_shattered(Q: FunctionClass, A: Sequence[int], eps) -> Optional[tuple]:
    """A witness ``f`` on ``A`` for which ``(Q - f)_{-eps, eps}`` shatters ``A``, or None."""
    eps = to_fraction(eps)
    A = list(A)
    options = []
    for a in A:
        col = [row[a] for row in Q.rows]
        opts = _column_statuses(col, eps)
        if not opts:
            return None
        options.append(opts)
    for choice in itertools.product(*options):
        ok = True
        for pattern in range(2 ** len(A)):
            rows = (1 << len(Q)) - 1
            for j, (lo, hi) in enumerate(choice):
                rows &= lo if pattern >> j & 1 else hi
                if not rows:
                    break
            if not rows:
                ok = False
                break
        if ok:
            return tuple(_witness_value(Q, a, lo, hi) for a, (lo, hi) in zip(A, choice))
    return None


def _witness_value(Q, a, lo, hi) -> Fraction:
    top_low = max(Q.rows[i][a] for i in indices_of(lo))
    bottom_high = min(Q.rows[i][a] for i in indices_of(hi))
    return (top_low + bottom_high) / 2


def fat_shattering(Q: FunctionClass, eps) -> int:
    """Largest ``|A|`` fat-shattered by Q at width ``eps``."""
    eps = to_fraction(eps)
    _check_eps(eps)
    if len(Q) < 2:
        return 0
    best = 0
    top = min(Q.point_count, int(math.log2(len(Q))))
    for size in range(1, top + 1):
        if any(fat_shattered(Q, A, eps) is not None
               for A in itertools.combinations(range(Q.point_count), size)):
            best = size
        else:
            break  # fat-shattering is hereditary
    return best


# ---------------------------------------------------------------------------
# strong disambiguation


def disambiguates(crisp: Iterable[int], S: FuzzySet) -> bool:
    c = set(crisp)
    return S.plus <= c and not (c & S.minus)


def verify_disambiguation(F: FuzzySetSystem, crisp: SetSystem) -> bool:
    return all(any(disambiguates(c, S) for c in crisp.sets) for S in F.sets)


def _covered(F: FuzzySetSystem, cmask: int) -> int:
    cov = 0
    for j, (plus, minus) in enumerate(F.masks):
        if plus & cmask == plus and not minus & cmask:
            cov |= 1 << j
    return cov


def strong_disambiguation(F: FuzzySetSystem, mode: str = "greedy",
                          limit: int = DISAMBIGUATION_LIMIT) -> SetSystem:
    """A crisp system refining every fuzzy set of F.

    ``trivial`` uses the distinct plus-sets.  ``greedy`` grows, from each
    uncovered set, a maximal compatible group and takes the union of its
    plus-sets; it falls back to the trivial answer when that is smaller.
    ``minimal`` finds a minimum-size answer by branch and bound over all
    crisp subsets, so it refuses ground sets larger than ``limit``.
    """
    if mode == "trivial":
        return SetSystem(F.ground_size, tuple(dict.fromkeys(s.plus for s in F.sets)))
    if mode == "greedy":
        return _greedy_disambiguation(F)
    if mode == "minimal":
        if F.ground_size > limit:
            raise CapacityError(f"minimal disambiguation limited to ground_size <= {limit}")
        universe = (1 << len(F)) - 1
        crisp = list(range(2 ** F.ground_size))
        picks = min_set_cover(universe, [_covered(F, c) for c in crisp])
        return SetSystem(F.ground_size, tuple(frozenset(indices_of(crisp[i])) for i in picks))
    raise DomainError(f"unknown disambiguation mode {mode!r}")


def _greedy_disambiguation(F: FuzzySetSystem) -> SetSystem:
    masks = F.masks
    left = (1 << len(F)) - 1
    chosen = []
    while left:
        best_mask, best_cov = None, 0
        for seed in indices_of(left):
            inside, outside = masks[seed]
            for j in indices_of(left):
                plus, minus = masks[j]
                if not plus & outside and not minus & inside:
                    inside |= plus
                    outside |= minus
            cov = _covered(F, inside) & left
            if cov.bit_count() > best_cov.bit_count():
                best_mask, best_cov = inside, cov
        chosen.append(frozenset(indices_of(best_mask)))
        left &= ~best_cov
    trivial = strong_disambiguation(F, "trivial")
    if len(trivial) < len(chosen):
        return trivial
    return SetSystem(F.ground_size, tuple(chosen))
