"""Exact rational linear programming and minimum transversals.

The solver is a dense two-phase tableau simplex over ``Fraction`` using
Bland's smallest-index rule, so it terminates on degenerate problems and is
deterministic.  Every optimal answer carries dual weights and is re-checked
(primal feasibility, dual feasibility, equal objective values) before it is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._cover import min_hitting_set
from .core import SetSystem, to_fraction
from .errors import InfeasibleError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in ("<=", ">=", "="):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", to_fraction(self.rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * v for a, v in zip(self.coeffs, x)), _ZERO)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LpProblem:
    """``sense`` (min|max) of ``objective . x`` subject to ``constraints``.

    ``bounds[j]`` is ``(lower, upper)`` with None meaning unbounded; the
    default for every variable is ``(0, None)``.
    """

    sense: str
    objective: tuple
    constraints: tuple = ()
    bounds: Optional[tuple] = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        obj = tuple(to_fraction(c) for c in self.objective)
        cons = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints)
        for i, c in enumerate(cons):
            if len(c.coeffs) != len(obj):
                raise ValueError(f"constraint {i} has {len(c.coeffs)} coefficients, expected {len(obj)}")
        if self.bounds is None:
            bounds = ((_ZERO, None),) * len(obj)
        else:
            bounds = tuple((None if lo is None else to_fraction(lo), None if hi is None else to_fraction(hi))
                           for lo, hi in self.bounds)
            if len(bounds) != len(obj):
                raise ValueError("one bound pair per variable required")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for (lo, hi), v in zip(self.bounds, x):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return all(c.holds(x) for c in self.constraints)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), _ZERO)


@dataclass(frozen=True)
class LpSolution:
    status: str
    optimum: Optional[Fraction] = None
    primal: tuple = ()
    dual: tuple = ()


class _Tableau:
    """Dense simplex tableau for ``min c.x, A x = b, x >= 0`` with ``b >= 0``."""

    def __init__(self, rows, rhs, n_cols):
        self.rows = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.n = n_cols
        self.basis = [None] * len(rows)

    def pivot(self, r: int, c: int, obj_rows) -> None:
        prow = self.rows[r]
        pv = prow[c]
        if pv != 1:
            for j, v in enumerate(prow):
                if v:
                    prow[j] = v / pv
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        for row in obj_rows:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = c

    def reduced_costs(self, cost):
        z = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        z[j] -= cb * v
        return z

    def run(self, obj, allowed, extra_obj=()):
        """Bland's rule on objective row ``obj`` (last entry is -value); returns False if unbounded."""
        while True:
            enter = next((j for j in range(self.n) if allowed[j] and obj[j] < 0), None)
            if enter is None:
                return True
            leave, best = None, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        leave, best = i, ratio
            if leave is None:
                return False
            self.pivot(leave, enter, [obj, *extra_obj])


def _standard_form(p: LpProblem):
    # columns of the substituted problem: (original var, sign)
    cols = []
    offset = [_ZERO] * p.n_vars
    extra = []
    for j, (lo, hi) in enumerate(p.bounds):
        if lo is not None:
            offset[j] = lo
            cols.append((j, 1))
            if hi is not None:
                extra.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            offset[j] = hi
            cols.append((j, -1))
        else:
            cols.append((j, 1))
            cols.append((j, -1))
    rows, rels, rhs = [], [], []
    for c in p.constraints:
        rows.append([c.coeffs[j] * s for j, s in cols])
        rels.append(c.relation)
        rhs.append(c.rhs - sum((a * o for a, o in zip(c.coeffs, offset)), _ZERO))
    for k, cap in extra:
        row = [_ZERO] * len(cols)
        row[k] = Fraction(1)
        rows.append(row)
        rels.append("<=")
        rhs.append(cap)
    sign = 1 if p.sense == "min" else -1
    cost = [sign * p.objective[j] * s for j, s in cols]
    return cols, offset, rows, rels, rhs, cost


def solve_lp(p: LpProblem) -> LpSolution:
    """Solve ``p`` exactly; the status field reports infeasible or unbounded problems."""
    cols, offset, rows, rels, rhs, cost = _standard_form(p)
    m, n0 = len(rows), len(cols)

    flips = []
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]
            flips.append(-1)
        else:
            flips.append(1)

    # column layout: structural | surplus (one per >= row) | identity (slack or artificial)
    surplus = [i for i in range(m) if rels[i] == ">="]
    n_cols = n0 + len(surplus) + m
    ident = [n0 + len(surplus) + i for i in range(m)]
    artificial = [rels[i] != "<=" for i in range(m)]
    full = []
    for i in range(m):
        row = rows[i] + [_ZERO] * (len(surplus) + m)
        if rels[i] == ">=":
            row[n0 + surplus.index(i)] = Fraction(-1)
        row[ident[i]] = Fraction(1)
        full.append(row)
    tab = _Tableau(full, rhs, n_cols)
    tab.basis = list(ident)
    is_art = [False] * n_cols
    for i in range(m):
        is_art[ident[i]] = artificial[i]

    cost_full = cost + [_ZERO] * (n_cols - n0)
    if any(artificial):
        phase1 = [Fraction(int(a)) for a in is_art]
        obj1 = tab.reduced_costs(phase1)
        obj2 = tab.reduced_costs(cost_full)
        tab.run(obj1, [True] * n_cols, extra_obj=(obj2,))
        if obj1[-1] != 0:
            return LpSolution(INFEASIBLE)
        for i in range(m):
            if is_art[tab.basis[i]]:
                col = next((j for j in range(n_cols) if not is_art[j] and tab.rows[i][j]), None)
                if col is not None:
                    tab.pivot(i, col, [obj2])
    else:
        obj2 = tab.reduced_costs(cost_full)

    if not tab.run(obj2, [not a for a in is_art]):
        return LpSolution(UNBOUNDED)

    x_std = [_ZERO] * n_cols
    for i, b in enumerate(tab.basis):
        x_std[b] = tab.rows[i][-1]
    y_std = [-obj2[ident[i]] for i in range(m)]
    _certify(full, rhs, cost_full, is_art, x_std, y_std)

    x = list(offset)
    for k, (j, s) in enumerate(cols):
        x[j] += s * x_std[k]
    sign = 1 if p.sense == "min" else -1
    dual = tuple(sign * flips[i] * y_std[i] for i in range(len(p.constraints)))
    if not p.is_feasible(x):
        raise AssertionError("simplex returned an infeasible point")
    return LpSolution(OPTIMAL, p.value(x), tuple(x), dual)


def _certify(A, b, c, is_art, x, y) -> None:
    for row, rhs in zip(A, b):
        if sum((a * v for a, v in zip(row, x) if a), _ZERO) != rhs:
            raise AssertionError("primal equality violated")
    if any(v < 0 for v in x) or any(v for v, art in zip(x, is_art) if art):
        raise AssertionError("primal sign or artificial level violated")
    for j, cj in enumerate(c):
        if is_art[j]:
            continue
        rc = cj - sum((row[j] * yi for row, yi in zip(A, y) if row[j]), _ZERO)
        if rc < 0:
            raise AssertionError("dual infeasible reduced cost")
        if rc and x[j]:
            raise AssertionError("complementary slackness violated")
    if sum((ci * xi for ci, xi in zip(c, x)), _ZERO) != sum((bi * yi for bi, yi in zip(b, y)), _ZERO):
        raise AssertionError("duality gap")


# ---------------------------------------------------------------------------
# transversals


def _require_nonempty(S: SetSystem) -> None:
    for i, s in enumerate(S.sets):
        if not s:
            raise InfeasibleError(f"set {i} is empty and cannot be hit")


def transversal_lp(S: SetSystem) -> LpProblem:
    """``min sum t(x)`` with ``sum_{x in S} t(x) >= 1`` per set, ``t >= 0``."""
    cons = [Constraint([1 if x in s else 0 for x in range(S.ground_size)], ">=", 1) for s in S.sets]
    return LpProblem("min", (1,) * S.ground_size, tuple(cons))


def packing_lp(S: SetSystem) -> LpProblem:
    """``max sum f(S)`` with ``sum_{S ni x} f(S) <= 1`` per point, ``f >= 0``."""
    cons = [Constraint([1 if x in s else 0 for s in S.sets], "<=", 1) for x in range(S.ground_size)]
    return LpProblem("max", (1,) * len(S), tuple(cons))


def fractional_transversal(S: SetSystem) -> tuple:
    """Return ``(tau_star, weights)`` with one weight per ground point."""
    _require_nonempty(S)
    if not S.sets:
        return Fraction(0), (Fraction(0),) * S.ground_size
    sol = solve_lp(transversal_lp(S))
    if sol.status != OPTIMAL:
        raise InfeasibleError(f"transversal LP is {sol.status}")
    return sol.optimum, sol.primal


def fractional_packing(S: SetSystem) -> tuple:
    """Return ``(nu_star, weights)`` with one weight per member set."""
    _require_nonempty(S)
    if not S.sets:
        return Fraction(0), ()
    sol = solve_lp(packing_lp(S))
    if sol.status != OPTIMAL:
        raise InfeasibleError(f"packing LP is {sol.status}")
    return sol.optimum, sol.primal


def minimum_transversal(S: SetSystem) -> list:
    """A minimum hitting set, found by branch and bound seeded with ``ceil(tau_star)``."""
    _require_nonempty(S)
    if not S.sets:
        return []
    tau_star, _ = fractional_transversal(S)
    return min_hitting_set(S.masks, S.ground_size, lower_bound=math.ceil(tau_star))


def transversal_number(S: SetSystem) -> int:
    return len(minimum_transversal(S))


def greedy_transversal(S: SetSystem) -> list:
    """Repeatedly take the point hitting the most unhit sets (ties to the smaller index)."""
    _require_nonempty(S)
    left = set(range(len(S)))
    chosen = []
    while left:
        x = max(range(S.ground_size), key=lambda p: (sum(p in S.sets[j] for j in left), -p))
        chosen.append(x)
        left = {j for j in left if x not in S.sets[j]}
    return sorted(chosen)
