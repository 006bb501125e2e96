"""Fractional Helly certificates and the (p,q) transversal pipeline."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .core import (FunctionClass, FuzzyRelation, SetSystem, at_most, below, dual_vc_dimension,
                   shatter_function, slice_system, to_fraction)
from .errors import DomainError, FuzzyVCError, HypothesisError, NotFoundError, PreconditionError
from .lp import fractional_packing, fractional_transversal
from .nets import transversal_via_net

DEFAULT_M_MAX = 32
ENUMERATION_CAP = 200_000


def has_pq_property(S: SetSystem, p: int, q: int) -> bool:
    """Whether every p members of S include q with a common point.

    q members share a point exactly when some point lies in q of them, so
    each p-subfamily is checked through point degrees.
    """
    if not p >= q >= 1:
        raise DomainError(f"need p >= q >= 1, got p={p}, q={q}")
    if len(S) < p:
        raise DomainError(f"family has {len(S)} sets, fewer than p={p}")
    masks = S.masks
    for combo in itertools.combinations(range(len(S)), p):
        if not any(sum(masks[j] >> x & 1 for j in combo) >= q for x in range(S.ground_size)):
            return False
    return True


def p_prime(p: int, d: int) -> int:
    if p < 1 or d < 1:
        raise DomainError("p and d must be at least 1")
    return p * (d - 1) + 1


def helly_parameters(dual_shatter: Callable[[int], int], k: int, alpha,
                     m_max: int = DEFAULT_M_MAX) -> Optional[tuple]:
    """Smallest ``m in [k, m_max]`` with ``dual_shatter(m) < alpha/4 * C(m, k)``, and ``1/(2m)``."""
    alpha = to_fraction(alpha)
    if k < 1 or not 0 < alpha <= 1:
        raise DomainError("need k >= 1 and 0 < alpha <= 1")
    for m in range(k, m_max + 1):
        if dual_shatter(m) < alpha / 4 * math.comb(m, k):
            return m, Fraction(1, 2 * m)
    return None


@dataclass(frozen=True)
class HellyCertificate:
    k: int
    alpha: Fraction
    m: int
    beta: Fraction
    n: int
    good_fraction: Fraction
    J: tuple
    witness: int


def dual_shatter_oracle(R: FuzzyRelation) -> Callable[[int], int]:
    """Exact shatter function of the row system of R (a fuzzy system on Y).

    Beyond ``m = |Y|`` no m-subset exists; the value there is the number of
    rows, which bounds every trace count.
    """
    rows = R.row_system()

    @lru_cache(maxsize=None)
    def oracle(m: int) -> int:
        if m <= rows.ground_size:
            return shatter_function(rows, m)
        return len(rows)

    return oracle


def intersecting_fraction(R: FuzzyRelation, k: int) -> Fraction:
    """Share of k-sets of columns whose plus-parts have a common point."""
    plus = [m for m, _ in R.column_system().masks]
    n = len(plus)
    hits = 0
    for I in itertools.combinations(range(n), k):
        common = (1 << R.x_size) - 1
        for i in I:
            common &= plus[i]
            if not common:
                break
        hits += bool(common)
    return Fraction(hits, math.comb(n, k))


def fractional_helly_witness(R: FuzzyRelation, k: int, alpha,
                             m_max: int = DEFAULT_M_MAX) -> HellyCertificate:
    """Certify the fractional Helly conclusion on the columns of R.

    Raises HypothesisError when fewer than ``alpha * C(n, k)`` k-sets of
    columns have intersecting plus-parts, NotFoundError when no ``m`` up to
    ``m_max`` meets the dual shatter condition or when the best point
    escapes the minus-part of fewer than ``ceil(beta n)`` columns.
    """
    alpha = to_fraction(alpha)
    n = R.y_size
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n = {n}")
    good = intersecting_fraction(R, k)
    if good < alpha:
        raise HypothesisError(f"only {good} of the {k}-sets intersect, below alpha = {alpha}")
    params = helly_parameters(dual_shatter_oracle(R), k, alpha, m_max)
    if params is None:
        raise NotFoundError(f"no m <= {m_max} satisfies the dual shatter condition")
    m, beta = params
    minus = [mm for _, mm in R.column_system().masks]
    witness = max(range(R.x_size), key=lambda a: (sum(not mm >> a & 1 for mm in minus), -a))
    J = tuple(j for j in range(n) if not minus[j] >> witness & 1)
    cert = HellyCertificate(k, alpha, m, beta, n, good, J, witness)
    if len(J) < math.ceil(beta * n):
        raise NotFoundError(f"best point avoids {len(J)} minus-sets, need {math.ceil(beta * n)}")
    return cert


def verify_helly_certificate(R: FuzzyRelation, cert: HellyCertificate) -> bool:
    minus = [mm for _, mm in R.column_system().masks]
    return (cert.beta == Fraction(1, 2 * cert.m)
            and len(cert.J) >= math.ceil(cert.beta * cert.n)
            and all(not minus[j] >> cert.witness & 1 for j in cert.J)
            and cert.good_fraction >= cert.alpha
            and intersecting_fraction(R, cert.k) == cert.good_fraction)


# ---------------------------------------------------------------------------
# (p, q) pipeline


@dataclass(frozen=True)
class StageRecord:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PqCertificate:
    p: int
    q: int
    d: int
    denominator: int
    multiplicities: tuple
    expanded_size: int
    tau_star_outer: Fraction
    stages: tuple
    packing: tuple = ()
    nu_star_outer: Fraction = Fraction(0)


def _count_intersecting(masks, size: int) -> int:
    hits = 0
    for combo in itertools.combinations(range(len(masks)), size):
        common = -1
        for j in combo:
            common &= masks[j]
            if not common:
                break
        hits += bool(common)
    return hits


def pq_pipeline(Q: FunctionClass, r, t, s, p: int, q: int) -> tuple:
    """Transversal of ``Q_{<s}`` from the (p,q)-property of ``Q_{<=r}``.

    Stages, each recorded in the certificate:

    1. ``Q_{<=r}`` has the (p,q)-property and ``q`` exceeds the dual VC
       dimension of ``Q_{r,t}``;
    2. exact ``tau*(Q_{<t}) = nu*(Q_{<t})``, the optimal packing scaled to
       integer multiplicities, the expanded system and a heavy point;
    3. ``tau*(Q_{<=t}) <= tau*(Q_{<t})``;
    4. a ``1/tau*(Q_{<t})``-net for ``Q_{t,s}``, which is a transversal of
       ``Q_{<s}``.
    """
    r, t, s = to_fraction(r), to_fraction(t), to_fraction(s)
    if not 0 <= r < t < s <= 1:
        raise PreconditionError("thresholds", f"need 0 <= r < t < s <= 1, got {r}, {t}, {s}")
    if not p >= q >= 1:
        raise PreconditionError("thresholds", f"need p >= q >= 1, got p={p}, q={q}")
    stages = []

    middle = slice_system(Q, r, t)
    d = dual_vc_dimension(middle) or 0
    if q < d + 1:
        raise PreconditionError("dual-vc", f"q = {q} must exceed the dual VC dimension {d}")
    stages.append(StageRecord("dual-vc", True, {"dual_vc": d, "q": q}))

    inner = at_most(Q, r)
    if len(inner) < p:
        raise PreconditionError("pq-property", f"{len(inner)} sets, fewer than p = {p}")
    if not has_pq_property(inner, p, q):
        raise PreconditionError("pq-property", f"Q_(<= {r}) lacks the ({p},{q})-property")
    stages.append(StageRecord("pq-property", True, {"p": p, "q": q, "sets": len(inner)}))

    outer = below(Q, t)
    try:
        tau_t, _ = fractional_transversal(outer)
        nu_t, packing = fractional_packing(outer)
    except FuzzyVCError as exc:
        raise PreconditionError("fractional-transversal", str(exc)) from exc
    stages.append(StageRecord("lp-duality", tau_t == nu_t, {"tau_star": tau_t, "nu_star": nu_t}))

    D = 1
    for f in packing:
        D = math.lcm(D, f.denominator)
    mult = tuple(int(f * D) for f in packing)
    N = sum(mult)
    stages.append(StageRecord("multiplicities", N == D * nu_t and all(m == f * D for m, f in zip(mult, packing)),
                              {"denominator": D, "expanded_size": N}))

    expanded = [mask for mask, k in zip(inner.masks, mult) for _ in range(k)]
    pp = p_prime(p, max(d, 1))
    details = {"p_prime": pp}
    if pp >= q and N >= pp and math.comb(N, pp) <= ENUMERATION_CAP:
        details["holds"] = has_pq_property(SetSystem(Q.point_count, [
            [x for x in range(Q.point_count) if m >> x & 1] for m in expanded]), pp, q)
    else:
        details["holds"] = None
    if N >= d + 1 and math.comb(N, d + 1) <= ENUMERATION_CAP:
        details["intersecting_tuples"] = _count_intersecting(expanded, d + 1)
        details["tuples"] = math.comb(N, d + 1)
    if N >= p >= d - 1 and p - d + 1 >= 0:
        details["alpha_bound"] = Fraction(math.comb(N, p), max(1, math.comb(N - d + 1, p - d + 1)))
    stages.append(StageRecord("expanded-pq", True, details))

    out_masks = outer.masks
    weight = [sum(m for m, om in zip(mult, out_masks) if om >> a & 1) for a in range(Q.point_count)]
    heavy = max(range(Q.point_count), key=lambda a: (weight[a], -a)) if Q.point_count else None
    hv = weight[heavy] if heavy is not None else 0
    stages.append(StageRecord("heavy-point", hv <= D and (hv == 0 or nu_t * hv <= N),
                              {"point": heavy, "pairs": hv, "beta": Fraction(hv, N) if N else None}))

    tau_le_t, _ = fractional_transversal(at_most(Q, t))
    stages.append(StageRecord("enlarge", tau_le_t <= tau_t, {"tau_star_le_t": tau_le_t}))

    transversal, tcert = transversal_via_net(slice_system(Q, t, s), tau_bound=tau_t)
    final = below(Q, s)
    stages.append(StageRecord("net-transversal", final.is_transversal(transversal),
                              {"eps": tcert.net.eps if tcert.net else None, "size": len(transversal)}))

    failed = [st.name for st in stages if not st.passed]
    if failed:
        raise AssertionError(f"pipeline stages failed to replay: {failed}")
    cert = PqCertificate(p, q, d, D, mult, N, tau_t, tuple(stages), tuple(packing), nu_t)
    return transversal, cert


def verify_pq_certificate(Q: FunctionClass, r, s, transversal, cert: PqCertificate) -> bool:
    """Replay the arithmetic of a certificate and the final transversal."""
    D = cert.denominator
    return (all(m == f * D for m, f in zip(cert.multiplicities, cert.packing))
            and sum(cert.multiplicities) == D * cert.nu_star_outer == cert.expanded_size
            and cert.nu_star_outer == cert.tau_star_outer
            and all(st.passed for st in cert.stages)
            and below(Q, s).is_transversal(transversal))
