"""Epsilon-nets for fuzzy set systems and transversals built from them.

A set ``A`` is an eps-net for a fuzzy system F under a measure mu when every
set S with ``mu(S+) >= eps`` has a point of A outside ``S-``.  Finding a
minimum net is therefore a hitting-set problem on the complements of the
minus-sets of the heavy sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from ._cover import min_hitting_set
from .core import FunctionClass, FuzzySetSystem, inner_outer, slice_system, to_fraction, vc_dimension
from .errors import DomainError, InfeasibleError, NotFoundError
from .lp import fractional_transversal
from .widths import DiscreteMeasure, find_eps_approximation

DEFAULT_NET_CONSTANT = 16
DEFAULT_RETRIES = 32


@dataclass(frozen=True)
class NetCertificate:
    net: tuple
    eps: Fraction
    checked_sets: int
    heavy_sets: int
    strategy: str = ""
    attempts: int = 1


def heavy_sets(F: FuzzySetSystem, mu: DiscreteMeasure, eps) -> list:
    """Indices of the sets whose plus-part has mass at least ``eps``."""
    eps = to_fraction(eps)
    if len(mu) != F.ground_size:
        raise DomainError(f"measure has {len(mu)} weights, ground set has {F.ground_size} points")
    return [j for j, s in enumerate(F.sets) if mu.mass(s.plus) >= eps]


def is_eps_net(A: Iterable[int], F: FuzzySetSystem, mu: DiscreteMeasure, eps) -> bool:
    A = set(A)
    if any(not 0 <= a < F.ground_size for a in A):
        raise DomainError("net mentions points outside the ground set")
    return all(not A <= F.sets[j].minus for j in heavy_sets(F, mu, eps))


def certify_net(A, F, mu, eps, strategy="", attempts=1) -> NetCertificate:
    A = tuple(sorted(set(A)))
    if not is_eps_net(A, F, mu, eps):
        raise AssertionError(f"{A} is not a {eps}-net")
    return NetCertificate(A, to_fraction(eps), len(F), len(heavy_sets(F, mu, eps)),
                          strategy, attempts)


def clamp_class(Q: FunctionClass, r, s) -> FunctionClass:
    """Apply ``v -> min(max(v, r), s)`` entrywise."""
    r, s = to_fraction(r), to_fraction(s)
    if not 0 <= r < s <= 1:
        raise DomainError(f"need 0 <= r < s <= 1, got r={r}, s={s}")
    return FunctionClass(Q.point_count, tuple(
        tuple(min(max(v, r), s) for v in row) for row in Q.rows))


def net_from_approximation(Q: FunctionClass, mu: DiscreteMeasure, r, s, eps,
                           strategy: str = "exhaustive_min", size_cap: int = 64,
                           seed: int = 0) -> NetCertificate:
    """An eps-net for ``Q_{r,s}`` read off a delta-approximation of the clamped class.

    ``delta`` is half of ``(s - r) * eps``, strictly below the threshold at
    which the approximation is guaranteed to be a net.
    """
    r, s, eps = to_fraction(r), to_fraction(s), to_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    delta = (s - r) * eps / 2
    xbar = find_eps_approximation(clamp_class(Q, r, s), mu, delta, strategy, size_cap, seed)
    return certify_net(xbar, slice_system(Q, r, s), mu, eps, f"approximation:{strategy}")


def net_size(d: int, eps, constant: float = DEFAULT_NET_CONSTANT) -> int:
    """``ceil(C d / eps * ln(1/eps + e))``, the sample size used by the random strategy."""
    eps = to_fraction(eps)
    return math.ceil(constant * d / eps * math.log(1 / eps + math.e))


def _outer_masks(F: FuzzySetSystem, which: list) -> list:
    full = (1 << F.ground_size) - 1
    return [full & ~F.masks[j][1] for j in which]


def find_eps_net(F: FuzzySetSystem, mu: DiscreteMeasure, eps, strategy: str = "greedy",
                 constant: float = DEFAULT_NET_CONSTANT, seed: int = 0,
                 retries: int = DEFAULT_RETRIES) -> NetCertificate:
    """Construct and verify an eps-net.

    ``random`` draws ``net_size(vc(F), eps, constant)`` i.i.d. points from mu
    (at least one), retrying with fresh streams derived from ``seed``.
    ``greedy`` repeatedly adds the point outside the most unhit minus-sets.
    ``exhaustive_min`` returns a minimum-size net.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    heavy = heavy_sets(F, mu, eps)
    if not heavy:
        return certify_net((), F, mu, eps, strategy)
    targets = _outer_masks(F, heavy)
    if strategy == "greedy":
        left = list(range(len(targets)))
        net = []
        while left:
            x = max(range(F.ground_size),
                    key=lambda p: (sum(targets[j] >> p & 1 for j in left), -p))
            net.append(x)
            left = [j for j in left if not targets[j] >> x & 1]
        return certify_net(net, F, mu, eps, strategy)
    if strategy == "exhaustive_min":
        return certify_net(min_hitting_set(targets, F.ground_size), F, mu, eps, strategy)
    if strategy == "random":
        d = vc_dimension(F) or 0
        size = max(1, net_size(d, eps, constant))
        p = mu.probabilities()
        for attempt in range(retries):
            rng = np.random.default_rng([seed, attempt])
            A = {int(x) for x in rng.choice(F.ground_size, size=size, p=p)}
            if is_eps_net(A, F, mu, eps):
                return certify_net(A, F, mu, eps, strategy, attempt + 1)
        raise NotFoundError(f"no {eps}-net among {retries} samples of size {size} "
                            f"(vc={d}, C={constant})")
    raise DomainError(f"unknown net strategy {strategy!r}")


@dataclass(frozen=True)
class TransversalCertificate:
    tau_star: Fraction
    weights: tuple
    measure: Optional[DiscreteMeasure]
    net: Optional[NetCertificate]


def transversal_via_net(F: FuzzySetSystem, strategy: str = "greedy",
                        tau_bound=None, **net_options) -> tuple:
    """A transversal of the outer system of F found as a ``1/t``-net.

    ``t`` is the exact fractional transversal number of the inner system
    (or ``tau_bound`` when a larger bound is supplied); the measure puts mass
    ``f(x)/tau_star`` on each point, where ``f`` is an optimal fractional
    transversal.  Every set is then heavy, so the net meets every outer set.
    """
    inner, outer = inner_outer(F)
    if any(not s for s in inner.sets):
        raise InfeasibleError("an inner set is empty: the inner transversal LP is infeasible")
    tau_star, weights = fractional_transversal(inner)
    if not F.sets:
        return (), TransversalCertificate(tau_star, weights, None, None)
    t = tau_star if tau_bound is None else to_fraction(tau_bound)
    if t < tau_star:
        raise DomainError(f"tau_bound {t} is below the fractional transversal number {tau_star}")
    mu = DiscreteMeasure(tuple(w / tau_star for w in weights))
    cert = find_eps_net(F, mu, 1 / t, strategy, **net_options)
    if not outer.is_transversal(cert.net):
        raise AssertionError("net failed to meet every outer set")
    return cert.net, TransversalCertificate(tau_star, weights, mu, cert)
