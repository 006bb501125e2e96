"""Exact combinatorics of fuzzy set systems and finite function classes."""

__version__ = "0.1.0"

from .core import (FunctionClass, FuzzyRelation, FuzzySet, FuzzySetSystem, Membership, SetSystem,
                   at_most, below, binomial_sauer_bound, dual_system, dual_vc_dimension,
                   fat_shattered, fat_shattering, inner_outer, sauer_bound, shatter_function,
                   shatters, slice_system, strong_disambiguation, trace_patterns,
                   verify_disambiguation, vc_dimension, vc_eps)
from .errors import (CapacityError, DomainError, FuzzyVCError, HypothesisError, InfeasibleError,
                     InstanceError, NotFoundError, PreconditionError)
from .helly import (fractional_helly_witness, has_pq_property, helly_parameters, pq_pipeline,
                    verify_helly_certificate, verify_pq_certificate)
from .lp import (Constraint, LpProblem, LpSolution, fractional_packing, fractional_transversal,
                 minimum_transversal, solve_lp, transversal_number)
from .nets import find_eps_net, is_eps_net, net_from_approximation, net_size, transversal_via_net
from .widths import (DiscreteMeasure, WidthEstimate, approximation_error, covering_bound,
                     covering_number, deviation_bound, deviation_estimate, find_eps_approximation,
                     is_eps_approximation, mean_width, symmetric_rademacher_complexity,
                     width_profile)
