"""Exception hierarchy shared by every fuzzyvc module."""


class FuzzyVCError(Exception):
    """Base class for all library errors."""


class DomainError(FuzzyVCError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class CapacityError(FuzzyVCError):
    """An exhaustive computation was requested above its configured size limit."""


class InfeasibleError(FuzzyVCError):
    """A transversal or covering problem has no feasible solution."""


class NotFoundError(FuzzyVCError):
    """A randomized or bounded search ended without finding a witness.

    ``best`` carries the best value reached (e.g. the smallest deviation of an
    approximation candidate), or None when nothing was tried.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class HypothesisError(FuzzyVCError):
    """The hypothesis of a theorem pipeline does not hold on the given input."""


class PreconditionError(FuzzyVCError):
    """A named stage of a pipeline rejected its input."""

    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class InstanceError(FuzzyVCError):
    """An instance file is malformed or violates a type invariant.

    ``path`` points at the offending field, e.g. ``sets[2].minus``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
