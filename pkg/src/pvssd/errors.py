"""Exception hierarchy shared by the toolkit."""


class SSDError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(SSDError, ValueError):
    """Data or arguments outside the allowed domain."""


class DomainError(InvalidInputError):
    """A parameter value lies on or outside the boundary of its open domain."""


class InfeasibleMomentsError(InvalidInputError):
    """Marginal prior moments that no member of the conjugate family can match."""


class DegeneratePriorError(SSDError):
    """The prior puts zero variance on the inverse Fisher information."""


class BudgetExceededError(SSDError):
    """No sample size up to the search cap satisfies the criterion."""

    def __init__(self, cap, lhs_at_cap, epsilon_sq):
        self.cap = cap
        self.lhs_at_cap = lhs_at_cap
        self.epsilon_sq = epsilon_sq
        super().__init__(
            f"no n <= {cap} satisfies the criterion: lhs({cap}) = {lhs_at_cap:.6g} >= eps^2 = {epsilon_sq:.6g}"
        )


class InsufficientDataError(SSDError):
    """An empirical source is too small for resampling without replacement."""


class DataFormatError(InvalidInputError):
    """A data file could not be parsed."""
