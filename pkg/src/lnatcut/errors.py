"""Exception hierarchy shared by all modules."""


class LnatcutError(Exception):
    """Base class for all library errors."""


class ValidationError(LnatcutError):
    """Input data violates a documented precondition or invariant."""


class ParseError(LnatcutError):
    """Instance file could not be parsed; message names the offending field."""


class UnboundedBoxError(LnatcutError):
    """Operation requires finite bounds on every coordinate."""


class BoxTooLargeError(LnatcutError):
    """Enumeration guard tripped; the lattice is larger than the budget."""


class EmptyInnerBoxError(LnatcutError):
    """The box has a side of length zero, so no shifted unit cube fits."""


class ZeroInequalityError(LnatcutError):
    """Cannot canonicalize the all-zero inequality."""


class PointNotInInnerBoxError(LnatcutError):
    """Anchor point p must satisfy p and p+1 inside the domain box."""


class PointOutsideBoxError(LnatcutError):
    """Query point lies outside the (relaxed) domain box."""


class DomainMismatchError(LnatcutError):
    """Function domain does not match what the operation expects."""


class DomainViolationError(LnatcutError):
    """Evaluation point violates the mixed-integer domain (x in box, y >= 0)."""


class NoInteriorPairError(LnatcutError):
    """Box contains no pair x, x+1, so the constant-increment test is vacuous."""


class NotDiscretelyConvexError(ValidationError):
    """Univariate table fails f(t-1) + f(t+1) >= 2 f(t) somewhere."""


class NotMMatrixError(ValidationError):
    """Quadratic form matrix is not symmetric diagonally dominant with
    nonpositive off-diagonal entries."""


class BadStructureError(ValidationError):
    """Affine pair slopes do not differ by alpha*e_i - beta*e_j."""


class NotInUError(ValidationError):
    """Weights violate u >= 0, u0 >= 0, u0 <= sum(u)."""


class NotElementaryError(ValidationError):
    """Arc list is not a single elementary cycle."""


class InvalidArcError(ValidationError):
    """Cycle arc joins two distinct indices with equal residuals."""


class DistinctnessViolatedError(LnatcutError):
    """Facet certificate requires pairwise distinct component values per level."""


class NoBoundaryLevelsError(LnatcutError):
    """No level attains the weight budget exactly, so no boundary tight
    points exist and the certificate cannot reach full rank."""


class TooLargeError(LnatcutError):
    """Combinatorial enumeration guard tripped (dimension above the cap)."""


class InfeasibleExtrasError(LnatcutError):
    """User-supplied side constraints make the relaxation infeasible."""


class UnboundedObjectiveError(LnatcutError):
    """Objective decreases along a recession ray of the feasible set."""


class MalformedProblemError(LnatcutError):
    """LP data has inconsistent dimensions or no variables."""


class PivotBudgetExceededError(LnatcutError):
    """Simplex exceeded the configured pivot budget (treated as a failure)."""


class UnknownCommandError(LnatcutError):
    """CLI dispatch received an unrecognized command."""
