"""Exception hierarchy shared by all isacsim modules."""


class IsacError(Exception):
    """Base class for all isacsim errors."""


class DomainError(IsacError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularConfigError(DomainError):
    """A parameter combination makes the requested formula singular
    (e.g. rho_c = 0 in the communication-interfered detectors)."""


class InvalidTargetsError(DomainError):
    """QoS targets violate the detectability ordering pfa < pd."""


class NumericError(IsacError, ArithmeticError):
    """A numerical routine failed to converge or produced an
    out-of-range result that may not be silently clamped."""


class H0LimitError(IsacError):
    """Structured marker: the statistical GLRT coefficients are singular
    under the null hypothesis (vartheta = 0).

    Callers evaluating null-hypothesis probabilities must use the
    vartheta -> 0 limiting form (``detectors.bound_coefficients``)
    instead of the raw coefficient formulas.
    """

    def __init__(self, message: str = "vartheta = 0 under H0; use the limiting form"):
        super().__init__(message)
