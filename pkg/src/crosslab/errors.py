"""Exception hierarchy shared by all crosslab modules."""


class CrosslabError(Exception):
    """Base class for every error raised by the package."""


class PoleError(CrosslabError, ValueError):
    """Argument sits on a pole of a meromorphic function."""


class NonFiniteSampleError(CrosslabError, ArithmeticError):
    """An integrand or wave function produced inf/nan at a sample point."""


class ContinuationError(NonFiniteSampleError):
    """Analytic continuation into the strip produced non-finite values."""


class DivergenceError(CrosslabError, ValueError):
    """Integral requested outside its convergence region."""


class TruncationError(CrosslabError, ArithmeticError):
    """Truncated contour or series tail exceeds the requested tolerance."""


class NonConvergenceError(CrosslabError, ArithmeticError):
    """Iterated quadrature did not stabilise."""


class DegenerateRapidityError(CrosslabError, ValueError):
    """Two rapidities coincide where distinct ones are required."""


class MomentumConservationError(CrosslabError, ValueError):
    """Vertex-operator momenta do not sum to zero."""


class CoincidentPointError(CrosslabError, ValueError):
    """Two insertion points of a correlator coincide."""


class ConfigError(CrosslabError, ValueError):
    """Suite configuration failed validation."""


class UnknownSuiteError(ConfigError):
    """Requested suite name is not registered."""
