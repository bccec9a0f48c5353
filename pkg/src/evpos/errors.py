"""Exception hierarchy.

Two families matter to callers: :class:`PreconditionError` (the inputs do
not satisfy what an operation needs) and :class:`NumericalError` (the inputs
were acceptable but the computation broke down).  The command line maps them
to exit codes 2 and 3; :class:`ParseError` maps to 1.
"""


class EvposError(Exception):
    """Base class of every error raised by this package."""

    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class ParseError(EvposError):
    """Malformed input file or command line."""

    code = "parse_error"


class PreconditionError(EvposError):
    code = "precondition_failed"


class NumericalError(EvposError):
    code = "numerical_failure"


# --- preconditions -------------------------------------------------------

class InvalidMatrix(PreconditionError):
    """Not square, wrong shape, or non-finite entries."""

    code = "invalid_matrix"


class NotReal(PreconditionError):
    code = "not_real"


class ContourTooClose(PreconditionError):
    code = "contour_too_close"


class NotSimple(PreconditionError):
    code = "not_simple"


class NotAnEigenvector(PreconditionError):
    code = "not_an_eigenvector"


class PerturbedSpectrum(PreconditionError):
    """The evaluation point is a spectral value of the perturbed operator."""

    code = "perturbed_spectrum"


class SpectralCollision(PreconditionError):
    code = "spectral_collision"


class NotEventuallyStronglyPositive(PreconditionError):
    code = "not_eventually_strongly_positive"


class ZeroPairing(PreconditionError):
    code = "zero_pairing"


class SeriesDiverges(PreconditionError):
    code = "series_diverges"


class PreconditionFailed(PreconditionError):
    """Generic failed check; the message names the check."""

    code = "precondition_failed"


class NotDiagonal(PreconditionError):
    code = "not_diagonal"


class NormTooLarge(PreconditionError):
    code = "norm_too_large"


class SpectralBoundViolation(PreconditionError):
    code = "spectral_bound_violation"


class BadGridSize(PreconditionError):
    code = "bad_grid_size"


class EpsilonOutOfRange(PreconditionError):
    code = "epsilon_out_of_range"


class DimensionTooSmall(PreconditionError):
    code = "dimension_too_small"


class NonPositiveParameters(PreconditionError):
    code = "non_positive_parameters"


# --- numerical failures --------------------------------------------------

class SingularResolvent(NumericalError):
    """``lambda*I - A`` is numerically singular, i.e. lambda is (near) spectrum."""

    code = "singular_resolvent"


class ConvergenceFailure(NumericalError):
    code = "convergence_failure"


class Overflow(NumericalError):
    code = "overflow"


class EigenvalueCollision(NumericalError):
    """A tracked eigenvalue ran into another one during continuation."""

    code = "eigenvalue_collision"
