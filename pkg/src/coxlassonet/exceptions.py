"""Exception hierarchy shared across the package.

Data problems subclass ValueError, numerical failures subclass RuntimeError,
so callers can catch either the package base class or the builtin family.
"""


class CoxLassoNetError(Exception):
    """Base class for every error raised by this package."""


class DataError(CoxLassoNetError, ValueError):
    """Invalid input data (shapes, values, schema)."""


class EmptyOrSingletonError(DataError):
    """Fewer than two samples."""


class DimensionMismatchError(DataError):
    """Inconsistent covariate or parameter dimensions."""


class LengthMismatchError(DataError):
    """Vector length does not match the number of samples."""


class NoEventsError(DataError):
    """Every sample is censored; the partial likelihood is degenerate."""


class NonFiniteValueError(DataError):
    """NaN or infinity found where finite values are required."""


class ConstantColumnError(DataError):
    """A covariate column has zero standard deviation."""


class SchemaError(DataError):
    """CSV header or cell contents violate the expected schema."""


class EmptyTruthError(DataError):
    """The true-feature set is empty."""


class InconsistentTruthError(DataError):
    """Replication records do not share a single truth set."""


class KTooSmallError(DataError):
    """Top-k size smaller than the truth set."""


class FeatureOutOfRangeError(DataError):
    """Feature label outside 1..p."""


class KOutOfRangeError(DataError):
    """Requested selection size outside 1..p."""


class InvalidRhoError(DataError):
    """Correlation parameter outside [0, 1)."""


class InvalidCError(DataError):
    """Censoring upper bound is not positive."""


class InvalidConfigError(CoxLassoNetError, ValueError):
    """Unparseable or contradictory run configuration."""


class NumericalError(CoxLassoNetError, RuntimeError):
    """Numerical failure during optimization."""


class NonFiniteLossError(NumericalError):
    """Training loss became NaN or infinite (learning rate too large?)."""


class NoTerminationError(NumericalError):
    """Regularization path exceeded the safety cap without emptying the model."""


class SingularHessianError(NumericalError):
    """Observed information matrix is singular."""
