"""Exception types raised by trigsample."""


class TrigSampleError(ValueError):
    """Base class for domain errors."""


class SpectrumTooLargeError(TrigSampleError):
    pass


class EigensolverError(TrigSampleError):
    pass


class NotPSDError(TrigSampleError):
    pass


class SingularNormalMatrixError(TrigSampleError):
    pass


class DegenerateVoronoiCellError(TrigSampleError):
    pass


class UnsatisfiableError(TrigSampleError):
    """No sample size up to 2**62 drives the bound below the target."""
