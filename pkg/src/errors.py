# Exception hierarchy shared by every module


class MammoError(Exception):
    """Base class for all toolkit errors."""


class PgmFormatError(MammoError, ValueError):
    pass


class AnnotationError(MammoError, ValueError):
    pass


class PhantomSpecError(MammoError, ValueError):
    pass


class ConfigError(MammoError, ValueError):
    pass


class SeedOutOfBounds(MammoError):
    pass


class DegenerateContour(MammoError):
    pass


class EmptyRegion(MammoError):
    pass


class NoContrast(MammoError):
    """The neighbourhood of the seed is flat: no contour can expand."""


class SegmentationFailed(MammoError):
    pass


class FeatureError(MammoError):
    pass


class EmptyTrainingSet(MammoError):
    pass


class DatasetSchemaError(MammoError):
    pass


class ModelSchemaError(MammoError):
    pass


class UndefinedOverlap(MammoError):
    pass


class LengthMismatch(MammoError, ValueError):
    pass


# Exit codes of the command-line front end
SEGMENTATION_ERRORS = (NoContrast, SegmentationFailed, EmptyRegion)
SCHEMA_ERRORS = (DatasetSchemaError, ModelSchemaError)
