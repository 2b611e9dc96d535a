"""Exception types raised across the pipeline.

Every error the library raises deliberately derives from ThermofaceError,
so callers (and the CLI) can catch one base class.
"""


class ThermofaceError(Exception):
    """Base class for all library errors."""


# --- imaging ---------------------------------------------------------------

class MalformedFile(ThermofaceError):
    """Image stream has a bad magic number, header, or truncated payload."""


class UnsupportedDepth(ThermofaceError):
    """Image is not 8 bits per channel (e.g. 16-bit PNG, PNM maxval != 255)."""


class EmptyImage(ThermofaceError):
    """Operation needs at least one pixel."""


# --- segmentation ----------------------------------------------------------

class NoForeground(ThermofaceError):
    """Binary mask contains no foreground pixels."""


class OutOfBounds(ThermofaceError):
    """Ellipse bounding box does not fit inside the image."""


# --- wavelet ---------------------------------------------------------------

class OddLength(ThermofaceError):
    """1D Haar step needs an even-length signal."""


class NotPowerOfTwo(ThermofaceError):
    """Full 1D decomposition needs a power-of-two length."""


class OddDimension(ThermofaceError):
    """2D quad decomposition needs even width and height."""


class InsufficientDivisibility(ThermofaceError):
    """Raster dimensions are not divisible by 2**level."""


class MalformedPyramid(ThermofaceError):
    """Pyramid subband shapes are inconsistent."""


# --- classify --------------------------------------------------------------

class LengthMismatch(ThermofaceError):
    """Series being compared have different lengths."""


class EmptyGallery(ThermofaceError):
    """No enrolled series to match against."""


# --- eval ------------------------------------------------------------------

class MalformedManifest(ThermofaceError):
    """Manifest CSV is missing the header, a field, or lists a path twice."""


class MissingImage(ThermofaceError):
    """Manifest entry points at a file that does not exist."""


class SubjectTooSmall(ThermofaceError):
    """Subject has fewer than two images, so one split half would miss it."""


class InconsistentSeriesLength(ThermofaceError):
    """Series of one evaluation do not all share the same length."""


class StageError(ThermofaceError):
    """Pipeline failure tagged with the stage that raised it."""

    def __init__(self, stage, cause, path=None):
        self.stage = stage
        self.cause = cause
        self.path = path
        detail = str(cause)
        msg = f"{stage}: {type(cause).__name__}"
        if detail:
            msg += f": {detail}"
        if path is not None:
            msg += f" [{path}]"
        super().__init__(msg)
