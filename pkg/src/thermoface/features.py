"""Flattening image bands into the 1D series the matcher compares.

A series is the row-major concatenation of a band's pixels, quantized
to integers in [0, 255] so every element is an ordinary intensity. One
level tag rides along with each series: "original" for the raw crop,
"LL1" / "LL2" for the average band after one / two reduction passes.
"""

from dataclasses import dataclass

import numpy as np

LEVELS = ("original", "LL1", "LL2")

_DEPTH = {"original": 0, "ll1": 1, "ll2": 2}
_CANON = {"original": "original", "ll1": "LL1", "ll2": "LL2"}


def canonical_level(tag: str) -> str:
    """Normalize a level tag's case; reject anything unknown."""
    key = str(tag).strip().lower()
    if key not in _CANON:
        raise ValueError(f"unknown level {tag!r}, expected one of {LEVELS}")
    return _CANON[key]


def level_depth(tag: str) -> int:
    """Number of reduction passes behind a level tag (0, 1 or 2)."""
    return _DEPTH[canonical_level(tag).lower()]


def quantize_values(values: np.ndarray) -> np.ndarray:
    """Round half up to the nearest integer and clamp to [0, 255]."""
    v = np.asarray(values, dtype=np.float64)
    return np.clip(np.floor(v + 0.5), 0.0, 255.0).astype(np.int64)


@dataclass(eq=False)
class FeatureSeries:
    """1D intensity series plus its provenance tag.

    subject_id is set once the series is enrolled in a gallery; probes
    carry None or a display name.
    """

    values: np.ndarray
    source: str
    subject_id: str = None

    @property
    def length(self) -> int:
        return self.values.size


def vectorize(band, source_tag: str, quantize: bool = True) -> FeatureSeries:
    """Flatten a band (2D array or FaceCrop) row by row into a series.

    With quantize on (the default) every value is rounded half up and
    clamped to [0, 255]; turned off, raw reals pass through untouched.
    """
    arr = band.pixels if hasattr(band, "pixels") else band
    arr = np.asarray(arr, dtype=np.float64)
    flat = arr.reshape(-1)
    values = quantize_values(flat) if quantize else flat.copy()
    return FeatureSeries(values=values, source=canonical_level(source_tag))
