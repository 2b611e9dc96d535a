"""Image decoding, grayscale conversion, and mean-intensity binarization.

Images are plain numpy arrays throughout: (h, w) uint8 for grayscale,
(h, w, 3) uint8 for color, (h, w) bool for binary masks (True = face /
foreground). Supported inputs are PGM/PPM (own codec, see pnm.py) and
8-bit gray or RGB PNG (via Pillow). JPEG is deliberately rejected;
transcode losslessly before ingest.
"""

import io
from fractions import Fraction

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import pnm
from .errors import EmptyImage, MalformedFile, UnsupportedDepth

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def decode_image(data: bytes) -> np.ndarray:
    """Decode PGM/PPM/PNG bytes to a gray (h, w) or color (h, w, 3) uint8 array."""
    if data[:2] in (b"P2", b"P3", b"P5", b"P6"):
        return pnm.decode(data)
    if data[:8] == _PNG_MAGIC:
        return _decode_png(data)
    if data[:2] == b"\xff\xd8":
        raise MalformedFile("JPEG is not supported; transcode to PGM/PPM/PNG")
    raise MalformedFile(f"unrecognized image magic: {data[:8]!r}")


def _decode_png(data: bytes) -> np.ndarray:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise MalformedFile(f"bad PNG stream: {exc}") from exc
    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8)
    if img.mode == "RGB":
        return np.asarray(img, dtype=np.uint8)
    if img.mode in ("I", "I;16", "I;16B", "I;16L", "I;16N"):
        raise UnsupportedDepth(f"16-bit PNG rejected (mode {img.mode})")
    raise UnsupportedDepth(f"PNG mode {img.mode} not supported; need 8-bit gray or RGB")


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """BT.601 luma: round(0.299 r + 0.587 g + 0.114 b), half up.

    Done in integer arithmetic ((299r + 587g + 114b + 500) // 1000) so ties
    round exactly and (v, v, v) maps to v with no float drift.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) color array, got shape {img.shape}")
    rgb = img.astype(np.int64)
    luma = (299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000
    return np.clip(luma, 0, 255).astype(np.uint8)


def ensure_grayscale(img: np.ndarray) -> np.ndarray:
    """Pass gray images through; collapse color ones via to_grayscale."""
    img = np.asarray(img)
    if img.ndim == 2:
        return img
    return to_grayscale(img)


def resample_nearest(img: np.ndarray, height: int, width: int) -> np.ndarray:
    """Nearest-neighbor resize: output (i, j) takes the source pixel at
    (i*h_in // h_out, j*w_in // w_out). Integer-only index math, so the
    same geometry always picks the same pixels.
    """
    img = np.asarray(img)
    if height < 1 or width < 1:
        raise ValueError(f"target {height}x{width} is not positive")
    in_h, in_w = img.shape[:2]
    rows = (np.arange(height, dtype=np.int64) * in_h) // height
    cols = (np.arange(width, dtype=np.int64) * in_w) // width
    return img[rows[:, None], cols]


def mean_intensity(img: np.ndarray) -> Fraction:
    """Arithmetic mean of all pixels, exact (no rounding)."""
    img = np.asarray(img)
    if img.size == 0:
        raise EmptyImage("cannot take mean of zero pixels")
    return Fraction(int(img.astype(np.int64).sum()), img.size)


def binarize(img: np.ndarray) -> np.ndarray:
    """Foreground mask: pixels strictly greater than the image mean.

    The comparison pixel > sum/count is done as pixel*count > sum in
    integers, so the rational mean is never rounded. A constant image
    yields an all-background mask.
    """
    img = np.asarray(img)
    if img.size == 0:
        raise EmptyImage("cannot binarize zero pixels")
    total = int(img.astype(np.int64).sum())
    return img.astype(np.int64) * img.size > total
