"""Unnormalized Haar decomposition, 1D and 2D quad layout.

A pair (a, b) maps to average (a + b) / 2 and difference (a - b) / 2.
With that scaling the average band of an 8-bit image stays inside
[0, 255], so a reduced image is still an image. All results are dyadic
rationals, which float64 represents exactly for inputs of this size, so
the transform round-trips bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientDivisibility,
    MalformedPyramid,
    NotPowerOfTwo,
    OddDimension,
    OddLength,
)


def haar_step_1d(series):
    """One averaging pass: (averages, differences), each half length."""
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"expected 1D series, got shape {s.shape}")
    if s.size % 2:
        raise OddLength(f"cannot pair a series of length {s.size}")
    a, b = s[0::2], s[1::2]
    return (a + b) / 2.0, (a - b) / 2.0


def inverse_haar_step_1d(averages, differences):
    """Undo haar_step_1d: a = avg + diff, b = avg - diff, interleaved."""
    avg = np.asarray(averages, dtype=np.float64)
    det = np.asarray(differences, dtype=np.float64)
    if avg.shape != det.shape:
        raise ValueError(f"band shapes differ: {avg.shape} vs {det.shape}")
    out = np.empty(avg.size * 2, dtype=np.float64)
    out[0::2] = avg + det
    out[1::2] = avg - det
    return out


def haar_full_1d(series):
    """Full recursion down to one coefficient.

    Output layout is [mean, d_L, ..., d_1]: the global mean first, then
    detail bands from deepest to shallowest, e.g. [10, 4, 9, 5] becomes
    [7, 0, 3, 2]. Length must be a power of two.
    """
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"expected 1D series, got shape {s.shape}")
    n = s.size
    if n == 0 or n & (n - 1):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    details = []
    cur = s
    while cur.size > 1:
        cur, det = haar_step_1d(cur)
        details.append(det)
    return np.concatenate([cur] + details[::-1])


def inverse_haar_full_1d(coeffs):
    """Rebuild the original series from haar_full_1d output."""
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 1:
        raise ValueError(f"expected 1D coefficients, got shape {c.shape}")
    n = c.size
    if n == 0 or n & (n - 1):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    cur = c[:1]
    pos = 1
    while pos < n:
        det = c[pos:pos + cur.size]
        pos += cur.size
        cur = inverse_haar_step_1d(cur, det)
    return cur


@dataclass
class QuadSubbands:
    """One 2D decomposition level: four half-size bands.

    ll: averages both ways (the reduced image). hl: differences along
    rows (vertical edges). lh: differences along columns (horizontal
    edges). hh: differences both ways.
    """

    ll: np.ndarray
    hl: np.ndarray
    lh: np.ndarray
    hh: np.ndarray


def quad_decompose(image) -> QuadSubbands:
    """One 2D level: pair columns within each row, then rows within each column."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected 2D image, got shape {img.shape}")
    h, w = img.shape
    if h % 2 or w % 2:
        raise OddDimension(f"dimensions {h}x{w} are not both even")
    row_avg = (img[:, 0::2] + img[:, 1::2]) / 2.0
    row_det = (img[:, 0::2] - img[:, 1::2]) / 2.0
    return QuadSubbands(
        ll=(row_avg[0::2] + row_avg[1::2]) / 2.0,
        hl=(row_det[0::2] + row_det[1::2]) / 2.0,
        lh=(row_avg[0::2] - row_avg[1::2]) / 2.0,
        hh=(row_det[0::2] - row_det[1::2]) / 2.0,
    )


def inverse_quad(sub: QuadSubbands):
    """Undo quad_decompose, exactly for dyadic inputs."""
    shapes = {np.asarray(b).shape for b in (sub.ll, sub.hl, sub.lh, sub.hh)}
    if len(shapes) != 1:
        raise MalformedPyramid(f"band shapes differ: {sorted(shapes)}")

    def col_merge(avg, det):
        out = np.empty((avg.shape[0] * 2, avg.shape[1]), dtype=np.float64)
        out[0::2] = avg + det
        out[1::2] = avg - det
        return out

    row_avg = col_merge(np.asarray(sub.ll, np.float64), np.asarray(sub.lh, np.float64))
    row_det = col_merge(np.asarray(sub.hl, np.float64), np.asarray(sub.hh, np.float64))
    out = np.empty((row_avg.shape[0], row_avg.shape[1] * 2), dtype=np.float64)
    out[:, 0::2] = row_avg + row_det
    out[:, 1::2] = row_avg - row_det
    return out


def mosaic(sub: QuadSubbands):
    """Pack the four bands into one image: LL | HL over LH | HH."""
    return np.block([[sub.ll, sub.hl], [sub.lh, sub.hh]])


def split_mosaic(image) -> QuadSubbands:
    """Inverse of mosaic: cut a packed image back into four bands."""
    img = np.asarray(image, dtype=np.float64)
    h, w = img.shape
    if h % 2 or w % 2:
        raise OddDimension(f"mosaic dimensions {h}x{w} are not both even")
    hh, hw = h // 2, w // 2
    return QuadSubbands(
        ll=img[:hh, :hw].copy(),
        hl=img[:hh, hw:].copy(),
        lh=img[hh:, :hw].copy(),
        hh=img[hh:, hw:].copy(),
    )


@dataclass
class Pyramid:
    """Stacked quad levels: levels[0] splits the input, each next level
    splits the previous level's ll band."""

    levels: list

    @property
    def depth(self) -> int:
        return len(self.levels)

    def ll(self, level: int):
        """Reduced image after `level` passes (1-based)."""
        if not 1 <= level <= self.depth:
            raise ValueError(f"level {level} outside 1..{self.depth}")
        return self.levels[level - 1].ll


def decompose_to_level(image, level: int = 2) -> Pyramid:
    """Repeated quad_decompose on the shrinking average band.

    Every input dimension must divide by 2**level so each pass sees
    even dimensions.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected 2D image, got shape {img.shape}")
    h, w = img.shape
    need = 1 << level
    if h % need or w % need:
        raise InsufficientDivisibility(
            f"{h}x{w} image does not divide by {need} for level {level}")
    out = []
    cur = img
    for _ in range(level):
        sub = quad_decompose(cur)
        out.append(sub)
        cur = sub.ll
    return Pyramid(levels=out)


def reconstruct(pyr: Pyramid):
    """Invert decompose_to_level from the deepest level outward."""
    if pyr.depth == 0:
        raise MalformedPyramid("pyramid has no levels")
    img = None
    for sub in reversed(pyr.levels):
        if img is not None:
            expect = np.asarray(sub.ll).shape
            if img.shape != expect:
                raise MalformedPyramid(
                    f"reconstructed ll is {img.shape}, level expects {expect}")
            sub = QuadSubbands(ll=img, hl=sub.hl, lh=sub.lh, hh=sub.hh)
        img = inverse_quad(sub)
    return img


def band_to_gray(band, detail: bool = False) -> np.ndarray:
    """8-bit view of a band for image export.

    Average bands round half up to the nearest level; difference bands
    sit around zero, so they are offset by +128 first. Both clamp to
    [0, 255].
    """
    b = np.asarray(band, dtype=np.float64)
    if detail:
        b = b + 128.0
    return np.clip(np.floor(b + 0.5), 0.0, 255.0).astype(np.uint8)
