"""Face-region segmentation on binary masks.

Pipeline order: label connected components, keep the largest one as the
face, locate its mass centroid, derive an ellipse from the foreground
extent around the centroid (horizontal reach = ear direction, upward
reach = forehead direction), and crop that ellipse out of the grayscale
image.

Coordinates are (x, y) = (column, row), zero-based, y growing downward.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NoForeground, OutOfBounds


@dataclass
class ComponentMap:
    """Per-pixel component labels (0 = background, 1..K = components)."""

    labels: np.ndarray
    component_sizes: dict[int, int]

    @property
    def num_components(self) -> int:
        return len(self.component_sizes)

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class Centroid:
    """Mass center of a binary mask, exact rationals until rounding."""

    x: Fraction
    y: Fraction


@dataclass(frozen=True)
class EllipseSpec:
    """Ellipse for face cropping.

    semi_major is the vertical semi-axis (centroid to forehead),
    semi_minor the horizontal one (centroid to ear). The names follow
    face anatomy, not axis magnitude.
    """

    cx: int
    cy: int
    semi_major: int
    semi_minor: int

    def __post_init__(self):
        if self.semi_major < 1 or self.semi_minor < 1:
            raise ValueError("semi-axes must be >= 1")


@dataclass
class FaceCrop:
    """Ellipse-masked grayscale crop, zero outside the mask.

    Dimensions are the ellipse bounding box zero-padded on the right and
    bottom to a multiple of 4, so two Haar levels divide evenly.
    """

    pixels: np.ndarray
    mask: np.ndarray

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def round_half_up(value) -> int:
    """Round to nearest integer, ties toward +infinity. Exact for Fraction."""
    return math.floor(Fraction(value) + Fraction(1, 2))


def _row_runs(row: np.ndarray):
    """Half-open [start, end) runs of True in a 1D bool array."""
    padded = np.zeros(row.size + 2, dtype=np.int8)
    padded[1:-1] = row
    d = np.diff(padded)
    return np.flatnonzero(d == 1), np.flatnonzero(d == -1)


def label_components(mask: np.ndarray, connectivity: int = 8) -> ComponentMap:
    """Label connected foreground components under 4- or 8-adjacency.

    Run-based two-pass union-find: each row's foreground runs are merged
    with the overlapping runs of the previous row (overlap window widened
    by one column for 8-connectivity). Labels are renumbered 1..K in
    first-encounter row-major order, so output is fully deterministic.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)

    parent: list[int] = []

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    reach = 1 if connectivity == 8 else 0
    all_runs = []  # (row, start, end, run_id), creation order = row-major
    prev: list[tuple[int, int, int]] = []  # (start, end, run_id) of row above
    for y in range(h):
        starts, ends = _row_runs(mask[y])
        cur = []
        k = 0
        for s, e in zip(starts.tolist(), ends.tolist()):
            rid = len(parent)
            parent.append(rid)
            # skip previous-row runs entirely left of the widened window
            while k < len(prev) and prev[k][1] <= s - reach:
                k += 1
            j = k
            while j < len(prev) and prev[j][0] < e + reach:
                ra, rb = find(rid), find(prev[j][2])
                if ra != rb:
                    if rb < ra:
                        ra, rb = rb, ra
                    parent[rb] = ra
                j += 1
            cur.append((s, e, rid))
            all_runs.append((y, s, e, rid))
        prev = cur

    remap: dict[int, int] = {}
    for y, s, e, rid in all_runs:
        root = find(rid)
        new_id = remap.get(root)
        if new_id is None:
            new_id = len(remap) + 1
            remap[root] = new_id
        labels[y, s:e] = new_id

    counts = np.bincount(labels.ravel(), minlength=len(remap) + 1)
    sizes = {k: int(counts[k]) for k in range(1, len(remap) + 1)}
    return ComponentMap(labels=labels, component_sizes=sizes)


def largest_component(cm: ComponentMap) -> np.ndarray:
    """Mask of the biggest component; size ties go to the smallest label."""
    if not cm.component_sizes:
        raise NoForeground("no components to choose from")
    best_size = max(cm.component_sizes.values())
    best_label = min(k for k, v in cm.component_sizes.items() if v == best_size)
    return cm.labels == best_label


def centroid(mask: np.ndarray) -> Centroid:
    """Mass center of the foreground: mean column and mean row, exact."""
    mask = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(mask)
    n = xs.size
    if n == 0:
        raise NoForeground("mask has no foreground pixels")
    return Centroid(x=Fraction(int(xs.sum()), n), y=Fraction(int(ys.sum()), n))


def derive_ellipse(mask: np.ndarray, c: Centroid) -> EllipseSpec:
    """Measure ellipse semi-axes from the mask around the rounded centroid.

    semi_minor: farthest horizontal foreground reach in the centroid's row,
    on either side. semi_major: reach up to the topmost foreground pixel in
    the centroid's column. Both are clamped so the ellipse stays inside the
    image and floored at 1.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise NoForeground("mask has no foreground pixels")
    h, w = mask.shape
    cx = min(max(round_half_up(c.x), 0), w - 1)
    cy = min(max(round_half_up(c.y), 0), h - 1)

    row_fg = np.flatnonzero(mask[cy, :])
    horiz = 0
    if row_fg.size:
        horiz = max(cx - int(row_fg[0]), int(row_fg[-1]) - cx)
    col_fg = np.flatnonzero(mask[:, cx])
    vert = 0
    if col_fg.size:
        vert = cy - int(col_fg[0])

    semi_minor = max(1, min(horiz, cx, w - 1 - cx))
    semi_major = max(1, min(vert, cy, h - 1 - cy))
    return EllipseSpec(cx=cx, cy=cy, semi_major=semi_major, semi_minor=semi_minor)


def rasterize_ellipse(spec: EllipseSpec) -> set[tuple[int, int]]:
    """Integer boundary of the ellipse via the midpoint algorithm.

    Walks the first quadrant in two regions (|slope| < 1, then >= 1) with
    integer decision variables (scaled by 4 so the half-pixel midpoints
    stay exact) and reflects over both axes, so the result is 4-way
    symmetric by construction. Returns a set of absolute (x, y) points.
    """
    rx, ry = spec.semi_minor, spec.semi_major
    rx2, ry2 = rx * rx, ry * ry

    quarter = [(0, ry)]
    x, y = 0, ry
    p = 4 * ry2 - 4 * rx2 * ry + rx2  # 4 * F(1, ry - 1/2)
    while ry2 * x < rx2 * y:
        x += 1
        if p < 0:
            p += 8 * ry2 * x + 4 * ry2
        else:
            y -= 1
            p += 8 * ry2 * x - 8 * rx2 * y + 4 * ry2
        quarter.append((x, y))

    p = ry2 * (2 * x + 1) ** 2 + 4 * rx2 * (y - 1) ** 2 - 4 * rx2 * ry2
    while y > 0:
        y -= 1
        if p > 0:
            p += 4 * rx2 - 8 * rx2 * y
        else:
            x += 1
            p += 8 * ry2 * x - 8 * rx2 * y + 4 * rx2
        quarter.append((x, y))

    points = set()
    for qx, qy in quarter:
        for sx in (qx, -qx):
            for sy in (qy, -qy):
                points.add((spec.cx + sx, spec.cy + sy))
    return points


def crop_face(gray: np.ndarray, spec: EllipseSpec) -> FaceCrop:
    """Cut the ellipse interior out of the grayscale image.

    A pixel is kept iff ry^2 (x-cx)^2 + rx^2 (y-cy)^2 <= rx^2 ry^2 (all
    integer arithmetic); everything else in the bounding box is zeroed.
    """
    gray = np.asarray(gray)
    h, w = gray.shape
    rx, ry = spec.semi_minor, spec.semi_major
    x0, x1 = spec.cx - rx, spec.cx + rx
    y0, y1 = spec.cy - ry, spec.cy + ry
    if x0 < 0 or y0 < 0 or x1 >= w or y1 >= h:
        raise OutOfBounds(
            f"ellipse box x[{x0},{x1}] y[{y0},{y1}] exceeds {w}x{h} image")

    box = gray[y0:y1 + 1, x0:x1 + 1]
    yy, xx = np.ogrid[0:box.shape[0], 0:box.shape[1]]
    mask = (ry * ry) * (xx - rx) ** 2 + (rx * rx) * (yy - ry) ** 2 <= rx * rx * ry * ry
    pixels = np.where(mask, box, 0).astype(np.uint8)

    pad_h = (-pixels.shape[0]) % 4
    pad_w = (-pixels.shape[1]) % 4
    if pad_h or pad_w:
        pixels = np.pad(pixels, ((0, pad_h), (0, pad_w)))
        mask = np.pad(mask, ((0, pad_h), (0, pad_w)))
    return FaceCrop(pixels=pixels, mask=mask)
