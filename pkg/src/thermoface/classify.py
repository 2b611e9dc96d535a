"""Series dissimilarity and the two identification rules.

sim sums elementwise absolute differences, so identical series score 0
and lower is better. nearest_series compares a probe against every
enrolled series and takes the minimum. The mean-reference rule instead
collapses each series to one scalar (its distance from the column-wise
mean of the training set) and matches probes by scalar closeness; it
is kept because the evaluation protocol calls for it, with its
discriminative weakness documented in the tests.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyGallery, LengthMismatch
from .features import FeatureSeries


def _series_values(s) -> np.ndarray:
    if isinstance(s, FeatureSeries):
        return s.values
    return np.asarray(s)


def sim(a, b):
    """Sum of |a[j] - b[j]| over the series; an integer for integer series.

    Zero exactly when the series are identical, at most 255 * length for
    8-bit intensities.
    """
    av, bv = _series_values(a), _series_values(b)
    if av.size != bv.size:
        raise LengthMismatch(f"series lengths differ: {av.size} vs {bv.size}")
    if np.issubdtype(av.dtype, np.integer) and np.issubdtype(bv.dtype, np.integer):
        return int(np.abs(av.astype(np.int64) - bv.astype(np.int64)).sum())
    return float(np.abs(av.astype(np.float64) - bv.astype(np.float64)).sum())


@dataclass
class GalleryModel:
    """Immutable enrolled training set plus mean-reference side data.

    column_sums over the stacked series matrix gives the exact mean
    X[j] = column_sums[j] / count without leaving integers, and each
    row_signatures entry is that series' distance from X (a Fraction
    for integer series, so comparisons stay exact).
    """

    series: list
    series_length: int
    level: str
    count: int
    column_sums: np.ndarray
    row_signatures: list
    matrix: np.ndarray = field(repr=False, default=None)

    @property
    def mean_series(self) -> np.ndarray:
        return self.column_sums / self.count

    @property
    def subject_ids(self) -> list:
        return [s.subject_id for s in self.series]


@dataclass
class MatchResult:
    """Scores for one probe: every enrolled candidate, best first."""

    probe_id: str
    ranked: list
    predicted: str


def build_mean_reference(training) -> GalleryModel:
    """Enroll training series: stack them, take column sums, and compute
    each row's scalar distance from the column-wise mean.

    All series must share one length and one level tag, and each needs a
    subject_id.
    """
    training = list(training)
    if not training:
        raise EmptyGallery("no training series to enroll")
    n = training[0].length
    level = training[0].source
    for s in training:
        if s.length != n:
            raise LengthMismatch(f"series lengths differ: {n} vs {s.length}")
        if s.source != level:
            raise ValueError(f"mixed level tags: {level} vs {s.source}")
        if s.subject_id is None:
            raise ValueError("training series needs a subject_id")
    matrix = np.stack([s.values for s in training])
    colsum = matrix.sum(axis=0, dtype=np.int64) if np.issubdtype(
        matrix.dtype, np.integer) else matrix.sum(axis=0, dtype=np.float64)
    m = len(training)

    signatures = []
    if np.issubdtype(matrix.dtype, np.integer):
        # |s[j] - colsum[j]/m| summed = (sum of |m*s[j] - colsum[j]|) / m
        scaled = np.abs(m * matrix.astype(np.int64) - colsum).sum(axis=1)
        for s, y in zip(training, scaled.tolist()):
            signatures.append((s.subject_id, Fraction(y, m)))
    else:
        mean = colsum / m
        for s in training:
            signatures.append((s.subject_id, float(np.abs(s.values - mean).sum())))

    return GalleryModel(
        series=training,
        series_length=n,
        level=level,
        count=m,
        column_sums=colsum,
        row_signatures=signatures,
        matrix=matrix,
    )


# One builder serves both classifiers; the alias names the common case.
build_gallery = build_mean_reference


def nearest_series(probe, gallery: GalleryModel) -> MatchResult:
    """Rank every enrolled series by sim against the probe, lowest first.

    Ties keep enrollment order, so results are reproducible.
    """
    if not gallery.series:
        raise EmptyGallery("gallery holds no series")
    pv = _series_values(probe)
    if pv.size != gallery.series_length:
        raise LengthMismatch(
            f"probe length {pv.size} != gallery length {gallery.series_length}")
    mat = gallery.matrix
    if np.issubdtype(mat.dtype, np.integer) and np.issubdtype(pv.dtype, np.integer):
        scores = np.abs(mat.astype(np.int64) - pv.astype(np.int64)).sum(axis=1)
    else:
        scores = np.abs(mat.astype(np.float64) - pv.astype(np.float64)).sum(axis=1)
    ranked = sorted(zip(gallery.subject_ids, scores.tolist()), key=lambda t: t[1])
    probe_id = probe.subject_id if isinstance(probe, FeatureSeries) else None
    return MatchResult(probe_id=probe_id or "", ranked=ranked, predicted=ranked[0][0])


def probe_signature(probe, gallery: GalleryModel):
    """The probe's scalar distance from the gallery's mean series."""
    if not gallery.series:
        raise EmptyGallery("gallery holds no series")
    pv = _series_values(probe)
    if pv.size != gallery.series_length:
        raise LengthMismatch(
            f"probe length {pv.size} != gallery length {gallery.series_length}")
    if np.issubdtype(gallery.column_sums.dtype, np.integer) and np.issubdtype(
            pv.dtype, np.integer):
        scaled = int(np.abs(gallery.count * pv.astype(np.int64)
                            - gallery.column_sums).sum())
        return Fraction(scaled, gallery.count)
    return float(np.abs(pv - gallery.mean_series).sum())


def mean_reference_classify(probe_signature_z, gallery: GalleryModel,
                            probe_id: str = "") -> MatchResult:
    """Rank enrolled series by |signature - z|, lowest first.

    z must come from probe_signature against this same gallery. Ties
    keep enrollment order.
    """
    if not gallery.row_signatures:
        raise EmptyGallery("gallery holds no series")
    z = probe_signature_z
    if isinstance(z, float):
        z = Fraction(z) if isinstance(
            gallery.row_signatures[0][1], Fraction) else z
    ranked = sorted(
        ((sid, abs(y - z)) for sid, y in gallery.row_signatures),
        key=lambda t: t[1])
    return MatchResult(probe_id=probe_id, ranked=ranked, predicted=ranked[0][0])
