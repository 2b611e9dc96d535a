"""Batch experiment harness: manifests, splits, pipeline runs, reports.

A dataset is a CSV manifest of (path, subject_id) rows. Each subject's
images split alternately into train (1st, 3rd, ...) and test (2nd,
4th, ...) halves. Evaluation enrolls the train half at a feature level,
classifies every test image, and reports correct / total per
level x classifier.
"""

import csv
import io
import json
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import imaging, pnm, segmentation, wavelet
from .classify import (
    build_gallery,
    mean_reference_classify,
    nearest_series,
    probe_signature,
)
from .config import Config
from .errors import (
    EmptyGallery,
    InconsistentSeriesLength,
    MalformedFile,
    MalformedManifest,
    MissingImage,
    StageError,
    SubjectTooSmall,
    ThermofaceError,
)
from .features import LEVELS, FeatureSeries, canonical_level, level_depth, vectorize

CLASSIFIERS = ("nearest", "mean_reference")


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    subject_id: str


@dataclass
class DatasetManifest:
    """Ordered dataset listing; order drives the train/test split."""

    entries: list
    name: str = "dataset"


@dataclass
class SplitPlan:
    """Row indices of the train and test halves (disjoint, exhaustive)."""

    train_rows: list
    test_rows: list


def load_manifest(path) -> DatasetManifest:
    """Read a `path,subject_id` CSV; relative paths resolve against it.

    Rejects duplicate paths and subjects with fewer than two images (a
    one-image subject cannot appear in both split halves).
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedManifest(f"cannot read manifest {p}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise MalformedManifest(f"{p}: empty manifest")
    header = [c.strip().lstrip("﻿") for c in rows[0]]
    if header != ["path", "subject_id"]:
        raise MalformedManifest(
            f"{p}: header must be 'path,subject_id', got {','.join(rows[0])!r}")

    entries = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2 or not row[0].strip() or not row[1].strip():
            raise MalformedManifest(f"{p}:{lineno}: expected 'path,subject_id'")
        rel, sid = row[0].strip(), row[1].strip()
        full = Path(rel)
        if not full.is_absolute():
            full = p.parent / full
        if str(full) in seen:
            raise MalformedManifest(f"{p}:{lineno}: duplicate path {rel!r}")
        seen.add(str(full))
        entries.append(ManifestEntry(path=full, subject_id=sid))
    if not entries:
        raise MalformedManifest(f"{p}: no entries")

    counts = {}
    for e in entries:
        counts[e.subject_id] = counts.get(e.subject_id, 0) + 1
    small = sorted(s for s, c in counts.items() if c < 2)
    if small:
        raise SubjectTooSmall(f"{p}: subjects with a single image: {small}")
    return DatasetManifest(entries=entries, name=p.stem)


def split_odd_even(m: DatasetManifest) -> SplitPlan:
    """Alternate each subject's images between train and test, in file order."""
    train, test = [], []
    position = {}
    for i, e in enumerate(m.entries):
        k = position.get(e.subject_id, 0)
        (train if k % 2 == 0 else test).append(i)
        position[e.subject_id] = k + 1
    return SplitPlan(train_rows=train, test_rows=test)


@dataclass
class Preprocessed:
    """Every intermediate of one image's preprocessing."""

    gray: np.ndarray
    binary: np.ndarray
    face_mask: np.ndarray
    center: segmentation.Centroid
    ellipse: segmentation.EllipseSpec
    crop: segmentation.FaceCrop
    pixels: np.ndarray  # crop pixels, resampled when config asks for it


def _debug_stem(path) -> str:
    return Path(path).stem if path is not None else "image"


def _dump_gray(debug_dir, name, gray):
    out = Path(debug_dir)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write_bytes(out / name, pnm.encode_pgm(np.asarray(gray, dtype=np.uint8)))


def load_gray(image_path) -> np.ndarray:
    """Read and decode an image file to grayscale, tagged as the imaging stage."""
    p = Path(image_path)
    try:
        data = p.read_bytes()
    except FileNotFoundError:
        raise StageError("imaging", MissingImage(f"no such file: {p}"), p) from None
    except OSError as exc:
        raise StageError("imaging", exc, p) from exc
    try:
        return imaging.ensure_grayscale(imaging.decode_image(data))
    except ThermofaceError as exc:
        raise StageError("imaging", exc, p) from exc


def preprocess_face(gray: np.ndarray, config: Config, path=None) -> Preprocessed:
    """Binarize, isolate the largest component, fit and cut the ellipse."""
    try:
        binary = imaging.binarize(gray)
    except ThermofaceError as exc:
        raise StageError("imaging", exc, path) from exc
    try:
        components = segmentation.label_components(binary, config.connectivity)
        face = segmentation.largest_component(components)
        center = segmentation.centroid(face)
        ellipse = segmentation.derive_ellipse(face, center)
        crop = segmentation.crop_face(gray, ellipse)
    except ThermofaceError as exc:
        raise StageError("segmentation", exc, path) from exc

    pixels = crop.pixels
    if config.crop_size is not None:
        pixels = imaging.resample_nearest(pixels, config.crop_size, config.crop_size)

    if config.debug_dir is not None:
        stem = _debug_stem(path)
        _dump_gray(config.debug_dir, f"{stem}_gray.pgm", gray)
        _dump_gray(config.debug_dir, f"{stem}_binary.pgm", binary.astype(np.uint8) * 255)
        _dump_gray(config.debug_dir, f"{stem}_face.pgm", face.astype(np.uint8) * 255)
        _dump_gray(config.debug_dir, f"{stem}_crop.pgm", pixels)
    return Preprocessed(gray=gray, binary=binary, face_mask=face, center=center,
                        ellipse=ellipse, crop=crop, pixels=pixels)


def series_from_crop(pixels: np.ndarray, level, config: Config,
                     path=None) -> FeatureSeries:
    """Reduce crop pixels to the requested level and flatten to a series."""
    tag = canonical_level(level)
    depth = level_depth(tag)
    if depth == 0:
        band = pixels
    else:
        try:
            pyramid = wavelet.decompose_to_level(pixels, depth)
        except ThermofaceError as exc:
            raise StageError("wavelet", exc, path) from exc
        band = pyramid.ll(depth)
        if config.debug_dir is not None:
            _dump_gray(config.debug_dir,
                       f"{_debug_stem(path)}_{tag}.pgm", wavelet.band_to_gray(band))
    return vectorize(band, tag, quantize=config.quantize)


def run_pipeline(image_path, level, config: Config) -> FeatureSeries:
    """Image file to feature series: the whole preprocessing chain."""
    gray = load_gray(image_path)
    pre = preprocess_face(gray, config, path=image_path)
    return series_from_crop(pre.pixels, level, config, path=image_path)


@dataclass
class ReportRow:
    dataset: str
    level: str
    classifier: str
    correct: int
    total: int
    rate_percent: float
    mean_match_ms: float


@dataclass
class EvalReport:
    dataset: str
    rows: list = field(default_factory=list)


def evaluate(manifest: DatasetManifest, config: Config,
             classifiers=CLASSIFIERS, levels=LEVELS) -> EvalReport:
    """Full protocol: split, enroll the train half, classify the test half.

    One row per level x classifier, in the given order. All series of one
    run must share a length; set crop_size if source crops vary.
    """
    for clf in classifiers:
        if clf not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {clf!r}, expected {CLASSIFIERS}")
    plan = split_odd_even(manifest)
    crops = []
    for e in manifest.entries:
        gray = load_gray(e.path)
        crops.append(preprocess_face(gray, config, path=e.path).pixels)

    report = EvalReport(dataset=manifest.name)
    for level in levels:
        tag = canonical_level(level)
        series = []
        for e, pixels in zip(manifest.entries, crops):
            s = series_from_crop(pixels, tag, config, path=e.path)
            s.subject_id = e.subject_id
            series.append(s)
        lengths = sorted({s.length for s in series})
        if len(lengths) > 1:
            raise InconsistentSeriesLength(
                f"{tag} series lengths vary ({lengths}); set a fixed crop_size")

        gallery = build_gallery([series[i] for i in plan.train_rows])
        total = len(plan.test_rows)
        for clf in classifiers:
            start = time.perf_counter()
            correct = 0
            for i in plan.test_rows:
                probe = series[i]
                if clf == "nearest":
                    result = nearest_series(probe, gallery)
                else:
                    z = probe_signature(probe, gallery)
                    result = mean_reference_classify(z, gallery,
                                                     probe_id=probe.subject_id)
                correct += int(result.predicted == manifest.entries[i].subject_id)
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            report.rows.append(ReportRow(
                dataset=manifest.name,
                level=tag,
                classifier=clf,
                correct=correct,
                total=total,
                rate_percent=100.0 * correct / total,
                mean_match_ms=elapsed_ms / total if total else 0.0,
            ))
    return report


_CSV_COLUMNS = ("dataset", "level", "classifier", "correct", "total", "rate_percent")


def emit_report(report: EvalReport, format: str = "table") -> str:
    """Render a report as an aligned table, CSV, or JSON.

    CSV carries only the deterministic columns (no timings), so repeated
    runs over the same inputs are byte-identical. JSON keeps every field
    and parse_report restores an equal report from it.
    """
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for r in report.rows:
            writer.writerow([r.dataset, r.level, r.classifier, r.correct,
                             r.total, f"{r.rate_percent:.2f}"])
        return buf.getvalue()
    if format == "json":
        payload = {"dataset": report.dataset, "rows": [asdict(r) for r in report.rows]}
        return json.dumps(payload, indent=2) + "\n"
    if format == "table":
        header = (f"{'Level':<10} {'Classifier':<16} "
                  f"{'Correct/Total':>14} {'Rate (%)':>9}")
        lines = [f"Recognition rates: {report.dataset}", "", header, "-" * len(header)]
        for r in report.rows:
            lines.append(f"{r.level:<10} {r.classifier:<16} "
                         f"{f'{r.correct}/{r.total}':>14} {r.rate_percent:>9.2f}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def parse_report(text: str) -> EvalReport:
    """Rebuild an EvalReport from emit_report's JSON output."""
    try:
        payload = json.loads(text)
        return EvalReport(dataset=payload["dataset"],
                          rows=[ReportRow(**r) for r in payload["rows"]])
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedFile(f"not a report JSON document: {exc}") from exc


def atomic_write_bytes(path, data: bytes):
    """Write via a temp file in the same directory, then rename over."""
    p = Path(path)
    tmp = p.with_name(f"{p.name}.{os.getpid()}.tmp")
    tmp.write_bytes(data)
    tmp.replace(p)


def atomic_write_text(path, text: str):
    atomic_write_bytes(path, text.encode("utf-8"))


def _format_series_value(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def save_gallery(path, gallery):
    """One CSV line per enrolled series: subject_id,level,length,v1,...,vN."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for s in gallery.series:
        writer.writerow([s.subject_id, s.source, s.length]
                        + [_format_series_value(v) for v in s.values.tolist()])
    atomic_write_text(path, buf.getvalue())


def load_gallery(path):
    """Read a gallery file back into an enrolled GalleryModel."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedFile(f"cannot read gallery {p}: {exc}") from exc
    series = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row:
            continue
        if len(row) < 4:
            raise MalformedFile(f"{p}:{lineno}: expected subject_id,level,length,values")
        sid = row[0]
        try:
            level = canonical_level(row[1])
        except ValueError as exc:
            raise MalformedFile(f"{p}:{lineno}: {exc}") from exc
        try:
            length = int(row[2])
        except ValueError as exc:
            raise MalformedFile(f"{p}:{lineno}: bad length field {row[2]!r}") from exc
        raw = row[3:]
        if len(raw) != length:
            raise MalformedFile(
                f"{p}:{lineno}: declares {length} values, found {len(raw)}")
        try:
            try:
                values = np.array([int(v) for v in raw], dtype=np.int64)
            except ValueError:
                values = np.array([float(v) for v in raw], dtype=np.float64)
        except ValueError as exc:
            raise MalformedFile(f"{p}:{lineno}: non-numeric value") from exc
        series.append(FeatureSeries(values=values, source=level, subject_id=sid))
    if not series:
        raise EmptyGallery(f"{p}: gallery file holds no series")
    return build_gallery(series)
