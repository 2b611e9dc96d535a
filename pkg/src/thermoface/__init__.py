"""Thermal-face identification: elliptical crop, Haar reduction, L1 matching.

The pipeline turns a face image into a short intensity series and
identifies it against an enrolled gallery:

    decode -> grayscale -> binarize at the mean -> largest component
    -> centroid -> elliptical crop -> Haar reduction -> 1D series
    -> L1 nearest match

evaluation adds dataset manifests, the odd/even train/test split, and
recognition-rate reports; cli wraps it all for batch use.
"""

from .classify import (
    GalleryModel,
    MatchResult,
    build_gallery,
    build_mean_reference,
    mean_reference_classify,
    nearest_series,
    probe_signature,
    sim,
)
from .config import Config, load_config_file, make_config
from .errors import ThermofaceError
from .evaluation import (
    DatasetManifest,
    EvalReport,
    ReportRow,
    SplitPlan,
    emit_report,
    evaluate,
    load_gallery,
    load_manifest,
    parse_report,
    preprocess_face,
    run_pipeline,
    save_gallery,
    split_odd_even,
)
from .features import LEVELS, FeatureSeries, canonical_level, vectorize
from .imaging import binarize, decode_image, mean_intensity, to_grayscale
from .segmentation import (
    Centroid,
    EllipseSpec,
    FaceCrop,
    centroid,
    crop_face,
    derive_ellipse,
    label_components,
    largest_component,
    rasterize_ellipse,
)
from .wavelet import (
    Pyramid,
    QuadSubbands,
    decompose_to_level,
    haar_full_1d,
    haar_step_1d,
    quad_decompose,
    reconstruct,
)

__version__ = "0.1.0"

__all__ = [
    "Centroid",
    "Config",
    "DatasetManifest",
    "EllipseSpec",
    "EvalReport",
    "FaceCrop",
    "FeatureSeries",
    "GalleryModel",
    "LEVELS",
    "MatchResult",
    "Pyramid",
    "QuadSubbands",
    "ReportRow",
    "SplitPlan",
    "ThermofaceError",
    "binarize",
    "build_gallery",
    "build_mean_reference",
    "canonical_level",
    "centroid",
    "crop_face",
    "decode_image",
    "decompose_to_level",
    "derive_ellipse",
    "emit_report",
    "evaluate",
    "haar_full_1d",
    "haar_step_1d",
    "label_components",
    "largest_component",
    "load_config_file",
    "load_gallery",
    "load_manifest",
    "make_config",
    "mean_intensity",
    "mean_reference_classify",
    "nearest_series",
    "parse_report",
    "preprocess_face",
    "probe_signature",
    "quad_decompose",
    "rasterize_ellipse",
    "reconstruct",
    "run_pipeline",
    "save_gallery",
    "sim",
    "split_odd_even",
    "to_grayscale",
    "vectorize",
]
