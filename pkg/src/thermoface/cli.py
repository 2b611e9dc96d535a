"""Command-line front end.

Subcommands: preprocess (dump pipeline stages for one image), extract
(print one image's series), enroll (build a gallery from a manifest's
train split), identify (match a probe against a gallery), evaluate (the
full protocol), synth (generate a synthetic dataset).

Exit codes: 0 on success, 1 on any failure; diagnostics go to stderr.
"""

import argparse
import csv
import io
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import pnm, synthetic
from .classify import (
    build_gallery,
    mean_reference_classify,
    nearest_series,
    probe_signature,
)
from .config import make_config
from .errors import LengthMismatch, ThermofaceError
from .evaluation import (
    CLASSIFIERS,
    atomic_write_bytes,
    atomic_write_text,
    emit_report,
    evaluate,
    load_gallery,
    load_gray,
    load_manifest,
    preprocess_face,
    run_pipeline,
    save_gallery,
    split_odd_even,
)

_CLASSIFIER_FLAG = {"nearest": "nearest", "mean": "mean_reference"}


def _add_common_flags(p, classifier=False, report=False):
    p.add_argument("--config", metavar="PATH", help="key=value settings file")
    p.add_argument("--connectivity", type=int, choices=(4, 8),
                   help="component adjacency rule")
    p.add_argument("--crop-size", metavar="N",
                   help="square crop edge (multiple of 4), or 'native'")
    p.add_argument("--level", choices=("original", "ll1", "ll2"),
                   help="feature level")
    p.add_argument("--no-quantize", action="store_true",
                   help="keep real-valued series instead of 8-bit integers")
    p.add_argument("--debug-dir", metavar="PATH",
                   help="dump per-stage PGMs here")
    if classifier:
        p.add_argument("--classifier", choices=sorted(_CLASSIFIER_FLAG),
                       help="matching rule")
    if report:
        p.add_argument("--report", choices=("table", "csv", "json"),
                       default="table", help="stdout report format")


def _config_from_args(args):
    classifier = getattr(args, "classifier", None)
    return make_config(
        config_file=args.config,
        connectivity=args.connectivity,
        crop_size=args.crop_size,
        level=args.level,
        classifier=_CLASSIFIER_FLAG[classifier] if classifier else None,
        quantize=False if args.no_quantize else None,
        debug_dir=args.debug_dir,
    )


def _fmt_score(score) -> str:
    if isinstance(score, int):
        return str(score)
    return f"{float(score):.2f}"


def cmd_preprocess(args) -> int:
    cfg = _config_from_args(args)
    gray = load_gray(args.image)
    pre = preprocess_face(gray, cfg, path=args.image)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(args.image).stem
    atomic_write_bytes(out / f"{stem}_gray.pgm", pnm.encode_pgm(pre.gray))
    atomic_write_bytes(out / f"{stem}_binary.pgm",
                       pnm.encode_pgm(pre.binary.astype(np.uint8) * 255))
    atomic_write_bytes(out / f"{stem}_face.pgm",
                       pnm.encode_pgm(pre.face_mask.astype(np.uint8) * 255))
    atomic_write_bytes(out / f"{stem}_crop.pgm", pnm.encode_pgm(pre.pixels))
    e = pre.ellipse
    print(f"centroid: ({float(pre.center.x):.2f}, {float(pre.center.y):.2f})")
    print(f"ellipse: center=({e.cx},{e.cy}) "
          f"semi_major={e.semi_major} semi_minor={e.semi_minor}")
    print(f"crop: {pre.pixels.shape[1]}x{pre.pixels.shape[0]} -> {out}")
    return 0


def cmd_extract(args) -> int:
    cfg = _config_from_args(args)
    series = run_pipeline(args.image, cfg.level, cfg)
    series.subject_id = Path(args.image).stem
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(
        [series.subject_id, series.source, series.length]
        + [str(v) if isinstance(v, int) else repr(v) for v in series.values.tolist()])
    if args.output:
        atomic_write_text(args.output, buf.getvalue())
        print(f"wrote {series.length}-value {series.source} series to {args.output}")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_enroll(args) -> int:
    cfg = _config_from_args(args)
    manifest = load_manifest(args.manifest)
    plan = split_odd_even(manifest)
    train = []
    for i in plan.train_rows:
        entry = manifest.entries[i]
        s = run_pipeline(entry.path, cfg.level, cfg)
        s.subject_id = entry.subject_id
        train.append(s)
    save_gallery(args.gallery, build_gallery(train))
    print(f"enrolled {len(train)} series (train split)")
    return 0


def cmd_identify(args) -> int:
    gallery = load_gallery(args.gallery)
    cfg = _config_from_args(args)
    if args.level is None:
        cfg = replace(cfg, level=gallery.level)
    elif cfg.level != gallery.level:
        raise LengthMismatch(
            f"probe level {cfg.level} does not match gallery level {gallery.level}")
    probe = run_pipeline(args.image, cfg.level, cfg)
    probe.subject_id = str(args.image)
    if cfg.classifier == "nearest":
        result = nearest_series(probe, gallery)
    else:
        z = probe_signature(probe, gallery)
        result = mean_reference_classify(z, gallery, probe_id=str(args.image))
    for rank, (sid, score) in enumerate(result.ranked[:5], start=1):
        print(f"{rank}. {sid}  score={_fmt_score(score)}")
    print(f"predicted: {result.predicted}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = _config_from_args(args)
    manifest = load_manifest(args.manifest)
    if getattr(args, "classifier", None):
        classifiers = (_CLASSIFIER_FLAG[args.classifier],)
    else:
        classifiers = CLASSIFIERS
    report = evaluate(manifest, cfg, classifiers=classifiers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write_text(out / "report.csv", emit_report(report, "csv"))
    atomic_write_text(out / "report.txt", emit_report(report, "table"))
    sys.stdout.write(emit_report(report, args.report))
    return 0


def cmd_synth(args) -> int:
    manifest = synthetic.generate_dataset(
        args.out_dir, subjects=args.subjects,
        images_per_subject=args.images, seed=args.seed, noise=args.noise)
    print(f"wrote {args.subjects * args.images} images, manifest: {manifest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoface",
        description="Thermal-face identification pipeline and evaluation harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="dump gray/binary/face/crop stages")
    p.add_argument("image")
    p.add_argument("out_dir")
    _add_common_flags(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("extract", help="print one image's feature series")
    p.add_argument("image")
    p.add_argument("--output", metavar="PATH", help="write instead of printing")
    _add_common_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("enroll", help="build a gallery from the train split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--gallery", required=True, metavar="PATH",
                   help="gallery file to write")
    _add_common_flags(p)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("identify", help="match a probe image against a gallery")
    p.add_argument("image")
    p.add_argument("--gallery", required=True, metavar="PATH")
    _add_common_flags(p, classifier=True)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", help="run the full recognition protocol")
    p.add_argument("out_dir", help="directory for report.csv and report.txt")
    p.add_argument("--manifest", required=True)
    _add_common_flags(p, classifier=True, report=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic seeded dataset")
    p.add_argument("out_dir")
    p.add_argument("--subjects", type=int, default=10)
    p.add_argument("--images", type=int, default=4, help="images per subject")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=int, default=2,
                   help="per-pixel jitter inside the face")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return args.func(args)
    except ThermofaceError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"config: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
