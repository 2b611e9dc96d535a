#!/usr/bin/env python3
"""The full recognition experiment on a generated dataset.

Generates subjects with distinct textures, splits each subject's images
alternately into train and test halves, enrolls the train half at three
feature levels, and reports rank-1 recognition per level x classifier.
"""

import tempfile
from pathlib import Path

from thermoface import synthetic
from thermoface.config import Config
from thermoface.evaluation import (
    emit_report,
    evaluate,
    load_manifest,
    parse_report,
    split_odd_even,
)


def main():
    root = Path(tempfile.mkdtemp(prefix="evaluation_protocol_"))
    manifest_path = synthetic.generate_dataset(
        root, subjects=5, images_per_subject=4, seed=11)
    manifest = load_manifest(manifest_path)
    print(f"dataset: {len(manifest.entries)} images, manifest {manifest_path}")

    plan = split_odd_even(manifest)
    train_names = [manifest.entries[i].path.name for i in plan.train_rows[:4]]
    test_names = [manifest.entries[i].path.name for i in plan.test_rows[:4]]
    print(f"split: {len(plan.train_rows)} train / {len(plan.test_rows)} test")
    print(f"  first train files: {train_names}")
    print(f"  first test files:  {test_names}")

    config = Config()
    report = evaluate(manifest, config)
    print()
    print(emit_report(report, "table"))

    csv_text = emit_report(report, "csv")
    (root / "report.csv").write_text(csv_text)
    print(f"CSV written to {root / 'report.csv'}:")
    print(csv_text)

    rerun = evaluate(manifest, config)
    print(f"re-run emits identical CSV: {emit_report(rerun, 'csv') == csv_text}")

    json_text = emit_report(report, "json")
    print(f"JSON round-trips to an equal report: "
          f"{parse_report(json_text) == report}")

    slowest = max(report.rows, key=lambda r: r.mean_match_ms)
    print(f"slowest cell: {slowest.level} x {slowest.classifier}, "
          f"{slowest.mean_match_ms:.2f} ms per probe")


if __name__ == "__main__":
    main()
