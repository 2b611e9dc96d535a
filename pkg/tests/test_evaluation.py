"""Manifests, the odd/even split, the pipeline, reports, galleries."""

import numpy as np
import pytest

from thermoface import pnm, synthetic
from thermoface.classify import build_gallery, nearest_series
from thermoface.config import Config
from thermoface.errors import (
    EmptyGallery,
    InconsistentSeriesLength,
    MalformedFile,
    MalformedManifest,
    MissingImage,
    NoForeground,
    StageError,
    SubjectTooSmall,
)
from thermoface.evaluation import (
    DatasetManifest,
    ManifestEntry,
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


@pytest.fixture(scope="module")
def synth_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("synthdata")
    manifest_path = synthetic.generate_dataset(
        root, subjects=3, images_per_subject=4, seed=7)
    return manifest_path


def write_manifest(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def face_pgm(path, rx=20, ry=25, width=80, height=60, value=200):
    interior = synthetic.ellipse_interior(
        height, width, width // 2, height // 2, rx, ry)
    img = np.where(interior, value, 0).astype(np.uint8)
    path.write_bytes(pnm.encode_pgm(img))
    return path


class TestLoadManifest:
    def test_relative_paths_resolve_against_manifest(self, tmp_path):
        (tmp_path / "imgs").mkdir()
        m = load_manifest(write_manifest(
            tmp_path / "data.csv",
            ["path,subject_id", "imgs/a.pgm,s1", "imgs/b.pgm,s1"]))
        assert m.entries[0].path == tmp_path / "imgs" / "a.pgm"
        assert m.name == "data"

    def test_order_preserved(self, tmp_path):
        m = load_manifest(write_manifest(
            tmp_path / "m.csv",
            ["path,subject_id", "c.pgm,z", "a.pgm,z", "b.pgm,z"]))
        assert [e.path.name for e in m.entries] == ["c.pgm", "a.pgm", "b.pgm"]

    def test_crlf_accepted(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_bytes(b"path,subject_id\r\na.pgm,s\r\nb.pgm,s\r\n")
        assert len(load_manifest(p).entries) == 2

    def test_bad_header(self, tmp_path):
        with pytest.raises(MalformedManifest):
            load_manifest(write_manifest(
                tmp_path / "m.csv", ["file,subject", "a.pgm,s", "b.pgm,s"]))

    def test_duplicate_path(self, tmp_path):
        with pytest.raises(MalformedManifest):
            load_manifest(write_manifest(
                tmp_path / "m.csv", ["path,subject_id", "a.pgm,s", "a.pgm,s"]))

    def test_single_image_subject(self, tmp_path):
        with pytest.raises(SubjectTooSmall):
            load_manifest(write_manifest(
                tmp_path / "m.csv",
                ["path,subject_id", "a.pgm,s", "b.pgm,s", "c.pgm,lonely"]))

    def test_empty_file(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("")
        with pytest.raises(MalformedManifest):
            load_manifest(p)

    def test_header_only(self, tmp_path):
        with pytest.raises(MalformedManifest):
            load_manifest(write_manifest(tmp_path / "m.csv", ["path,subject_id"]))

    def test_missing_field(self, tmp_path):
        with pytest.raises(MalformedManifest):
            load_manifest(write_manifest(
                tmp_path / "m.csv", ["path,subject_id", "a.pgm"]))

    def test_missing_manifest_file(self, tmp_path):
        with pytest.raises(MalformedManifest):
            load_manifest(tmp_path / "nope.csv")

    def test_binary_junk_rejected(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_bytes(b"P5\n2 2\n255\n\x00\x95\xff\x80")
        with pytest.raises(MalformedManifest):
            load_manifest(p)


class TestSplitOddEven:
    def entries(self, pairs):
        return DatasetManifest(
            entries=[ManifestEntry(path=f"{i}.pgm", subject_id=s)
                     for i, s in enumerate(pairs)])

    def test_four_images_split_two_two(self):
        plan = split_odd_even(self.entries(["s", "s", "s", "s"]))
        assert plan.train_rows == [0, 2]
        assert plan.test_rows == [1, 3]

    def test_three_images_favor_train(self):
        plan = split_odd_even(self.entries(["s", "s", "s"]))
        assert plan.train_rows == [0, 2]
        assert plan.test_rows == [1]

    def test_per_subject_alternation_with_interleaving(self):
        plan = split_odd_even(self.entries(["a", "b", "a", "b"]))
        assert plan.train_rows == [0, 1]
        assert plan.test_rows == [2, 3]

    def test_two_hundred_entries(self):
        names = [s for s in "abcdefghijklmnopqrst" for _ in range(10)]
        plan = split_odd_even(self.entries(names))
        assert len(plan.train_rows) == 100
        assert len(plan.test_rows) == 100
        assert sorted(plan.train_rows + plan.test_rows) == list(range(200))


class TestRunPipeline:
    def test_series_length_per_level_native_geometry(self, tmp_path):
        img = face_pgm(tmp_path / "face.pgm")  # bbox 41x51, padded 44x52
        cfg = Config(crop_size=None)
        assert run_pipeline(img, "original", cfg).length == 44 * 52
        assert run_pipeline(img, "ll1", cfg).length == 44 * 52 // 4
        assert run_pipeline(img, "ll2", cfg).length == 44 * 52 // 16

    def test_resampled_geometry(self, tmp_path):
        img = face_pgm(tmp_path / "face.pgm")
        s = run_pipeline(img, "LL2", Config(crop_size=64))
        assert s.length == (64 // 4) ** 2

    def test_all_black_fails_in_segmentation(self, tmp_path):
        p = tmp_path / "black.pgm"
        p.write_bytes(pnm.encode_pgm(np.zeros((32, 32), dtype=np.uint8)))
        with pytest.raises(StageError) as err:
            run_pipeline(p, "original", Config())
        assert err.value.stage == "segmentation"
        assert isinstance(err.value.cause, NoForeground)
        assert str(err.value).startswith("segmentation: NoForeground")

    def test_missing_file_tagged_imaging(self, tmp_path):
        with pytest.raises(StageError) as err:
            run_pipeline(tmp_path / "absent.pgm", "original", Config())
        assert err.value.stage == "imaging"
        assert isinstance(err.value.cause, MissingImage)

    def test_deterministic(self, tmp_path):
        img = face_pgm(tmp_path / "face.pgm")
        a = run_pipeline(img, "ll2", Config())
        b = run_pipeline(img, "ll2", Config())
        assert np.array_equal(a.values, b.values)

    def test_debug_dir_writes_stages(self, tmp_path):
        img = face_pgm(tmp_path / "face.pgm")
        dbg = tmp_path / "dbg"
        run_pipeline(img, "ll1", Config(debug_dir=str(dbg)))
        names = {p.name for p in dbg.iterdir()}
        assert {"face_gray.pgm", "face_binary.pgm", "face_face.pgm",
                "face_crop.pgm", "face_LL1.pgm"} <= names


class TestEvaluate:
    def test_perfect_rates_on_separated_subjects(self, synth_dataset):
        report = evaluate(load_manifest(synth_dataset), Config(),
                          classifiers=("nearest",))
        assert [r.level for r in report.rows] == ["original", "LL1", "LL2"]
        for row in report.rows:
            assert row.rate_percent == 100.0
            assert row.correct == row.total == 6

    def test_train_equals_test_is_perfect(self, synth_dataset):
        cfg = Config()
        manifest = load_manifest(synth_dataset)
        series = []
        for e in manifest.entries:
            s = run_pipeline(e.path, "ll2", cfg)
            s.subject_id = e.subject_id
            series.append(s)
        gallery = build_gallery(series)
        assert all(nearest_series(s, gallery).predicted == s.subject_id
                   for s in series)

    def test_csv_report_byte_identical_across_runs(self, synth_dataset):
        manifest = load_manifest(synth_dataset)
        a = emit_report(evaluate(manifest, Config()), "csv")
        b = emit_report(evaluate(manifest, Config()), "csv")
        assert a == b

    def test_native_crops_of_unequal_geometry_rejected(self, tmp_path):
        face_pgm(tmp_path / "a.pgm", rx=12, ry=12, width=64, height=64)
        face_pgm(tmp_path / "b.pgm", rx=16, ry=16, width=64, height=64)
        manifest = load_manifest(write_manifest(
            tmp_path / "m.csv", ["path,subject_id", "a.pgm,s", "b.pgm,s"]))
        with pytest.raises(InconsistentSeriesLength):
            evaluate(manifest, Config(crop_size=None))

    def test_unknown_classifier_rejected(self, synth_dataset):
        with pytest.raises(ValueError):
            evaluate(load_manifest(synth_dataset), Config(), classifiers=("knn",))


class TestReports:
    def small_report(self, synth_dataset):
        return evaluate(load_manifest(synth_dataset), Config(),
                        classifiers=("nearest",), levels=("ll2",))

    def test_csv_columns(self, synth_dataset):
        text = emit_report(self.small_report(synth_dataset), "csv")
        lines = text.splitlines()
        assert lines[0] == "dataset,level,classifier,correct,total,rate_percent"
        assert lines[1] == "manifest,LL2,nearest,6,6,100.00"

    def test_json_round_trip(self, synth_dataset):
        report = self.small_report(synth_dataset)
        assert parse_report(emit_report(report, "json")) == report

    def test_table_shape(self, synth_dataset):
        report = evaluate(load_manifest(synth_dataset), Config(),
                          classifiers=("nearest",))
        text = emit_report(report, "table")
        lines = text.splitlines()
        assert lines[0].startswith("Recognition rates:")
        assert "Level" in lines[2] and "Rate (%)" in lines[2]
        assert [ln.split()[0] for ln in lines[4:]] == ["original", "LL1", "LL2"]

    def test_header_only_table_without_classifiers(self, synth_dataset):
        report = evaluate(load_manifest(synth_dataset), Config(), classifiers=())
        text = emit_report(report, "table")
        assert len(text.splitlines()) == 4  # title, blank, header, rule

    def test_unknown_format(self, synth_dataset):
        with pytest.raises(ValueError):
            emit_report(self.small_report(synth_dataset), "xml")

    def test_parse_report_rejects_garbage(self):
        with pytest.raises(MalformedFile):
            parse_report("not json at all")


class TestGalleryFile:
    def enrolled(self, synth_dataset, quantize=True):
        cfg = Config(quantize=quantize)
        manifest = load_manifest(synth_dataset)
        plan = split_odd_even(manifest)
        train = []
        for i in plan.train_rows:
            s = run_pipeline(manifest.entries[i].path, cfg.level, cfg)
            s.subject_id = manifest.entries[i].subject_id
            train.append(s)
        return build_gallery(train)

    def test_round_trip(self, synth_dataset, tmp_path):
        gallery = self.enrolled(synth_dataset)
        path = tmp_path / "gallery.csv"
        save_gallery(path, gallery)
        loaded = load_gallery(path)
        assert loaded.level == gallery.level
        assert loaded.series_length == gallery.series_length
        assert loaded.subject_ids == gallery.subject_ids
        for a, b in zip(loaded.series, gallery.series):
            assert np.array_equal(a.values, b.values)
        assert loaded.row_signatures == gallery.row_signatures

    def test_round_trip_unquantized(self, synth_dataset, tmp_path):
        gallery = self.enrolled(synth_dataset, quantize=False)
        path = tmp_path / "gallery.csv"
        save_gallery(path, gallery)
        loaded = load_gallery(path)
        for a, b in zip(loaded.series, gallery.series):
            assert np.array_equal(a.values, b.values)

    def test_line_format(self, synth_dataset, tmp_path):
        gallery = self.enrolled(synth_dataset)
        path = tmp_path / "gallery.csv"
        save_gallery(path, gallery)
        first = path.read_text().splitlines()[0].split(",")
        assert first[0] == "subject00"
        assert first[1] == "LL2"
        assert int(first[2]) == len(first) - 3

    def test_declared_length_must_match(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("s1,LL2,3,1,2\n")
        with pytest.raises(MalformedFile):
            load_gallery(p)

    def test_bad_level_tag(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("s1,LL9,2,1,2\n")
        with pytest.raises(MalformedFile):
            load_gallery(p)

    def test_empty_gallery_file(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("")
        with pytest.raises(EmptyGallery):
            load_gallery(p)

    def test_missing_gallery_file(self, tmp_path):
        with pytest.raises(MalformedFile):
            load_gallery(tmp_path / "nope.csv")
