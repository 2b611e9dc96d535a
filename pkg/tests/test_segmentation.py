"""Component labeling, centroid, ellipse fitting and cropping."""

from fractions import Fraction

import numpy as np
import pytest

from oracles import centroid_double_sum, flood_fill_labels, midpoint_circle, partition_of
from thermoface.errors import NoForeground, OutOfBounds
from thermoface.segmentation import (
    Centroid,
    EllipseSpec,
    centroid,
    crop_face,
    derive_ellipse,
    label_components,
    largest_component,
    rasterize_ellipse,
    round_half_up,
)


class TestLabelComponents:
    def test_matches_flood_fill_partitions(self):
        rng = np.random.default_rng(41)
        for _ in range(60):
            density = rng.uniform(0.2, 0.8)
            mask = rng.random((20, 20)) < density
            for conn in (4, 8):
                cm = label_components(mask, conn)
                want_labels, want_k = flood_fill_labels(mask, conn)
                assert cm.num_components == want_k
                assert partition_of(cm.labels) == partition_of(want_labels)

    def test_first_encounter_numbering_matches_row_major_scan(self):
        # both sides number components by first pixel met scanning rows,
        # so labels agree exactly, not just up to renaming
        rng = np.random.default_rng(42)
        for _ in range(20):
            mask = rng.random((16, 16)) < 0.5
            for conn in (4, 8):
                cm = label_components(mask, conn)
                want, _ = flood_fill_labels(mask, conn)
                assert cm.labels.tolist() == want

    def test_diagonal_pixels_merge_only_under_8(self):
        mask = np.eye(5, dtype=bool)
        assert label_components(mask, 8).num_components == 1
        assert label_components(mask, 4).num_components == 5

    def test_empty_mask(self):
        cm = label_components(np.zeros((4, 4), dtype=bool))
        assert cm.num_components == 0
        assert cm.component_sizes == {}

    def test_sizes_sum_to_foreground(self):
        rng = np.random.default_rng(43)
        mask = rng.random((25, 30)) < 0.4
        cm = label_components(mask)
        assert sum(cm.component_sizes.values()) == int(mask.sum())

    def test_bad_connectivity(self):
        with pytest.raises(ValueError):
            label_components(np.ones((2, 2), dtype=bool), 6)


class TestLargestComponent:
    def test_picks_biggest(self):
        mask = np.zeros((8, 8), dtype=bool)
        mask[0, 0] = True
        mask[4:7, 4:7] = True
        face = largest_component(label_components(mask))
        assert int(face.sum()) == 9
        assert face[5, 5] and not face[0, 0]

    def test_tie_goes_to_smallest_label(self):
        mask = np.zeros((5, 9), dtype=bool)
        mask[0, 0:2] = True   # component 1, size 2
        mask[4, 7:9] = True   # component 2, size 2
        face = largest_component(label_components(mask))
        assert face[0, 0] and not face[4, 7]

    def test_no_components(self):
        with pytest.raises(NoForeground):
            largest_component(label_components(np.zeros((3, 3), dtype=bool)))


class TestCentroid:
    def test_matches_double_sum_oracle(self):
        rng = np.random.default_rng(44)
        for _ in range(40):
            mask = rng.random((15, 18)) < 0.5
            if not mask.any():
                continue
            c = centroid(mask)
            ox, oy = centroid_double_sum(mask)
            assert (c.x, c.y) == (ox, oy)

    def test_exact_rational(self):
        mask = np.zeros((4, 4), dtype=bool)
        mask[0, 0] = mask[0, 1] = mask[1, 0] = True
        c = centroid(mask)
        assert c.x == Fraction(1, 3) and c.y == Fraction(1, 3)

    def test_empty(self):
        with pytest.raises(NoForeground):
            centroid(np.zeros((2, 2), dtype=bool))


class TestRoundHalfUp:
    def test_ties_go_up(self):
        assert round_half_up(Fraction(1, 2)) == 1
        assert round_half_up(Fraction(5, 2)) == 3
        assert round_half_up(Fraction(-1, 2)) == 0

    def test_plain_values(self):
        assert round_half_up(2.25) == 2
        assert round_half_up(3) == 3


class TestDeriveEllipse:
    def test_filled_square_centered(self):
        mask = np.zeros((21, 21), dtype=bool)
        mask[5:16, 5:16] = True  # 11x11 block, centroid at (10, 10)
        spec = derive_ellipse(mask, centroid(mask))
        assert (spec.cx, spec.cy) == (10, 10)
        assert spec.semi_minor == 5 and spec.semi_major == 5

    def test_single_pixel_floors_to_one(self):
        mask = np.zeros((9, 9), dtype=bool)
        mask[4, 4] = True
        spec = derive_ellipse(mask, centroid(mask))
        assert spec.semi_major == 1 and spec.semi_minor == 1

    def test_axes_clamped_to_image(self):
        mask = np.ones((7, 31), dtype=bool)
        spec = derive_ellipse(mask, centroid(mask))
        # full-width reach is 15 but the vertical reach caps at cy
        assert spec.semi_minor == 15
        assert spec.semi_major == 3

    def test_vertical_reach_is_upward(self):
        mask = np.zeros((20, 9), dtype=bool)
        mask[6:17, 2:7] = True  # centroid row 11, top row 6
        spec = derive_ellipse(mask, centroid(mask))
        assert spec.semi_major == 5

    def test_empty_rejected(self):
        with pytest.raises(NoForeground):
            derive_ellipse(np.zeros((4, 4), dtype=bool), Centroid(Fraction(1), Fraction(1)))


class TestRasterizeEllipse:
    def test_equal_axes_match_midpoint_circle(self):
        for r in range(1, 33):
            spec = EllipseSpec(cx=40, cy=40, semi_major=r, semi_minor=r)
            assert rasterize_ellipse(spec) == midpoint_circle(40, 40, r)

    def test_four_way_symmetry(self):
        rng = np.random.default_rng(45)
        for _ in range(30):
            a, b = (int(v) for v in rng.integers(1, 30, size=2))
            pts = rasterize_ellipse(EllipseSpec(cx=0, cy=0, semi_major=b, semi_minor=a))
            for x, y in pts:
                assert (-x, y) in pts and (x, -y) in pts and (-x, -y) in pts

    def test_extreme_points_present(self):
        spec = EllipseSpec(cx=10, cy=20, semi_major=7, semi_minor=3)
        pts = rasterize_ellipse(spec)
        assert (13, 20) in pts and (7, 20) in pts
        assert (10, 27) in pts and (10, 13) in pts

    def test_points_hug_the_implicit_curve(self):
        """Every plotted point sees a sign change of the implicit form
        toward one axis neighbor, i.e. the true curve passes within one
        pixel of it."""
        rng = np.random.default_rng(46)
        for _ in range(25):
            a, b = (int(v) for v in rng.integers(1, 40, size=2))
            pts = rasterize_ellipse(EllipseSpec(cx=0, cy=0, semi_major=b, semi_minor=a))
            for x, y in pts:
                f0 = b * b * x * x + a * a * y * y - a * a * b * b
                if f0 == 0:
                    continue
                crossings = [
                    f0 * (b * b * (x + dx) ** 2 + a * a * (y + dy) ** 2
                          - a * a * b * b) <= 0
                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))]
                assert any(crossings)

    def test_degenerate_axes_rejected(self):
        with pytest.raises(ValueError):
            EllipseSpec(cx=5, cy=5, semi_major=0, semi_minor=3)


class TestCropFace:
    def test_bbox_padded_to_multiple_of_four(self):
        gray = np.full((40, 40), 200, dtype=np.uint8)
        crop = crop_face(gray, EllipseSpec(cx=20, cy=20, semi_major=10, semi_minor=7))
        # bbox is 15 wide, 21 tall before padding
        assert crop.width == 16 and crop.height == 24
        assert crop.pixels.shape == crop.mask.shape

    def test_outside_ellipse_zeroed_inside_kept(self):
        gray = np.full((30, 30), 77, dtype=np.uint8)
        rx, ry = 5, 8
        crop = crop_face(gray, EllipseSpec(cx=15, cy=15, semi_major=ry, semi_minor=rx))
        for y in range(crop.height):
            for x in range(crop.width):
                inside = (ry * ry * (x - rx) ** 2 + rx * rx * (y - ry) ** 2
                          <= rx * rx * ry * ry)
                assert crop.mask[y, x] == inside
                assert crop.pixels[y, x] == (77 if inside else 0)

    def test_corners_are_zero(self):
        gray = np.full((20, 20), 255, dtype=np.uint8)
        crop = crop_face(gray, EllipseSpec(cx=10, cy=10, semi_major=6, semi_minor=6))
        assert crop.pixels[0, 0] == 0 and crop.pixels[0, crop.width - 1] == 0

    def test_out_of_bounds_rejected(self):
        gray = np.zeros((12, 12), dtype=np.uint8)
        with pytest.raises(OutOfBounds):
            crop_face(gray, EllipseSpec(cx=2, cy=6, semi_major=3, semi_minor=3))
