#!/usr/bin/env python3
"""Walk one image through every preprocessing stage, printing the numbers.

Builds a synthetic face-like blob, then: grayscale -> mean threshold ->
connected components -> largest component -> centroid -> fitted ellipse
-> elliptical crop. Each stage is written out as a PGM.
"""

import tempfile
from pathlib import Path

import numpy as np

from thermoface import imaging, pnm, segmentation, synthetic


def main():
    out = Path(tempfile.mkdtemp(prefix="preprocess_stages_"))
    rng = np.random.default_rng(42)

    # a textured ellipse on a dark background, like a warm face on cold air
    height, width = 120, 160
    texture = synthetic.block_texture(rng, height, width)
    face = synthetic.ellipse_interior(height, width, cx=80, cy=60, rx=44, ry=50)
    img = np.where(face, texture, 0).astype(np.uint8)
    pnm_path = out / "input.pgm"
    pnm_path.write_bytes(pnm.encode_pgm(img))
    print(f"input image: {width}x{height}, written to {pnm_path}")

    gray = imaging.ensure_grayscale(imaging.decode_image(pnm_path.read_bytes()))
    mean = imaging.mean_intensity(gray)
    print(f"mean intensity: {mean} ~= {float(mean):.2f}")

    binary = imaging.binarize(gray)
    print(f"foreground pixels (strictly above mean): {int(binary.sum())}")
    (out / "binary.pgm").write_bytes(pnm.encode_pgm(binary.astype(np.uint8) * 255))

    components = segmentation.label_components(binary, connectivity=8)
    print(f"connected components: {components.num_components}, "
          f"sizes {sorted(components.component_sizes.values(), reverse=True)[:5]}")

    mask = segmentation.largest_component(components)
    center = segmentation.centroid(mask)
    print(f"largest component: {int(mask.sum())} px, "
          f"centroid ({float(center.x):.3f}, {float(center.y):.3f}) "
          f"= ({center.x}, {center.y}) exactly")

    ellipse = segmentation.derive_ellipse(mask, center)
    print(f"fitted ellipse: center ({ellipse.cx}, {ellipse.cy}), "
          f"semi_major {ellipse.semi_major} (vertical), "
          f"semi_minor {ellipse.semi_minor} (horizontal)")

    boundary = segmentation.rasterize_ellipse(ellipse)
    outline = gray.copy()
    for x, y in boundary:
        outline[y, x] = 255
    (out / "outline.pgm").write_bytes(pnm.encode_pgm(outline))
    print(f"boundary raster: {len(boundary)} points, overlay in outline.pgm")

    crop = segmentation.crop_face(gray, ellipse)
    print(f"elliptical crop: {crop.width}x{crop.height} "
          f"(padded to multiples of 4), "
          f"{int(crop.mask.sum())} interior px kept, rest zeroed")
    (out / "crop.pgm").write_bytes(pnm.encode_pgm(crop.pixels))

    small = imaging.resample_nearest(crop.pixels, 128, 128)
    (out / "crop_128.pgm").write_bytes(pnm.encode_pgm(small))
    print(f"resampled crop: 128x128, written to crop_128.pgm")
    print(f"all stages in {out}")


if __name__ == "__main__":
    main()
