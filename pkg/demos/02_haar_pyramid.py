#!/usr/bin/env python3
"""The averaging/differencing transform, from a 4-number series to a
two-level image pyramid.

Shows the worked 1D example, the four 2D subbands, the shrinking LL
chain, and the bit-exact round trip.
"""

import tempfile
from pathlib import Path

import numpy as np

from thermoface import pnm, synthetic, wavelet
from thermoface.config import Config
from thermoface.evaluation import preprocess_face


def main():
    out = Path(tempfile.mkdtemp(prefix="haar_pyramid_"))

    print("== 1D ==")
    series = [10, 4, 9, 5]
    avg, det = wavelet.haar_step_1d(series)
    print(f"series {series}")
    print(f"one pass: averages {avg.tolist()}, differences {det.tolist()}")
    full = wavelet.haar_full_1d(series)
    print(f"full recursion: {full.tolist()}  (global mean first)")
    back = wavelet.inverse_haar_full_1d(full)
    print(f"inverted: {back.tolist()}")

    print("\n== one 2D level on a 2x2 block ==")
    block = np.array([[3, 5], [7, 9]])
    sub = wavelet.quad_decompose(block)
    print(f"{block.tolist()} -> ll {sub.ll.item()}, hl {sub.hl.item()}, "
          f"lh {sub.lh.item()}, hh {sub.hh.item()}")

    print("\n== two levels on a face crop ==")
    rng = np.random.default_rng(7)
    height, width = 120, 160
    texture = synthetic.block_texture(rng, height, width)
    face = synthetic.ellipse_interior(height, width, cx=80, cy=60, rx=44, ry=50)
    img = np.where(face, texture, 0).astype(np.uint8)
    pixels = preprocess_face(img, Config()).pixels
    print(f"crop: {pixels.shape[1]}x{pixels.shape[0]}")

    pyramid = wavelet.decompose_to_level(pixels, 2)
    for lvl in range(1, pyramid.depth + 1):
        band = pyramid.ll(lvl)
        print(f"LL{lvl}: {band.shape[1]}x{band.shape[0]}, "
              f"range [{band.min():.2f}, {band.max():.2f}]")

    for lvl, sub in enumerate(pyramid.levels, start=1):
        packed = wavelet.mosaic(wavelet.QuadSubbands(
            ll=wavelet.band_to_gray(sub.ll),
            hl=wavelet.band_to_gray(sub.hl, detail=True),
            lh=wavelet.band_to_gray(sub.lh, detail=True),
            hh=wavelet.band_to_gray(sub.hh, detail=True)))
        path = out / f"mosaic_level{lvl}.pgm"
        path.write_bytes(pnm.encode_pgm(packed.astype(np.uint8)))
        print(f"level {lvl} bands packed into {path}")

    rebuilt = wavelet.reconstruct(pyramid)
    exact = np.array_equal(rebuilt, np.asarray(pixels, dtype=np.float64))
    print(f"reconstruct(decompose(crop)) == crop exactly: {exact}")


if __name__ == "__main__":
    main()
