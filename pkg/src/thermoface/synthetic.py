"""Seeded synthetic face datasets for demos and self-checks.

Each subject gets a bright elliptical "face" on a black background,
textured with subject-specific constant blocks drawn from two intensity
levels. Within a subject, images differ only by small uniform noise
inside the face, so same-subject distances stay far below
cross-subject ones at every decomposition level. Real thermal data is
not redistributable; this stands in for it.
"""

from pathlib import Path

import numpy as np

from . import pnm
from .evaluation import atomic_write_bytes, atomic_write_text


def block_texture(rng, height: int, width: int, levels=(150, 250),
                  block: int = 8) -> np.ndarray:
    """Random block-constant texture; blocks survive 4x averaging intact."""
    bh = -(-height // block)
    bw = -(-width // block)
    blocks = rng.choice(np.asarray(levels, dtype=np.int64), size=(bh, bw))
    return np.repeat(np.repeat(blocks, block, axis=0), block, axis=1)[:height, :width]


def ellipse_interior(height: int, width: int, cx: int, cy: int,
                     rx: int, ry: int) -> np.ndarray:
    """Bool mask of ry^2 (x-cx)^2 + rx^2 (y-cy)^2 <= rx^2 ry^2."""
    yy, xx = np.ogrid[0:height, 0:width]
    return ((ry * ry) * (xx - cx) ** 2 + (rx * rx) * (yy - cy) ** 2
            <= rx * rx * ry * ry)


def generate_dataset(out_dir, subjects: int = 10, images_per_subject: int = 4,
                     seed: int = 0, width: int = 160, height: int = 120,
                     noise: int = 2) -> Path:
    """Write PGM images plus a manifest.csv; returns the manifest path.

    Deterministic for a given seed. Face geometry is shared by every
    image so all crops align; only textures (per subject) and noise
    (per image) vary.
    """
    if subjects < 1 or images_per_subject < 2:
        raise ValueError("need at least 1 subject and 2 images per subject")
    rng = np.random.default_rng(seed)
    cx, cy = width // 2, height // 2
    rx = int(width * 0.28)
    ry = int(height * 0.42)
    interior = ellipse_interior(height, width, cx, cy, rx, ry)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["path,subject_id"]
    for s in range(subjects):
        texture = block_texture(rng, height, width)
        for k in range(images_per_subject):
            jitter = rng.integers(-noise, noise + 1, size=(height, width))
            img = np.where(interior,
                           np.clip(texture + jitter, 0, 255), 0).astype(np.uint8)
            name = f"s{s:02d}_{k:02d}.pgm"
            atomic_write_bytes(out / name, pnm.encode_pgm(img))
            lines.append(f"{name},subject{s:02d}")
    manifest = out / "manifest.csv"
    atomic_write_text(manifest, "\n".join(lines) + "\n")
    return manifest
