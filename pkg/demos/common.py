"""Shared helpers for the demo scripts: synthetic test images, table printing."""

from __future__ import annotations

import numpy as np


def demo_image(height: int, width: int, seed: int, terms: int = 5) -> np.ndarray:
    """A smooth, colorful synthetic image: sums of random low-frequency waves.

    Every demo works on PNGs too; synthetic inputs just make the scripts
    runnable with no assets and keep their output deterministic.
    """
    r = np.random.default_rng(seed)
    y, x = np.meshgrid(
        np.linspace(0.0, 1.0, height), np.linspace(0.0, 1.0, width), indexing="ij"
    )
    img = np.zeros((height, width, 3))
    for c in range(3):
        acc = np.zeros((height, width))
        for _ in range(terms):
            fx, fy, phase = r.uniform(0.2, 1.8, 3)
            acc += r.uniform(0.3, 1.0) * np.sin(2 * np.pi * (fx * x + fy * y + phase))
        lo, hi = acc.min(), acc.max()
        img[:, :, c] = 0.05 + 0.9 * (acc - lo) / (hi - lo)
    return img


def busy_image(height: int, width: int, seed: int, terms: int = 16) -> np.ndarray:
    """Like demo_image but with many higher-frequency waves.

    Detailed content loads the network's capacity, which is what the
    quality trade-off demos need: on smooth images a small net has slack
    everywhere and the trade-offs barely register.
    """
    r = np.random.default_rng(seed)
    y, x = np.meshgrid(
        np.linspace(0.0, 1.0, height), np.linspace(0.0, 1.0, width), indexing="ij"
    )
    img = np.zeros((height, width, 3))
    for c in range(3):
        acc = np.zeros((height, width))
        for _ in range(terms):
            fx, fy, phase = r.uniform(0.5, 5.5, 3)
            acc += r.uniform(0.3, 1.0) * np.sin(2 * np.pi * (fx * x + fy * y + phase))
        lo, hi = acc.min(), acc.max()
        img[:, :, c] = 0.05 + 0.9 * (acc - lo) / (hi - lo)
    return img


def print_table(rows: list[dict]) -> None:
    if not rows:
        return
    cols = list(rows[0].keys())
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    line = "  ".join(c.ljust(widths[c]) for c in cols)
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(str(r[c]).ljust(widths[c]) for c in cols))
