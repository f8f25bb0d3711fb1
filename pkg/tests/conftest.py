from __future__ import annotations

import numpy as np
import pytest

from inrhide import ArchSpec


def lowfreq_image(height: int, width: int, seed: int, terms: int = 4) -> np.ndarray:
    """Deterministic smooth RGB test image: a few random low-frequency waves.

    Smooth content keeps tiny networks trainable in a handful of epochs,
    which is what the fast tests need.
    """
    r = np.random.default_rng(seed)
    y, x = np.meshgrid(
        np.linspace(0.0, 1.0, height), np.linspace(0.0, 1.0, width), indexing="ij"
    )
    img = np.zeros((height, width, 3))
    for c in range(3):
        acc = np.zeros((height, width))
        for _ in range(terms):
            fx, fy, phase = r.uniform(0.2, 1.6, 3)
            acc += r.uniform(0.3, 1.0) * np.sin(2 * np.pi * (fx * x + fy * y + phase))
        lo, hi = acc.min(), acc.max()
        img[:, :, c] = 0.05 + 0.9 * (acc - lo) / (hi - lo)
    return img


def rich_image(height: int, width: int, seed: int, terms: int = 16) -> np.ndarray:
    """Busier variant: more waves, frequencies up to ~5.5 cycles per side.

    The trend checks need content that actually loads the network --
    with smooth images a small net has slack capacity everywhere and
    the stego/secret quality trade-offs never show up.
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


@pytest.fixture
def tiny_arch() -> ArchSpec:
    return ArchSpec(in_dim=2, out_dim=3, hidden_layers=2, width=8, omega0=30.0)


@pytest.fixture
def small_arch() -> ArchSpec:
    return ArchSpec(in_dim=2, out_dim=3, hidden_layers=3, width=24, omega0=30.0)
