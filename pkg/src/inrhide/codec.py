"""Between explicit images and implicit functions: grids, fitting, sampling.

Images are H x W x 3 float arrays with channel values in [0, 1]. The
network sees coordinates in [-1, 1]^2 and RGB mapped to [-1, 1]; sampling
maps back and clamps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, TrainingError
from .nn import (
    ArchSpec,
    NetworkParams,
    OptimizerState,
    backward,
    forward,
    init_params,
    mse_loss,
    optimizer_step,
)


def validate_image(image: np.ndarray) -> np.ndarray:
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ContractViolation(f"image must be HxWx3, got shape {image.shape}")
    if image.shape[0] < 1 or image.shape[1] < 1:
        raise ContractViolation("image dimensions must be >= 1")
    if image.min() < 0.0 or image.max() > 1.0:
        raise ContractViolation("image values must lie in [0, 1]")
    return image


def map_unit_to_signed(v: np.ndarray) -> np.ndarray:
    """[0, 1] channel values to the [-1, 1] training range."""
    return 2.0 * v - 1.0


def map_signed_to_unit(v: np.ndarray) -> np.ndarray:
    """[-1, 1] network outputs back to [0, 1], clamped."""
    return np.clip((v + 1.0) / 2.0, 0.0, 1.0)


@dataclass(frozen=True)
class CoordGrid:
    """Row-major coordinate grid over [-1, 1]^2."""

    height: int
    width: int
    coords: np.ndarray  # (H*W, 2), row coordinate first


@dataclass
class FitReport:
    epochs_run: int
    best_epoch: int
    best_loss: float
    final_psnr: float


def _axis(n: int) -> np.ndarray:
    # inclusive linear spacing of [-1, 1]; a single sample sits at the midpoint
    return np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)


def make_grid(height: int, width: int) -> CoordGrid:
    """All pixel coordinates of an H x W image, row-major.

    The first component runs over rows, the second over columns, each
    linearly spaced over [-1, 1] inclusive.
    """
    if height < 1 or width < 1:
        raise ContractViolation("grid dimensions must be >= 1")
    rows = _axis(height)
    cols = _axis(width)
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return CoordGrid(height, width, np.stack([rr.ravel(), cc.ravel()], axis=1))


def sample(params: NetworkParams, height: int, width: int) -> np.ndarray:
    """Render the function as an H x W x 3 image in [0, 1]."""
    grid = make_grid(height, width)
    out = forward(params, grid.coords)
    return map_signed_to_unit(out).reshape(height, width, params.arch.out_dim)


def fit_cover(
    image: np.ndarray,
    arch: ArchSpec,
    config,
    rng_seed: int,
) -> tuple[NetworkParams, FitReport]:
    """Fit the network to an image, returning the lowest-loss snapshot.

    Training is full batch (every pixel each epoch). The loss after each
    epoch's update is also evaluated, so with zero epochs the report simply
    carries the loss of the initialization. config supplies cover_epochs,
    lr and optimizer (see stego.TrainingConfig).
    """
    from .metrics import psnr  # local import to avoid a cycle at load time

    image = validate_image(image)
    if not config.lr > 0:
        raise ContractViolation("learning rate must be positive")
    h, w = image.shape[:2]
    grid = make_grid(h, w)
    targets = map_unit_to_signed(image.reshape(-1, 3))

    params = init_params(arch, rng_seed)
    state = OptimizerState.create(config.optimizer, config.lr, arch)

    best = params.copy()
    best_loss = np.inf
    best_epoch = 0
    epochs = config.cover_epochs
    for epoch in range(epochs):
        try:
            loss, grads = backward(params, grid.coords, targets)
        except Exception as exc:
            raise TrainingError(f"training failed at epoch {epoch}: {exc}") from exc
        if not np.isfinite(loss):
            raise TrainingError(f"loss diverged at epoch {epoch}")
        if loss < best_loss:
            best_loss, best_epoch, best = loss, epoch, params.copy()
        params = optimizer_step(state, params, grads)

    final_loss = mse_loss(params, grid.coords, targets)
    if not np.isfinite(final_loss):
        raise TrainingError(f"loss diverged at epoch {epochs}")
    if final_loss < best_loss:
        best_loss, best_epoch, best = final_loss, epochs, params.copy()

    report = FitReport(
        epochs_run=epochs,
        best_epoch=best_epoch,
        best_loss=float(best_loss),
        final_psnr=psnr(sample(best, h, w), image),
    )
    return best, report
