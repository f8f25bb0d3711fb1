"""Image quality metrics: PSNR, SSIM, RMSE, MAE.

All four operate on the 8-bit domain: inputs in [0, 1] are quantized with
round(v * 255) first, so reported numbers line up with files on disk.
SSIM uses whole-image statistics per channel (no sliding window), averaged
over channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation

# zero-MSE images would give infinite PSNR; cap keeps logs finite
PSNR_CAP_DB = 99.0

_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2
_C3 = _C2 / 2.0


def quantize_u8(image: np.ndarray) -> np.ndarray:
    """[0, 1] floats to integer-valued float64 in 0..255."""
    image = np.asarray(image, dtype=np.float64)
    return np.rint(np.clip(image, 0.0, 1.0) * 255.0)


def _pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ContractViolation(f"image shapes differ: {x.shape} vs {y.shape}")
    return quantize_u8(x), quantize_u8(y)


def psnr(x: np.ndarray, y: np.ndarray) -> float:
    xq, yq = _pair(x, y)
    mse = float(np.mean((xq - yq) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return 10.0 * math.log10(255.0 ** 2 / mse)


def ssim(x: np.ndarray, y: np.ndarray) -> float:
    """Global-statistics SSIM, averaged over channels."""
    xq, yq = _pair(x, y)
    if xq.ndim == 2:
        xq = xq[:, :, None]
        yq = yq[:, :, None]
    vals = []
    for c in range(xq.shape[2]):
        a = xq[:, :, c]
        b = yq[:, :, c]
        mu_a = a.mean()
        mu_b = b.mean()
        var_a = ((a - mu_a) ** 2).mean()
        var_b = ((b - mu_b) ** 2).mean()
        sig_a = math.sqrt(var_a)
        sig_b = math.sqrt(var_b)
        cov = ((a - mu_a) * (b - mu_b)).mean()
        lum = (2 * mu_a * mu_b + _C1) / (mu_a ** 2 + mu_b ** 2 + _C1)
        con = (2 * sig_a * sig_b + _C2) / (var_a + var_b + _C2)
        struct = (cov + _C3) / (sig_a * sig_b + _C3)
        vals.append(lum * con * struct)
    return float(np.mean(vals))


def rmse(x: np.ndarray, y: np.ndarray) -> float:
    xq, yq = _pair(x, y)
    return math.sqrt(float(np.mean((xq - yq) ** 2)))


def mae(x: np.ndarray, y: np.ndarray) -> float:
    xq, yq = _pair(x, y)
    return float(np.mean(np.abs(xq - yq)))


@dataclass
class MetricReport:
    psnr: float
    ssim: float
    rmse: float
    mae: float

    def line(self) -> str:
        return (
            f"psnr={self.psnr:.4f}dB ssim={self.ssim:.6f} "
            f"rmse={self.rmse:.4f} mae={self.mae:.4f}"
        )


def metric_report(x: np.ndarray, y: np.ndarray) -> MetricReport:
    return MetricReport(psnr(x, y), ssim(x, y), rmse(x, y), mae(x, y))
