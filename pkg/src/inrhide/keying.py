"""Seeded secret-weight generation and the recovery key object.

A key holds everything a recipient needs besides the published model:
the sparse mask, a 64-bit seed, the architecture, and the id of the
generation stream. Weights regenerate bit-exactly from the seed because
they are rounded to float32 at generation time, matching the precision of
the published model file.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ContractViolation
from .masking import SparseMask, arch_fingerprint
from .nn import ArchSpec

PRNG_ID = rng.STREAM_ID

SecretWeights = list  # list[np.ndarray], congruent with NetworkParams.weights


def generate_secret_weights(seed: int, arch: ArchSpec) -> SecretWeights:
    """Deterministic full-shape weight tensors for one secret.

    Layer i draws its entries row-major from N(0, 2/(fan_in+fan_out))
    using sub-seed mix(seed, i), so the stream is independent of the mask
    and the same seed regenerates the same tensors forever. Values are
    rounded to float32 then widened, matching model-file precision.
    """
    out: SecretWeights = []
    for i, (fan_out, fan_in) in enumerate(arch.layer_shapes()):
        sub_seed = rng.mix_seed(seed, i)
        std = np.sqrt(2.0 / (fan_in + fan_out))
        z = rng.normals(sub_seed, fan_out * fan_in) * std
        out.append(z.astype(np.float32).astype(np.float64).reshape(fan_out, fan_in))
    return out


@dataclass
class StegoKey:
    """Sparse mask + seed + architecture + generator id."""

    sparse_mask: SparseMask
    seed: int
    arch: ArchSpec
    prng_id: str = PRNG_ID


def make_key(mask: SparseMask, seed: int, arch: ArchSpec) -> StegoKey:
    """Assemble a recovery key; the mask must belong to this architecture."""
    if mask.fingerprint != arch_fingerprint(arch):
        raise ContractViolation("sparse mask fingerprint does not match architecture")
    return StegoKey(sparse_mask=mask, seed=int(seed) & rng.MASK64, arch=arch)
