"""Magnitude-based weight selection and the sparse form of the mask.

A mask is a list of boolean arrays congruent with the weight matrices
(biases are never masked). Selection is a global top-k over all layers
jointly: one threshold for the whole network, k = floor(ratio * N), with
ties broken by (layer, flat index) ascending so the result is a pure
function of the weights.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, FormatError
from .nn import ArchSpec, NetworkParams

WeightMask = list  # list[np.ndarray] of booleans, one per weight matrix


def arch_fingerprint(arch: ArchSpec) -> int:
    """Stable 64-bit digest of an architecture, used to pair masks to models."""
    blob = struct.pack(
        "<4If", arch.in_dim, arch.out_dim, arch.hidden_layers, arch.width, arch.omega0
    )
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "little")


@dataclass
class SparseMask:
    """Compressed mask: per-layer sorted flat indices of the 1 positions."""

    fingerprint: int
    layer_indices: list[np.ndarray]  # int64, strictly increasing per layer

    def total_ones(self) -> int:
        return sum(len(ix) for ix in self.layer_indices)


def select_mask(params: NetworkParams, ratio: float) -> WeightMask:
    """Mark the floor(ratio * N) weights of largest absolute value.

    The threshold is global across all weight matrices. A stable sort over
    the concatenated magnitudes gives the deterministic position tie-break.
    """
    if not (0.0 < ratio < 1.0):
        raise ContractViolation("ratio must lie strictly between 0 and 1")
    sizes = [w.size for w in params.weights]
    total = sum(sizes)
    k = int(math.floor(ratio * total))
    flat_abs = np.concatenate([np.abs(w).ravel() for w in params.weights])
    order = np.argsort(-flat_abs, kind="stable")
    chosen = np.zeros(total, dtype=bool)
    chosen[order[:k]] = True

    mask: WeightMask = []
    offset = 0
    for w, size in zip(params.weights, sizes):
        mask.append(chosen[offset : offset + size].reshape(w.shape))
        offset += size
    return mask


def mask_ones(mask: WeightMask) -> int:
    return int(sum(m.sum() for m in mask))


def random_mask(arch: ArchSpec, ratio: float, seed: int) -> WeightMask:
    """Uniformly random positions instead of magnitude ranking (ablation arm)."""
    if not (0.0 < ratio < 1.0):
        raise ContractViolation("ratio must lie strictly between 0 and 1")
    sizes = arch.weight_counts()
    total = sum(sizes)
    k = int(math.floor(ratio * total))
    rng = np.random.default_rng(seed)
    chosen = np.zeros(total, dtype=bool)
    chosen[rng.choice(total, size=k, replace=False)] = True
    mask: WeightMask = []
    offset = 0
    for size, shape in zip(sizes, arch.layer_shapes()):
        mask.append(chosen[offset : offset + size].reshape(shape))
        offset += size
    return mask


def to_sparse(mask: WeightMask, arch: ArchSpec) -> SparseMask:
    """Row-major flat indices of every 1, per layer."""
    shapes = arch.layer_shapes()
    if len(mask) != len(shapes):
        raise ContractViolation("mask layer count does not match architecture")
    indices = []
    for m, shape in zip(mask, shapes):
        if m.shape != shape:
            raise ContractViolation(f"mask shape {m.shape} != {shape}")
        indices.append(np.flatnonzero(m.ravel()).astype(np.int64))
    return SparseMask(arch_fingerprint(arch), indices)


def from_sparse(sparse: SparseMask, arch: ArchSpec) -> WeightMask:
    """Expand back to boolean matrices; validates fingerprint and ranges."""
    if sparse.fingerprint != arch_fingerprint(arch):
        raise FormatError("sparse mask fingerprint does not match architecture")
    shapes = arch.layer_shapes()
    if len(sparse.layer_indices) != len(shapes):
        raise FormatError("sparse mask layer count does not match architecture")
    mask: WeightMask = []
    for ix, shape in zip(sparse.layer_indices, shapes):
        size = shape[0] * shape[1]
        if len(ix) and (ix.min() < 0 or ix.max() >= size):
            raise FormatError("sparse mask index out of range")
        flat = np.zeros(size, dtype=bool)
        flat[ix] = True
        mask.append(flat.reshape(shape))
    return mask


def complement_apply(a: list, b: list, mask: WeightMask) -> list:
    """Entry-wise a where mask is 1, b where mask is 0."""
    if not (len(a) == len(b) == len(mask)):
        raise ContractViolation("tensor set layer counts differ")
    out = []
    for ta, tb, m in zip(a, b, mask):
        if ta.shape != tb.shape or ta.shape != m.shape:
            raise ContractViolation("tensor set shapes differ")
        out.append(np.where(m, ta, tb))
    return out


# --- bit-level encoding -----------------------------------------------------
#
# Per layer: indices packed at a fixed width of ceil(log2(layer weight
# count)) bits, MSB first, padded to a byte boundary. Only the index
# payload counts toward the compression figure; a mask of 512 positions in
# 64-weight layers with 8 ones packs into 8 * 6 = 48 bits.


def index_bits(layer_weight_count: int) -> int:
    return max(1, math.ceil(math.log2(layer_weight_count))) if layer_weight_count > 1 else 1


def pack_indices(indices: np.ndarray, bits: int) -> bytes:
    acc = 0
    nbits = 0
    out = bytearray()
    for ix in indices:
        acc = (acc << bits) | int(ix)
        nbits += bits
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out)


def unpack_indices(data: bytes, count: int, bits: int) -> np.ndarray:
    need = (count * bits + 7) // 8
    if len(data) < need:
        raise FormatError("sparse index payload truncated")
    acc = 0
    nbits = 0
    pos = 0
    out = np.empty(count, dtype=np.int64)
    for i in range(count):
        while nbits < bits:
            acc = (acc << 8) | data[pos]
            pos += 1
            nbits += 8
        nbits -= bits
        out[i] = (acc >> nbits) & ((1 << bits) - 1)
        acc &= (1 << nbits) - 1
    return out


def sparse_payload_bits(sparse: SparseMask, arch: ArchSpec) -> int:
    """Bits spent on packed indices (counts and padding excluded)."""
    return sum(
        len(ix) * index_bits(n)
        for ix, n in zip(sparse.layer_indices, arch.weight_counts())
    )


def compression_ratio(sparse: SparseMask, arch: ArchSpec) -> float:
    """Fraction of the 1-bit-per-position mask saved by the sparse form."""
    total_bits = sum(arch.weight_counts())
    payload = sparse_payload_bits(sparse, arch)
    return (total_bits - payload) / total_bits
