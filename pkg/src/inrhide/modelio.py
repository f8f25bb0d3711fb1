"""Bit-exact file formats for models, keys, and masks, plus PNG image I/O.

All binary layouts are little-endian. Model payloads are 32-bit floats:
saving quantizes, loading widens to float64, and the quantization is
idempotent, so save/load round trips are exact at file precision.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError
from .keying import StegoKey
from .masking import SparseMask, arch_fingerprint, index_bits, pack_indices, unpack_indices
from .nn import ArchSpec, NetworkParams

MODEL_MAGIC = b"SINR"
KEY_MAGIC = b"SKEY"
MASK_MAGIC = b"SMSK"
FORMAT_VERSION = 1


@dataclass
class ModelFile:
    """Decoded model file: parameters plus the recorded training resolution."""

    params: NetworkParams
    train_size: tuple[int, int] | None  # (height, width)


class _Reader:
    """Cursor over bytes that raises FormatError with the failing offset."""

    def __init__(self, data: bytes, label: str):
        self.data = data
        self.pos = 0
        self.label = label

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(
                f"{self.label}: truncated at byte {self.pos} (needed {n} more)"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack("<" + fmt, self.take(struct.calcsize("<" + fmt)))

    def done(self) -> None:
        if self.pos != len(self.data):
            raise FormatError(
                f"{self.label}: {len(self.data) - self.pos} trailing bytes at offset {self.pos}"
            )


def _check_magic(r: _Reader, magic: bytes) -> None:
    got = r.take(4)
    if got != magic:
        raise FormatError(f"{r.label}: bad magic {got!r} at byte 0, expected {magic!r}")
    (version,) = r.unpack("I")
    if version != FORMAT_VERSION:
        raise FormatError(f"{r.label}: unsupported format version {version}")


def _pack_arch(arch: ArchSpec) -> bytes:
    return struct.pack(
        "<4If", arch.in_dim, arch.out_dim, arch.hidden_layers, arch.width, arch.omega0
    )


def _read_arch(r: _Reader) -> ArchSpec:
    in_dim, out_dim, hidden, width, omega0 = r.unpack("4If")
    try:
        return ArchSpec(in_dim, out_dim, hidden, width, float(omega0))
    except ValueError as exc:
        raise FormatError(f"{r.label}: invalid architecture ({exc})") from exc


# --- models -----------------------------------------------------------------


def save_model(
    params: NetworkParams, path, train_size: tuple[int, int] | None = None
) -> None:
    """Write "SINR" file: header, then per layer float32 weights and biases."""
    params.validate()
    th, tw = train_size if train_size is not None else (0, 0)
    blob = bytearray()
    blob += MODEL_MAGIC
    blob += struct.pack("<I", FORMAT_VERSION)
    blob += _pack_arch(params.arch)
    blob += struct.pack("<II", th, tw)
    for w, b in zip(params.weights, params.biases):
        blob += w.astype("<f4").tobytes(order="C")
        blob += b.astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(blob)


def read_model_file(path) -> ModelFile:
    with open(path, "rb") as fh:
        r = _Reader(fh.read(), str(path))
    _check_magic(r, MODEL_MAGIC)
    arch = _read_arch(r)
    th, tw = r.unpack("II")
    weights, biases = [], []
    for out, fan_in in arch.layer_shapes():
        raw = np.frombuffer(r.take(4 * out * fan_in), dtype="<f4")
        weights.append(raw.astype(np.float64).reshape(out, fan_in))
        raw = np.frombuffer(r.take(4 * out), dtype="<f4")
        biases.append(raw.astype(np.float64))
    r.done()
    params = NetworkParams(arch, weights, biases)
    params.validate()
    return ModelFile(params, (th, tw) if th and tw else None)


def load_model(path) -> NetworkParams:
    return read_model_file(path).params


# --- sparse masks and keys ---------------------------------------------------


def _pack_sparse(sparse: SparseMask, arch: ArchSpec) -> bytes:
    blob = bytearray()
    blob += struct.pack("<Q", sparse.fingerprint)
    blob += struct.pack("<I", len(sparse.layer_indices))
    for ix, n in zip(sparse.layer_indices, arch.weight_counts()):
        blob += struct.pack("<I", len(ix))
        blob += pack_indices(ix, index_bits(n))
    return bytes(blob)


def _read_sparse(r: _Reader, arch: ArchSpec) -> SparseMask:
    (fingerprint,) = r.unpack("Q")
    if fingerprint != arch_fingerprint(arch):
        raise FormatError(f"{r.label}: mask fingerprint does not match architecture")
    (n_layers,) = r.unpack("I")
    counts = arch.weight_counts()
    if n_layers != len(counts):
        raise FormatError(f"{r.label}: mask layer count {n_layers} != {len(counts)}")
    indices = []
    for n in counts:
        (ones,) = r.unpack("I")
        if ones > n:
            raise FormatError(f"{r.label}: layer claims {ones} ones out of {n} weights")
        bits = index_bits(n)
        packed = r.take((ones * bits + 7) // 8)
        ix = unpack_indices(packed, ones, bits)
        if len(ix) > 1 and not (np.diff(ix) > 0).all():
            raise FormatError(f"{r.label}: mask indices not strictly increasing")
        if len(ix) and ix[-1] >= n:
            raise FormatError(f"{r.label}: mask index {int(ix[-1])} out of range {n}")
        indices.append(ix)
    return SparseMask(fingerprint, indices)


def save_mask(sparse: SparseMask, arch: ArchSpec, path) -> None:
    """Write "SMSK" file: architecture plus the packed sparse mask."""
    if sparse.fingerprint != arch_fingerprint(arch):
        raise FormatError("sparse mask fingerprint does not match architecture")
    with open(path, "wb") as fh:
        fh.write(MASK_MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(_pack_arch(arch))
        fh.write(_pack_sparse(sparse, arch))


def load_mask(path) -> tuple[SparseMask, ArchSpec]:
    with open(path, "rb") as fh:
        r = _Reader(fh.read(), str(path))
    _check_magic(r, MASK_MAGIC)
    arch = _read_arch(r)
    sparse = _read_sparse(r, arch)
    r.done()
    return sparse, arch


def save_key(key: StegoKey, path) -> None:
    """Write "SKEY" file: generator id, seed, architecture, sparse mask."""
    prng = key.prng_id.encode("ascii")
    if len(prng) > 255:
        raise FormatError("prng_id too long")
    with open(path, "wb") as fh:
        fh.write(KEY_MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<B", len(prng)))
        fh.write(prng)
        fh.write(struct.pack("<Q", key.seed))
        fh.write(_pack_arch(key.arch))
        fh.write(_pack_sparse(key.sparse_mask, key.arch))


def load_key(path) -> StegoKey:
    with open(path, "rb") as fh:
        r = _Reader(fh.read(), str(path))
    _check_magic(r, KEY_MAGIC)
    (n,) = r.unpack("B")
    prng_id = r.take(n).decode("ascii")
    (seed,) = r.unpack("Q")
    arch = _read_arch(r)
    sparse = _read_sparse(r, arch)
    r.done()
    return StegoKey(sparse_mask=sparse, seed=seed, arch=arch, prng_id=prng_id)


# --- images -------------------------------------------------------------------


def read_image(path) -> np.ndarray:
    """Load an 8-bit RGB image file as H x W x 3 floats in [0, 1]."""
    try:
        with Image.open(path) as im:
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64)
    except (UnidentifiedImageError, OSError) as exc:
        raise FormatError(f"{path}: cannot decode image ({exc})") from exc
    return arr / 255.0


def write_image(image: np.ndarray, path) -> None:
    """Quantize [0, 1] floats with round(v * 255) and write a PNG."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[2] != 3:
        raise FormatError(f"image must be HxWx3, got {image.shape}")
    q = np.rint(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(q, mode="RGB").save(path, format="PNG")
