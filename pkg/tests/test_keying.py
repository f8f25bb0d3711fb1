from __future__ import annotations

import numpy as np
import pytest

from inrhide import (
    ArchSpec,
    ContractViolation,
    PRNG_ID,
    arch_fingerprint,
    generate_secret_weights,
    init_params,
    make_key,
    select_mask,
    to_sparse,
)
from inrhide.rng import mix_seed, normals


def test_secret_weights_shapes_and_determinism(small_arch):
    sw1 = generate_secret_weights(1234, small_arch)
    sw2 = generate_secret_weights(1234, small_arch)
    sw3 = generate_secret_weights(1235, small_arch)
    shapes = small_arch.layer_shapes()
    assert [w.shape for w in sw1] == shapes
    assert all(np.array_equal(a, b) for a, b in zip(sw1, sw2))
    assert all(not np.array_equal(a, b) for a, b in zip(sw1, sw3))


def test_secret_weights_are_float32_quantized(small_arch):
    sw = generate_secret_weights(7, small_arch)
    for w in sw:
        assert w.dtype == np.float64
        assert np.array_equal(w, w.astype(np.float32).astype(np.float64))


def test_secret_weights_per_layer_stream(small_arch):
    # layer i is drawn from sub-seed mix(seed, i), scaled by the layer std
    seed = 31337
    sw = generate_secret_weights(seed, small_arch)
    for i, (out, fan_in) in enumerate(small_arch.layer_shapes()):
        std = np.sqrt(2.0 / (fan_in + out))
        raw = normals(mix_seed(seed, i), out * fan_in)
        want = (raw * std).astype(np.float32).astype(np.float64).reshape(out, fan_in)
        assert np.array_equal(sw[i], want)


def test_secret_weights_std():
    arch = ArchSpec(2, 3, 2, 128)
    sw = generate_secret_weights(99, arch)
    w = sw[1]  # 128 -> 128: 16384 draws
    want = np.sqrt(2.0 / 256.0)
    assert abs(w.std() / want - 1.0) < 0.05


def test_make_key_carries_mask_seed_arch(small_arch):
    p = init_params(small_arch, 0)
    sparse = to_sparse(select_mask(p, 0.1), small_arch)
    key = make_key(sparse, 777, small_arch)
    assert key.seed == 777
    assert key.arch == small_arch
    assert key.prng_id == PRNG_ID
    assert key.sparse_mask.fingerprint == arch_fingerprint(small_arch)


def test_make_key_rejects_foreign_mask(small_arch, tiny_arch):
    p = init_params(small_arch, 0)
    sparse = to_sparse(select_mask(p, 0.1), small_arch)
    with pytest.raises(ContractViolation):
        make_key(sparse, 1, tiny_arch)
