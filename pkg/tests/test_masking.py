from __future__ import annotations

import numpy as np
import pytest

from inrhide import (
    ArchSpec,
    ContractViolation,
    FormatError,
    NetworkParams,
    arch_fingerprint,
    compression_ratio,
    from_sparse,
    init_params,
    mask_ones,
    random_mask,
    select_mask,
    sparse_payload_bits,
    to_sparse,
)
from inrhide.masking import complement_apply, index_bits, pack_indices, unpack_indices


def sort_based_mask(params, ratio):
    """Oracle: global sort of (magnitude desc, layer, flat index) triples."""
    triples = []
    for li, w in enumerate(params.weights):
        flat = w.ravel()
        for fi in range(flat.size):
            triples.append((-abs(flat[fi]), li, fi))
    triples.sort()
    total = sum(w.size for w in params.weights)
    k = int(np.floor(ratio * total))
    keep = {(li, fi) for _, li, fi in triples[:k]}
    mask = []
    for li, w in enumerate(params.weights):
        m = np.zeros(w.size, dtype=bool)
        for fi in range(w.size):
            if (li, fi) in keep:
                m[fi] = True
        mask.append(m.reshape(w.shape))
    return mask


def test_select_mask_matches_sort_oracle(tiny_arch):
    p = init_params(tiny_arch, 3)
    for ratio in (0.05, 0.2, 0.5):
        got = select_mask(p, ratio)
        want = sort_based_mask(p, ratio)
        assert all(np.array_equal(a, b) for a, b in zip(got, want))


def test_select_mask_count_is_floor(tiny_arch):
    p = init_params(tiny_arch, 1)
    total = p.total_weights()
    for ratio in (0.05, 0.13, 0.9):
        assert mask_ones(select_mask(p, ratio)) == int(np.floor(ratio * total))
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ContractViolation):
            select_mask(p, bad)


def test_select_mask_tie_break_is_first_position():
    # all weights equal: stable sort must take earliest (layer, index) first
    arch = ArchSpec(2, 2, 1, 2)  # shapes (2,2) and (2,2): 8 weights
    w = [np.full((2, 2), 0.5), np.full((2, 2), 0.5)]
    b = [np.zeros(2), np.zeros(2)]
    p = NetworkParams(arch, w, b)
    m = select_mask(p, 0.5)  # k = 4: exactly the whole first matrix
    assert m[0].all()
    assert not m[1].any()


def test_select_mask_nested_and_scale_equivariant(tiny_arch):
    p = init_params(tiny_arch, 9)
    small = select_mask(p, 0.1)
    large = select_mask(p, 0.4)
    for s, l in zip(small, large):
        assert np.all(l[s])  # smaller-ratio mask is a subset
    scaled = NetworkParams(
        tiny_arch, [2.0 * w for w in p.weights], [b.copy() for b in p.biases]
    )
    same = select_mask(scaled, 0.1)
    assert all(np.array_equal(a, b) for a, b in zip(small, same))


def test_random_mask_count_and_determinism(tiny_arch):
    m1 = random_mask(tiny_arch, 0.25, seed=7)
    m2 = random_mask(tiny_arch, 0.25, seed=7)
    m3 = random_mask(tiny_arch, 0.25, seed=8)
    total = sum(np.prod(s) for s in [w.shape for w in m1])
    assert mask_ones(m1) == int(np.floor(0.25 * total))
    assert all(np.array_equal(a, b) for a, b in zip(m1, m2))
    assert any(not np.array_equal(a, b) for a, b in zip(m1, m3))


def test_sparse_roundtrip(tiny_arch):
    p = init_params(tiny_arch, 5)
    mask = select_mask(p, 0.3)
    sparse = to_sparse(mask, tiny_arch)
    assert sparse.fingerprint == arch_fingerprint(tiny_arch)
    back = from_sparse(sparse, tiny_arch)
    assert all(np.array_equal(a, b) for a, b in zip(mask, back))
    # wrong architecture is refused
    other = ArchSpec(2, 3, 2, 9)
    with pytest.raises(FormatError):
        from_sparse(sparse, other)


def test_complement_apply():
    m = [np.array([[True, False], [False, True]])]
    a = [np.array([[1.0, 2.0], [3.0, 4.0]])]
    b = [np.array([[9.0, 8.0], [7.0, 6.0]])]
    out = complement_apply(a, b, m)
    assert np.array_equal(out[0], [[1.0, 8.0], [7.0, 4.0]])
    with pytest.raises(ContractViolation):
        complement_apply(a, [np.zeros((1, 2))], m)


def test_index_bits():
    assert index_bits(1) == 1
    assert index_bits(2) == 1
    assert index_bits(64) == 6
    assert index_bits(65) == 7
    assert index_bits(512) == 9
    assert index_bits(16384) == 14


def test_pack_indices_msb_first_layout():
    # two 6-bit values 0b000011, 0b110000 -> bytes 00001111 0000xxxx
    data = pack_indices(np.array([3, 48]), 6)
    assert data == bytes([0b00001111, 0b00000000])
    assert list(unpack_indices(data, 2, 6)) == [3, 48]


def test_pack_unpack_roundtrip_various_widths():
    rng = np.random.default_rng(0)
    for bits in (1, 3, 6, 9, 13):
        n = rng.integers(1, 40)
        vals = np.sort(rng.choice(1 << bits, size=min(n, 1 << bits), replace=False))
        data = pack_indices(vals, bits)
        assert len(data) == (len(vals) * bits + 7) // 8
        assert np.array_equal(unpack_indices(data, len(vals), bits), vals)


def test_compression_example_8x64_layers():
    # 8 weight matrices of 64 entries each: 512 positions, 6-bit indices
    arch = ArchSpec(in_dim=8, out_dim=8, hidden_layers=7, width=8)
    assert arch.weight_counts() == [64] * 8
    rng = np.random.default_rng(1)
    w = [rng.normal(size=s) for s in arch.layer_shapes()]
    p = NetworkParams(arch, w, [np.zeros(s[0]) for s in arch.layer_shapes()])
    mask = select_mask(p, 8 / 512)  # exactly 8 ones
    assert mask_ones(mask) == 8
    sparse = to_sparse(mask, arch)
    assert sparse_payload_bits(sparse, arch) == 48
    assert compression_ratio(sparse, arch) == pytest.approx(0.90625)
