from __future__ import annotations

import numpy as np
import pytest

from conftest import lowfreq_image
from inrhide import (
    ArchSpec,
    ContractViolation,
    KeyMismatch,
    TrainingConfig,
    backward,
    fit_cover,
    generate_secret_weights,
    init_params,
    joint_train,
    lambda_defaults,
    make_grid,
    make_key,
    map_unit_to_signed,
    mask_ones,
    params_equal,
    recover,
    sample,
    select_mask,
    substitute,
    to_float32,
    to_sparse,
)
from inrhide.masking import complement_apply
from inrhide.nn import GradientSet, OptimizerState, optimizer_step


@pytest.fixture(scope="module")
def tiny_bundle():
    """One small joint run shared by the read-only assertions below."""
    arch = ArchSpec(2, 3, 2, 16, 30.0)
    img = lowfreq_image(10, 10, seed=1)
    secrets = [lowfreq_image(10, 10, seed=2), lowfreq_image(10, 10, seed=3)]
    cfg = TrainingConfig(lr=2e-3, cover_epochs=250, joint_epochs=300, optimizer="adam")
    cover, _ = fit_cover(img, arch, cfg, rng_seed=5)
    bundle, log = joint_train(cover, img, secrets, [17, 42], cfg, log_every=100)
    return arch, img, secrets, cover, bundle, log


def test_lambda_defaults():
    assert lambda_defaults(1) == (0.5, 0.5)
    assert lambda_defaults(2) == (1 / 3, 1 / 3)
    assert lambda_defaults(4) == (0.2, 0.2)


def test_training_config_validation():
    with pytest.raises(ContractViolation):
        TrainingConfig(ratio=0.0)
    with pytest.raises(ContractViolation):
        TrainingConfig(lr=-1.0)
    with pytest.raises(ContractViolation):
        TrainingConfig(optimizer="lbfgs")
    with pytest.raises(ContractViolation):
        TrainingConfig(init_mode="warm")
    with pytest.raises(ContractViolation):
        TrainingConfig(lambda_st=0.5)  # both lambdas or neither
    with pytest.raises(ContractViolation):
        TrainingConfig(joint_epochs=-1)


def test_substitute_composition(tiny_arch):
    cover = init_params(tiny_arch, 0)
    mask = select_mask(cover, 0.2)
    sw = generate_secret_weights(9, tiny_arch)
    view = substitute(cover, mask, sw)
    for i, m in enumerate(mask):
        assert np.array_equal(view.weights[i][m], sw[i][m])
        assert np.array_equal(view.weights[i][~m], cover.weights[i][~m])
        assert np.array_equal(view.biases[i], cover.biases[i])
    # inputs are not aliased
    view.weights[0][0, 0] += 1.0
    assert cover.weights[0][0, 0] != view.weights[0][0, 0]


def test_joint_train_validates_inputs(tiny_arch):
    img = lowfreq_image(6, 6, seed=1)
    cover = init_params(tiny_arch, 0)
    cfg = TrainingConfig(joint_epochs=1)
    with pytest.raises(ContractViolation):
        joint_train(cover, img, [], [], cfg)
    with pytest.raises(ContractViolation):
        joint_train(cover, img, [img], [1, 2], cfg)
    with pytest.raises(ContractViolation):
        joint_train(cover, img, [img, img], [7, 7], cfg)  # duplicate seeds
    with pytest.raises(ContractViolation):
        joint_train(cover, img, [lowfreq_image(5, 6, seed=2)], [1], cfg)


def test_one_epoch_combined_step_from_same_snapshot(tiny_arch):
    """A single joint epoch must equal the hand-computed combined update."""
    img = lowfreq_image(8, 8, seed=4)
    secrets = [lowfreq_image(8, 8, seed=5)]
    cover = to_float32(init_params(tiny_arch, 3))
    cfg = TrainingConfig(ratio=0.1, lr=1e-2, joint_epochs=1, optimizer="sgd")
    bundle, _ = joint_train(cover, img, secrets, [11], cfg, log_every=0)

    # oracle: same snapshot for both views, lambda-weighted gradient sum
    mask = select_mask(cover, 0.1)
    sw = generate_secret_weights(11, tiny_arch)
    grid = make_grid(8, 8)
    t_st = map_unit_to_signed(img.reshape(-1, 3))
    t_se = map_unit_to_signed(secrets[0].reshape(-1, 3))
    _, g_st = backward(cover, grid.coords, t_st)
    _, g_se = backward(substitute(cover, mask, sw), grid.coords, t_se)
    lam = 0.5
    comb = GradientSet(
        [lam * a + lam * b for a, b in zip(g_st.weights, g_se.weights)],
        [lam * a + lam * b for a, b in zip(g_st.biases, g_se.biases)],
    )
    state = OptimizerState.create("sgd", 1e-2, tiny_arch)
    want = to_float32(optimizer_step(state, cover, comb, update_mask=mask))
    assert params_equal(bundle.stego_params, want)


def test_frozen_positions_match_cover_bits(tiny_bundle):
    arch, img, secrets, cover, bundle, _ = tiny_bundle
    cover32 = to_float32(cover)
    for i, m in enumerate(bundle.mask):
        assert np.array_equal(
            bundle.stego_params.weights[i][m], cover32.weights[i][m]
        )


def test_recover_is_bit_exact(tiny_bundle):
    arch, img, secrets, cover, bundle, _ = tiny_bundle
    sparse = to_sparse(bundle.mask, arch)
    for i, seed in enumerate(bundle.seeds):
        key = make_key(sparse, seed, arch)
        view = recover(bundle.stego_params, key)
        # parameter-for-parameter against the training-time secret view
        sw = generate_secret_weights(seed, arch)
        want_w = complement_apply(sw, bundle.stego_params.weights, bundle.mask)
        assert all(np.array_equal(a, b) for a, b in zip(view.weights, want_w))
        assert all(
            np.array_equal(a, b)
            for a, b in zip(view.biases, bundle.stego_params.biases)
        )
        # pixel-identical to the final training-epoch sample
        h, w = img.shape[:2]
        assert np.array_equal(sample(view, h, w), bundle.final_secret_samples[i])


def test_published_model_survives_file_precision(tiny_bundle):
    arch, img, secrets, cover, bundle, _ = tiny_bundle
    assert params_equal(bundle.stego_params, to_float32(bundle.stego_params))


def test_log_rows_cover_all_views(tiny_bundle):
    arch, img, secrets, cover, bundle, log = tiny_bundle
    views = {r["view"] for r in log}
    assert views == {"stego", "secret1", "secret2"}
    epochs = sorted({r["epoch"] for r in log})
    assert epochs == [0, 100, 200, 300]
    for r in log:
        assert set(r) == {"epoch", "view", "psnr", "loss"}
        assert np.isfinite(r["psnr"]) and np.isfinite(r["loss"])


def test_recover_rejects_wrong_key(tiny_bundle):
    arch, img, secrets, cover, bundle, _ = tiny_bundle
    sparse = to_sparse(bundle.mask, arch)
    key = make_key(sparse, bundle.seeds[0], arch)

    other_arch = ArchSpec(2, 3, 2, 17, 30.0)
    stranger = init_params(other_arch, 0)
    with pytest.raises(KeyMismatch):
        recover(stranger, key)

    import dataclasses

    bad = dataclasses.replace(key, prng_id="some-other-generator/v9")
    with pytest.raises(KeyMismatch):
        recover(bundle.stego_params, bad)


def test_wrong_seed_gives_garbage_not_secret(tiny_bundle):
    arch, img, secrets, cover, bundle, _ = tiny_bundle
    from inrhide import psnr

    sparse = to_sparse(bundle.mask, arch)
    right = recover(bundle.stego_params, make_key(sparse, bundle.seeds[0], arch))
    wrong = recover(bundle.stego_params, make_key(sparse, 999_999, arch))
    h, w = img.shape[:2]
    good = psnr(sample(right, h, w), secrets[0])
    bad = psnr(sample(wrong, h, w), secrets[0])
    assert good > bad


def test_init_modes_produce_distinct_runs(tiny_arch):
    img = lowfreq_image(8, 8, seed=6)
    secrets = [lowfreq_image(8, 8, seed=7)]
    cover = init_params(tiny_arch, 2)
    outs = {}
    for mode in ("pretrained", "xavier_scratch", "random_positions"):
        cfg = TrainingConfig(ratio=0.1, lr=1e-3, joint_epochs=3, init_mode=mode)
        bundle, _ = joint_train(cover, img, secrets, [5], cfg, log_every=0, init_seed=9)
        outs[mode] = bundle
    assert not params_equal(
        outs["pretrained"].stego_params, outs["xavier_scratch"].stego_params
    )
    assert not params_equal(
        outs["xavier_scratch"].stego_params, outs["random_positions"].stego_params
    )
    # mask sizes agree regardless of where the positions came from
    sizes = {mask_ones(b.mask) for b in outs.values()}
    assert len(sizes) == 1
