"""Secret-weight substitution, gradient-masked joint training, recovery.

The published model plays two roles. Sampled as-is it shows the stego
image; masked positions hold the frozen important weights of the
pre-trained cover. Substituting seeded secret weights at exactly those
positions yields a secret view, one per seed. Joint training updates only
the shared (unmasked) weights and the biases, against the stego target
and every secret target at once, so all views stay consistent with one
published parameter set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codec import make_grid, map_unit_to_signed, sample, validate_image
from .errors import ContractViolation, KeyMismatch, TrainingError
from .keying import PRNG_ID, SecretWeights, StegoKey, generate_secret_weights
from .masking import (
    WeightMask,
    arch_fingerprint,
    complement_apply,
    from_sparse,
    random_mask,
    select_mask,
)
from .metrics import psnr
from .nn import (
    GradientSet,
    NetworkParams,
    OptimizerState,
    backward,
    grads_axpy,
    init_params,
    optimizer_step,
    to_float32,
    xavier_init_params,
)

INIT_MODES = ("pretrained", "xavier_scratch", "random_positions")


def lambda_defaults(n_secrets: int) -> tuple[float, float]:
    """Default loss weights 1/(N+1) for both the stego and the secret term."""
    if n_secrets < 1:
        raise ContractViolation("need at least one secret")
    lam = 1.0 / (n_secrets + 1)
    return lam, lam


@dataclass
class TrainingConfig:
    """Knobs for cover fitting and joint training."""

    ratio: float = 0.05
    lr: float = 1e-3
    cover_epochs: int = 20000
    joint_epochs: int = 50000
    lambda_st: float | None = None  # None: 1/(N+1) at train time
    lambda_se: float | None = None
    optimizer: str = "sgd"
    init_mode: str = "pretrained"

    def __post_init__(self):
        if not self.lr > 0:
            raise ContractViolation("lr must be positive")
        if not (0.0 < self.ratio < 1.0):
            raise ContractViolation("ratio must lie strictly between 0 and 1")
        if self.cover_epochs < 0 or self.joint_epochs < 0:
            raise ContractViolation("epoch counts must be non-negative")
        if (self.lambda_st is None) != (self.lambda_se is None):
            raise ContractViolation("set both loss weights or neither")
        for lam in (self.lambda_st, self.lambda_se):
            if lam is not None and not lam > 0:
                raise ContractViolation("loss weights must be positive")
        if self.optimizer not in ("sgd", "adam"):
            raise ContractViolation(f"unknown optimizer: {self.optimizer!r}")
        if self.init_mode not in INIT_MODES:
            raise ContractViolation(f"unknown init_mode: {self.init_mode!r}")


@dataclass
class StegoBundle:
    """Everything the sender holds after joint training.

    stego_params is the publishable model (already rounded to file
    precision); seeds never leave the sender's side. final_stego_sample
    and final_secret_samples are renders of the last epoch's state, kept
    so recovery can be checked pixel-for-pixel against training.
    """

    stego_params: NetworkParams
    mask: WeightMask
    seeds: list[int]
    stego_target: np.ndarray
    secret_targets: list[np.ndarray]
    final_stego_sample: np.ndarray = field(repr=False, default=None)
    final_secret_samples: list[np.ndarray] = field(repr=False, default_factory=list)


def substitute(
    cover: NetworkParams, mask: WeightMask, secret_weights: SecretWeights
) -> NetworkParams:
    """Secret weights at masked positions, cover elsewhere; biases copied."""
    weights = complement_apply(secret_weights, cover.weights, mask)
    return NetworkParams(cover.arch, weights, [b.copy() for b in cover.biases])


def _view_losses_row(params, mask, secret_w, grid, stego_img, secret_imgs, epoch):
    """Quality-log rows (epoch, view, psnr, loss) for the current state."""
    h, w = stego_img.shape[:2]
    rows = []
    img = sample(params, h, w)
    tgt = map_unit_to_signed(stego_img)
    rows.append(
        {
            "epoch": epoch,
            "view": "stego",
            "psnr": psnr(img, stego_img),
            "loss": float(np.mean((map_unit_to_signed(img) - tgt) ** 2)),
        }
    )
    for i, sw in enumerate(secret_w):
        view = substitute(params, mask, sw)
        img = sample(view, h, w)
        tgt = map_unit_to_signed(secret_imgs[i])
        rows.append(
            {
                "epoch": epoch,
                "view": f"secret{i + 1}",
                "psnr": psnr(img, secret_imgs[i]),
                "loss": float(np.mean((map_unit_to_signed(img) - tgt) ** 2)),
            }
        )
    return rows


def joint_train(
    cover: NetworkParams,
    stego_target: np.ndarray,
    secrets: list[np.ndarray],
    seeds: list[int],
    config: TrainingConfig,
    log_every: int = 100,
    init_seed: int = 0,
) -> tuple[StegoBundle, list[dict]]:
    """Train the shared weights jointly across the stego and secret views.

    Per epoch, every view's loss and gradient are computed from the same
    parameter snapshot; one combined step
        lambda_st * grad_stego + lambda_se * sum_i grad_secret_i
    is applied to unmasked weights and all biases. Masked weights never
    move, which is what lets a key later reconstruct each secret view.

    init_mode "pretrained" uses the given cover function and magnitude
    selection; "xavier_scratch" restarts from Xavier-normal weights (same
    selection rule); "random_positions" restarts from a fresh default
    initialization with uniformly random mask positions. The two restart
    modes draw from init_seed.
    """
    stego_target = validate_image(stego_target)
    secrets = [validate_image(s) for s in secrets]
    if len(secrets) < 1:
        raise ContractViolation("need at least one secret image")
    if len(seeds) != len(secrets):
        raise ContractViolation("one seed per secret image is required")
    if len(set(int(s) for s in seeds)) != len(seeds):
        raise ContractViolation("seeds must be pairwise distinct")
    h, w = stego_target.shape[:2]
    for s in secrets:
        if s.shape != stego_target.shape:
            raise ContractViolation("all images must share the stego target's shape")

    arch = cover.arch
    if config.init_mode == "pretrained":
        base = cover.copy()
        mask = select_mask(base, config.ratio)
    elif config.init_mode == "xavier_scratch":
        base = xavier_init_params(arch, init_seed)
        mask = select_mask(base, config.ratio)
    else:  # random_positions
        base = init_params(arch, init_seed)
        mask = random_mask(arch, config.ratio, init_seed)

    lam_st, lam_se = (
        (config.lambda_st, config.lambda_se)
        if config.lambda_st is not None and config.lambda_se is not None
        else lambda_defaults(len(secrets))
    )

    secret_w = [generate_secret_weights(s, arch) for s in seeds]
    grid = make_grid(h, w)
    stego_t = map_unit_to_signed(stego_target.reshape(-1, 3))
    secret_t = [map_unit_to_signed(s.reshape(-1, 3)) for s in secrets]

    params = base
    state = OptimizerState.create(config.optimizer, config.lr, arch)
    log: list[dict] = []

    for epoch in range(config.joint_epochs):
        if log_every and epoch % log_every == 0:
            log.extend(
                _view_losses_row(params, mask, secret_w, grid, stego_target, secrets, epoch)
            )
        try:
            loss_st, g_st = backward(params, grid.coords, stego_t)
            combined: GradientSet = grads_axpy(None, lam_st, g_st)
            total = lam_st * loss_st
            for i, sw in enumerate(secret_w):
                view = substitute(params, mask, sw)
                loss_i, g_i = backward(view, grid.coords, secret_t[i])
                combined = grads_axpy(combined, lam_se, g_i)
                total += lam_se * loss_i
        except Exception as exc:
            raise TrainingError(f"joint training failed at epoch {epoch}: {exc}") from exc
        if not np.isfinite(total):
            raise TrainingError(f"joint loss diverged at epoch {epoch}")
        params = optimizer_step(state, params, combined, update_mask=mask)

    # publishable precision: what a reader of the model file will see
    published = to_float32(params)
    log.extend(
        _view_losses_row(
            published, mask, secret_w, grid, stego_target, secrets, config.joint_epochs
        )
    )
    bundle = StegoBundle(
        stego_params=published,
        mask=mask,
        seeds=[int(s) for s in seeds],
        stego_target=stego_target,
        secret_targets=secrets,
        final_stego_sample=sample(published, h, w),
        final_secret_samples=[
            sample(substitute(published, mask, sw), h, w) for sw in secret_w
        ],
    )
    return bundle, log


def recover(stego: NetworkParams, key: StegoKey) -> NetworkParams:
    """Rebuild a secret view from the published model and a key."""
    if key.arch != stego.arch:
        raise KeyMismatch("key architecture does not match the model")
    if key.prng_id != PRNG_ID:
        raise KeyMismatch(f"unsupported weight generator: {key.prng_id!r}")
    if key.sparse_mask.fingerprint != arch_fingerprint(stego.arch):
        raise KeyMismatch("key fingerprint does not match the model architecture")
    mask = from_sparse(key.sparse_mask, key.arch)
    secret_w = generate_secret_weights(key.seed, key.arch)
    return substitute(stego, mask, secret_w)
