"""Sine-activated coordinate MLP: forward pass, manual gradients, optimizers.

Parameters and gradients are plain numpy arrays held in small dataclasses.
All arithmetic runs in float64; float32 is used only as a storage format
(see to_float32). Every function here is pure: optimizers return fresh
parameter objects and mutate only their own moment buffers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, NumericError


@dataclass(frozen=True)
class ArchSpec:
    """Shape of the coordinate network.

    hidden_layers is the number of sine layers; the network has
    hidden_layers + 1 weight matrices in total. omega0 scales the argument
    of the first sine layer only, subsequent sine layers use frequency 1.
    """

    in_dim: int = 2
    out_dim: int = 3
    hidden_layers: int = 8
    width: int = 128
    omega0: float = 30.0

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise ContractViolation("in_dim and out_dim must be >= 1")
        if self.hidden_layers < 1 or self.width < 1:
            raise ContractViolation("hidden_layers and width must be >= 1")
        if not self.omega0 > 0:
            raise ContractViolation("omega0 must be positive")

    @property
    def n_layers(self) -> int:
        return self.hidden_layers + 1

    def layer_shapes(self) -> list[tuple[int, int]]:
        """(out, in) shape of each weight matrix, input to output."""
        dims = [self.in_dim] + [self.width] * self.hidden_layers + [self.out_dim]
        return [(dims[i + 1], dims[i]) for i in range(len(dims) - 1)]

    def weight_counts(self) -> list[int]:
        return [o * i for o, i in self.layer_shapes()]


@dataclass
class NetworkParams:
    """Per-layer weight matrices (out x in) and bias vectors."""

    arch: ArchSpec
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def validate(self) -> None:
        shapes = self.arch.layer_shapes()
        if len(self.weights) != len(shapes) or len(self.biases) != len(shapes):
            raise ContractViolation("layer count does not match architecture")
        for i, (w, b, shape) in enumerate(zip(self.weights, self.biases, shapes)):
            if w.shape != shape:
                raise ContractViolation(f"layer {i}: weight shape {w.shape} != {shape}")
            if b.shape != (shape[0],):
                raise ContractViolation(f"layer {i}: bias shape {b.shape} != ({shape[0]},)")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ContractViolation(f"layer {i}: non-finite parameter")

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            self.arch,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )

    def total_weights(self) -> int:
        return sum(w.size for w in self.weights)


@dataclass
class GradientSet:
    """Loss gradients, shape-congruent with a NetworkParams."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


def grads_axpy(acc: GradientSet | None, scale: float, g: GradientSet) -> GradientSet:
    """acc + scale * g, accumulating in place when acc is given."""
    if acc is None:
        return GradientSet([scale * w for w in g.weights], [scale * b for b in g.biases])
    for aw, gw in zip(acc.weights, g.weights):
        aw += scale * gw
    for ab, gb in zip(acc.biases, g.biases):
        ab += scale * gb
    return acc


def init_params(arch: ArchSpec, seed: int) -> NetworkParams:
    """Standard sine-network initialization.

    First layer uniform in [-1/in_dim, 1/in_dim]; deeper layers uniform in
    [-sqrt(6/fan_in), sqrt(6/fan_in)]; biases zero. Keeps pre-activations
    near unit variance so deep sine stacks stay trainable.
    """
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for i, (out, fan_in) in enumerate(arch.layer_shapes()):
        bound = 1.0 / fan_in if i == 0 else np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(out, fan_in)))
        biases.append(np.zeros(out))
    return NetworkParams(arch, weights, biases)


def xavier_init_params(arch: ArchSpec, seed: int) -> NetworkParams:
    """Xavier-normal initialization: N(0, 2/(fan_in+fan_out)), zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for out, fan_in in arch.layer_shapes():
        std = np.sqrt(2.0 / (fan_in + out))
        weights.append(rng.normal(0.0, std, size=(out, fan_in)))
        biases.append(np.zeros(out))
    return NetworkParams(arch, weights, biases)


def to_float32(params: NetworkParams) -> NetworkParams:
    """Round every parameter through float32 and widen back to float64.

    Published models are stored as 32-bit floats; running training output
    through this makes in-memory values identical to what a reader of the
    file will see, which is what makes key-based recovery bit-exact.
    """
    return NetworkParams(
        params.arch,
        [w.astype(np.float32).astype(np.float64) for w in params.weights],
        [b.astype(np.float32).astype(np.float64) for b in params.biases],
    )


def _omega(arch: ArchSpec, layer: int) -> float:
    return arch.omega0 if layer == 0 else 1.0


# numpy evaluates float64 sin/cos through a scalar libm call per element
# (only the float32 variants have SIMD kernels), and with a sine network
# those calls dominate training time. torch's CPU backend uses SLEEF's
# vectorized routines, which stay within 1 ulp of libm, so it is used as
# a drop-in accelerator when importable; nothing else depends on it.
_TORCH_UNSET = object()
_torch = _TORCH_UNSET


def _sincos(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(sin(s), cos(s)) elementwise, float64 in and out."""
    global _torch
    if _torch is _TORCH_UNSET:  # resolved lazily: importing torch costs seconds
        try:
            import torch

            _torch = torch
        except ImportError:
            _torch = None
    if _torch is not None:
        t = _torch.from_numpy(s)
        return _torch.sin(t).numpy(), _torch.cos(t).numpy()
    return np.sin(s), np.cos(s)


def _check_coords(params: NetworkParams, coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != params.arch.in_dim:
        raise ContractViolation(
            f"coords shape {coords.shape} does not match in_dim {params.arch.in_dim}"
        )
    return coords


def _forward_cached(params: NetworkParams, coords: np.ndarray):
    """Forward pass keeping per-layer inputs and activation derivatives.

    cosines[i] holds cos of the scaled pre-activation omega_i * (W x + b),
    exactly the factor the backward pass multiplies by; getting it from the
    same range reduction as the sine makes the extra cost near zero.
    In-place updates keep this off the allocator: it runs every epoch.
    """
    arch = params.arch
    n = arch.n_layers
    x = coords
    inputs, cosines = [], []
    for i in range(n - 1):
        z = x @ params.weights[i].T
        z += params.biases[i]
        om = _omega(arch, i)
        if om != 1.0:
            z *= om
        # a non-finite value anywhere poisons the sum; one pass, no temp
        if not math.isfinite(float(z.sum())):
            raise NumericError(f"non-finite pre-activation in layer {i}")
        inputs.append(x)
        x, c = _sincos(z)
        cosines.append(c)
    y = x @ params.weights[n - 1].T
    y += params.biases[n - 1]
    if not math.isfinite(float(y.sum())):
        raise NumericError(f"non-finite output in layer {n - 1}")
    inputs.append(x)
    return y, inputs, cosines


def forward(params: NetworkParams, coords: np.ndarray) -> np.ndarray:
    """Evaluate the network on a batch of coordinate vectors.

    Hidden layer i computes sin(omega_i * (W x + b)) with omega_0 = omega0
    and omega_i = 1 afterwards; the final layer is affine.
    """
    coords = _check_coords(params, coords)
    y, _, _ = _forward_cached(params, coords)
    return y


def mse_loss(params: NetworkParams, coords: np.ndarray, targets: np.ndarray) -> float:
    """Mean squared error over every batch element and output channel."""
    coords = _check_coords(params, coords)
    y, _, _ = _forward_cached(params, coords)
    y -= targets
    flat = y.ravel()
    return float(flat @ flat) / y.size


def backward(
    params: NetworkParams, coords: np.ndarray, targets: np.ndarray
) -> tuple[float, GradientSet]:
    """MSE loss and its exact reverse-mode gradient.

    Loss is the mean of squared errors over batch and channels, so learning
    rates transfer across image resolutions.
    """
    coords = _check_coords(params, coords)
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != (coords.shape[0], params.arch.out_dim):
        raise ContractViolation("targets shape does not match coords and out_dim")
    arch = params.arch
    n = arch.n_layers

    y, inputs, cosines = _forward_cached(params, coords)
    resid = y  # y is not needed past the residual
    resid -= targets
    flat = resid.ravel()
    loss = float(flat @ flat) / resid.size

    gw: list[np.ndarray | None] = [None] * n
    gb: list[np.ndarray | None] = [None] * n

    # d loss / d y for the mean reduction
    delta = resid
    delta *= 2.0 / resid.size
    gw[n - 1] = delta.T @ inputs[n - 1]
    gb[n - 1] = delta.sum(axis=0)
    dx = delta @ params.weights[n - 1]
    for i in range(n - 2, -1, -1):
        om = _omega(arch, i)
        dz = dx  # consumed: the next dx is derived from dz below
        dz *= cosines[i]
        if om != 1.0:
            dz *= om
        gw[i] = dz.T @ inputs[i]
        gb[i] = dz.sum(axis=0)
        if i > 0:
            dx = dz @ params.weights[i]
    return loss, GradientSet(gw, gb)  # type: ignore[arg-type]


@dataclass
class OptimizerState:
    """SGD or Adam state over one parameter set.

    update_mask semantics in step(): mask 1 marks a weight as frozen, so it
    comes out bit-identical; everything else (and every bias) is trained.
    """

    kind: str
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    m_weights: list[np.ndarray] = field(default_factory=list)
    v_weights: list[np.ndarray] = field(default_factory=list)
    m_biases: list[np.ndarray] = field(default_factory=list)
    v_biases: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise ContractViolation(f"unknown optimizer kind: {self.kind!r}")
        if not self.learning_rate > 0:
            raise ContractViolation("learning_rate must be positive")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ContractViolation("betas must lie in (0, 1)")

    @classmethod
    def create(cls, kind: str, learning_rate: float, arch: ArchSpec) -> "OptimizerState":
        state = cls(kind=kind, learning_rate=learning_rate)
        if kind == "adam":
            shapes = arch.layer_shapes()
            state.m_weights = [np.zeros(s) for s in shapes]
            state.v_weights = [np.zeros(s) for s in shapes]
            state.m_biases = [np.zeros(s[0]) for s in shapes]
            state.v_biases = [np.zeros(s[0]) for s in shapes]
        return state


def optimizer_step(
    state: OptimizerState,
    params: NetworkParams,
    grads: GradientSet,
    update_mask: list[np.ndarray] | None = None,
) -> NetworkParams:
    """One optimizer step; weights where update_mask == 1 are left untouched.

    Frozen positions keep their exact bit pattern: their gradient is zeroed
    before any moment update and the original value is copied back after
    the step, so no rounding can creep in over any number of epochs.
    """
    out = params.copy()
    n = params.arch.n_layers
    if update_mask is not None and len(update_mask) != n:
        raise ContractViolation("update_mask layer count mismatch")
    state.step_count += 1
    t = state.step_count
    lr = state.learning_rate

    for i in range(n):
        gw = grads.weights[i]
        gb = grads.biases[i]
        if gw.shape != out.weights[i].shape or gb.shape != out.biases[i].shape:
            raise ContractViolation(f"gradient shape mismatch in layer {i}")
        frozen = None
        if update_mask is not None:
            frozen = update_mask[i].astype(bool)
            if frozen.shape != gw.shape:
                raise ContractViolation(f"update_mask shape mismatch in layer {i}")
            gw = np.where(frozen, 0.0, gw)

        if state.kind == "sgd":
            out.weights[i] -= lr * gw
            out.biases[i] -= lr * gb
        else:
            mw, vw = state.m_weights[i], state.v_weights[i]
            mw *= state.beta1
            mw += (1 - state.beta1) * gw
            vw *= state.beta2
            vw += (1 - state.beta2) * gw ** 2
            mhat = mw / (1 - state.beta1 ** t)
            vhat = vw / (1 - state.beta2 ** t)
            out.weights[i] -= lr * mhat / (np.sqrt(vhat) + state.epsilon)

            mb, vb = state.m_biases[i], state.v_biases[i]
            mb *= state.beta1
            mb += (1 - state.beta1) * gb
            vb *= state.beta2
            vb += (1 - state.beta2) * gb ** 2
            mhat_b = mb / (1 - state.beta1 ** t)
            vhat_b = vb / (1 - state.beta2 ** t)
            out.biases[i] -= lr * mhat_b / (np.sqrt(vhat_b) + state.epsilon)

        if frozen is not None:
            out.weights[i][frozen] = params.weights[i][frozen]
    return out


def params_equal(a: NetworkParams, b: NetworkParams) -> bool:
    """Exact equality of two parameter sets (architecture and every entry)."""
    if a.arch != b.arch:
        return False
    return all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights)) and all(
        np.array_equal(x, y) for x, y in zip(a.biases, b.biases)
    )
