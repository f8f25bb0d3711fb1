"""Attack surface evaluation: pruning, random-key guessing, weight histograms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codec import sample
from .errors import ContractViolation
from .keying import generate_secret_weights
from .masking import SparseMask, from_sparse
from .metrics import psnr
from .nn import NetworkParams
from .rng import mix_seed
from .stego import substitute

PRUNE_METHODS = ("l1_unstructured", "structured")


@dataclass
class PruneSpec:
    method: str
    rate: float

    def __post_init__(self):
        if self.method not in PRUNE_METHODS:
            raise ContractViolation(f"unknown prune method: {self.method!r}")
        if not (0.0 <= self.rate < 1.0):
            raise ContractViolation("prune rate must lie in [0, 1)")


def prune(params: NetworkParams, spec: PruneSpec) -> NetworkParams:
    """Zero parameters according to spec; the input is left untouched.

    l1_unstructured zeroes the floor(rate * N) weights of smallest
    magnitude across all layers (biases kept). structured removes whole
    hidden neurons, per hidden layer, by smallest L2 row norm: the row,
    its bias entry, and the matching column of the next layer all go to
    zero. Input and output dimensionality never change.
    """
    out = params.copy()
    if spec.rate == 0.0:
        return out
    if spec.method == "l1_unstructured":
        flat_abs = np.concatenate([np.abs(w).ravel() for w in out.weights])
        k = int(math.floor(spec.rate * flat_abs.size))
        order = np.argsort(flat_abs, kind="stable")
        cut = np.zeros(flat_abs.size, dtype=bool)
        cut[order[:k]] = True
        offset = 0
        for w in out.weights:
            sel = cut[offset : offset + w.size].reshape(w.shape)
            w[sel] = 0.0
            offset += w.size
        return out

    # structured: every weight matrix except the last feeds a hidden layer.
    # Victims are ranked on the original weights so the result does not
    # depend on the order layers are processed in.
    for layer in range(out.arch.hidden_layers):
        w = params.weights[layer]
        k = int(math.floor(spec.rate * w.shape[0]))
        if k == 0:
            continue
        norms = np.sqrt((w ** 2).sum(axis=1))
        victims = np.argsort(norms, kind="stable")[:k]
        out.weights[layer][victims, :] = 0.0
        out.biases[layer][victims] = 0.0
        out.weights[layer + 1][:, victims] = 0.0
    return out


@dataclass
class AttackReport:
    """Outcome of a random-key guessing run against one stego model."""

    trials: int
    trial_seeds: list[int]
    injected: list[bool]
    psnr_db: np.ndarray  # (trials, n_secrets), PSNR vs each true secret
    max_psnr: float  # best value over non-injected trials

    def row(self, i: int) -> dict:
        return {
            "trial": i,
            "seed": self.trial_seeds[i],
            "injected": self.injected[i],
            "psnr": [float(v) for v in self.psnr_db[i]],
        }


def random_key_attack(
    stego: NetworkParams,
    mask: SparseMask,
    true_secrets: list[np.ndarray],
    trials: int,
    attack_seed: int,
    inject_seeds: list[int] | None = None,
) -> AttackReport:
    """Guess seeds, substitute, sample, and score against the true secrets.

    Trial i uses the deterministic seed mix(attack_seed, i), so the report
    is reproducible and trials could run in any order. inject_seeds
    replaces the first few guesses (a deliberately lucky adversary); those
    trials are flagged and excluded from max_psnr.
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    if not true_secrets:
        raise ContractViolation("need at least one true secret image")
    inject = list(inject_seeds or [])
    if len(inject) > trials:
        raise ContractViolation("more injected seeds than trials")
    h, w = true_secrets[0].shape[:2]
    expanded = from_sparse(mask, stego.arch)

    seeds = []
    flags = []
    for i in range(trials):
        if i < len(inject):
            seeds.append(int(inject[i]))
            flags.append(True)
        else:
            seeds.append(mix_seed(attack_seed, i))
            flags.append(False)

    scores = np.empty((trials, len(true_secrets)))
    for i, seed in enumerate(seeds):
        guess = substitute(stego, expanded, generate_secret_weights(seed, stego.arch))
        img = sample(guess, h, w)
        for j, secret in enumerate(true_secrets):
            scores[i, j] = psnr(img, secret)

    honest = [i for i in range(trials) if not flags[i]]
    max_psnr = float(scores[honest].max()) if honest else float(scores.max())
    return AttackReport(trials, seeds, flags, scores, max_psnr)


def weight_histogram(
    params: NetworkParams, bins: int
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Equal-width histograms: one per weight matrix plus a global one.

    Per-layer entries cover that layer's weights; "global" covers every
    parameter (weights and biases), which is the feature vector a
    model-pool classifier would consume. Returns {name: (edges, counts)}.
    """
    if bins < 1:
        raise ContractViolation("bins must be >= 1")
    out: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for i, w in enumerate(params.weights):
        counts, edges = np.histogram(w.ravel(), bins=bins)
        out[f"layer{i}"] = (edges, counts)
    everything = np.concatenate(
        [w.ravel() for w in params.weights] + [b.ravel() for b in params.biases]
    )
    counts, edges = np.histogram(everything, bins=bins)
    out["global"] = (edges, counts)
    return out


def histogram_rows(hists: dict[str, tuple[np.ndarray, np.ndarray]]) -> list[dict]:
    """Flatten histograms to (layer, bin_low, bin_high, count) rows for CSV."""
    rows = []
    for name in sorted(hists, key=lambda n: (n != "global", n)):
        edges, counts = hists[name]
        for b in range(len(counts)):
            rows.append(
                {
                    "layer": name,
                    "bin_low": float(edges[b]),
                    "bin_high": float(edges[b + 1]),
                    "count": int(counts[b]),
                }
            )
    return rows
