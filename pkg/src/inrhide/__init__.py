"""Hide images inside a single implicit neural image representation.

A sine-activated coordinate network is first fitted to a cover image. A
magnitude-based mask then marks a fraction of its weight positions; at
those positions, deterministically generated "secret" weights (derived
from a per-secret seed) replace the trained values, and the remaining
free weights are retrained so that the published network still renders
the cover while each (mask, seed) key reveals a different hidden image,
exactly, at any sampling resolution.
"""

from .codec import (
    CoordGrid,
    FitReport,
    fit_cover,
    make_grid,
    map_signed_to_unit,
    map_unit_to_signed,
    sample,
    validate_image,
)
from .errors import (
    ContractViolation,
    FormatError,
    KeyMismatch,
    NumericError,
    TrainingError,
)
from .keying import PRNG_ID, StegoKey, generate_secret_weights, make_key
from .masking import (
    SparseMask,
    arch_fingerprint,
    compression_ratio,
    from_sparse,
    mask_ones,
    random_mask,
    select_mask,
    sparse_payload_bits,
    to_sparse,
)
from .metrics import PSNR_CAP_DB, MetricReport, mae, metric_report, psnr, rmse, ssim
from .modelio import (
    ModelFile,
    load_key,
    load_mask,
    load_model,
    read_image,
    read_model_file,
    save_key,
    save_mask,
    save_model,
    write_image,
)
from .nn import (
    ArchSpec,
    GradientSet,
    NetworkParams,
    OptimizerState,
    backward,
    forward,
    init_params,
    mse_loss,
    optimizer_step,
    params_equal,
    to_float32,
    xavier_init_params,
)
from .robustness import (
    AttackReport,
    PruneSpec,
    histogram_rows,
    prune,
    random_key_attack,
    weight_histogram,
)
from .stego import (
    StegoBundle,
    TrainingConfig,
    joint_train,
    lambda_defaults,
    recover,
    substitute,
)

__version__ = "0.1.0"

__all__ = [
    "ArchSpec",
    "AttackReport",
    "ContractViolation",
    "CoordGrid",
    "FitReport",
    "FormatError",
    "GradientSet",
    "KeyMismatch",
    "MetricReport",
    "ModelFile",
    "NetworkParams",
    "NumericError",
    "OptimizerState",
    "PRNG_ID",
    "PSNR_CAP_DB",
    "PruneSpec",
    "SparseMask",
    "StegoBundle",
    "StegoKey",
    "TrainingConfig",
    "TrainingError",
    "arch_fingerprint",
    "backward",
    "compression_ratio",
    "fit_cover",
    "forward",
    "from_sparse",
    "generate_secret_weights",
    "histogram_rows",
    "init_params",
    "joint_train",
    "lambda_defaults",
    "load_key",
    "load_mask",
    "load_model",
    "mae",
    "make_grid",
    "make_key",
    "map_signed_to_unit",
    "map_unit_to_signed",
    "mask_ones",
    "metric_report",
    "mse_loss",
    "optimizer_step",
    "params_equal",
    "prune",
    "psnr",
    "random_key_attack",
    "random_mask",
    "read_image",
    "read_model_file",
    "recover",
    "rmse",
    "sample",
    "save_key",
    "save_mask",
    "save_model",
    "select_mask",
    "sparse_payload_bits",
    "ssim",
    "substitute",
    "to_float32",
    "to_sparse",
    "validate_image",
    "weight_histogram",
    "write_image",
    "xavier_init_params",
]
