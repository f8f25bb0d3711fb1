"""Command-line front end.

Every subcommand reads and writes the package's file formats (model, key,
mask, PNG) so the whole pipeline can run from a shell:

    inrhide fit-cover --image cover.png --out cover.sinr
    inrhide embed --cover-model cover.sinr --stego-target cover.png \
        --secrets a.png b.png --seeds 17 42 --out stego.sinr --keys-out keys/
    inrhide recover --model stego.sinr --key keys/secret1.skey --out a_out.png

A ``--config file`` of ``key = value`` lines (# comments) supplies defaults
for the chosen subcommand; explicit flags always win.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys

from .codec import fit_cover, sample
from .errors import ContractViolation, FormatError, KeyMismatch, NumericError, TrainingError
from .keying import make_key
from .masking import to_sparse
from .metrics import metric_report
from .modelio import (
    load_key,
    load_mask,
    read_image,
    read_model_file,
    save_key,
    save_mask,
    save_model,
    write_image,
)
from .nn import ArchSpec
from .robustness import (
    PruneSpec,
    histogram_rows,
    prune,
    random_key_attack,
    weight_histogram,
)
from .stego import TrainingConfig, joint_train, recover


def _auto_int(text: str) -> int:
    # accept decimal or 0x-prefixed seeds
    return int(text, 0)


def _parse_res(text: str) -> tuple[int, int]:
    """"256" -> (256, 256); "256x512" -> (256, 512), height first."""
    parts = text.lower().split("x")
    try:
        if len(parts) == 1:
            n = int(parts[0])
            return n, n
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"bad resolution {text!r}, expected N or HxW")


def _resolution(args, train_size) -> tuple[int, int]:
    if args.res is not None:
        return args.res
    if train_size is not None:
        return train_size
    raise ContractViolation("model records no training resolution; pass --res")


def _write_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _load_config(path) -> dict[str, str]:
    cfg: dict[str, str] = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"{path}:{ln}: expected key = value")
            key, value = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _apply_config(sub: argparse.ArgumentParser, cfg: dict[str, str], path) -> None:
    """Turn config strings into typed defaults for one subcommand."""
    known = {}
    for action in sub._actions:
        if action.dest in ("help",):
            continue
        known[action.dest] = action
    unknown = set(cfg) - set(known)
    if unknown:
        raise FormatError(f"{path}: unknown option(s) {sorted(unknown)}")
    defaults = {}
    for dest, text in cfg.items():
        action = known[dest]
        to_type = action.type or str
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[dest] = text.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            defaults[dest] = [to_type(p) for p in text.replace(",", " ").split()]
        else:
            defaults[dest] = to_type(text)
    sub.set_defaults(**defaults)


# --- subcommand bodies --------------------------------------------------------


def _cmd_fit_cover(args) -> int:
    image = read_image(args.image)
    arch = ArchSpec(2, 3, args.depth, args.width, args.omega0)
    config = TrainingConfig(
        lr=args.lr, cover_epochs=args.epochs, optimizer=args.optimizer
    )
    params, report = fit_cover(image, arch, config, args.seed)
    save_model(params, args.out, train_size=image.shape[:2])
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(dataclasses.asdict(report), fh, indent=2)
            fh.write("\n")
    print(
        f"fit {args.out}: {report.epochs_run} epochs, "
        f"best loss {report.best_loss:.3e} (epoch {report.best_epoch}), "
        f"PSNR {report.final_psnr:.2f} dB"
    )
    return 0


def _cmd_embed(args) -> int:
    model = read_model_file(args.cover_model)
    stego_target = read_image(args.stego_target)
    secrets = [read_image(p) for p in args.secrets]
    seeds = list(args.seeds)
    if len(seeds) != len(secrets):
        raise ContractViolation("--seeds must list one seed per secret image")
    config = TrainingConfig(
        ratio=args.ratio,
        lr=args.lr,
        joint_epochs=args.epochs,
        lambda_st=args.lambda_st,
        lambda_se=args.lambda_se,
        optimizer=args.optimizer,
        init_mode=args.init_mode,
    )
    bundle, log = joint_train(
        model.params,
        stego_target,
        secrets,
        seeds,
        config,
        log_every=args.log_every,
        init_seed=args.init_seed,
    )
    h, w = stego_target.shape[:2]
    save_model(bundle.stego_params, args.out, train_size=(h, w))

    arch = bundle.stego_params.arch
    sparse = to_sparse(bundle.mask, arch)
    os.makedirs(args.keys_out, exist_ok=True)
    key_paths = []
    for i, seed in enumerate(seeds):
        key_path = os.path.join(args.keys_out, f"secret{i + 1}.skey")
        save_key(make_key(sparse, seed, arch), key_path)
        key_paths.append(key_path)
    if args.mask_out:
        save_mask(sparse, arch, args.mask_out)
    if args.log:
        _write_csv(args.log, log)

    final = [r for r in log if r["epoch"] == args.epochs]
    for row in final:
        print(f"{row['view']}: PSNR {row['psnr']:.2f} dB")
    print(f"stego model {args.out}; keys {', '.join(key_paths)}")
    return 0


def _cmd_sample(args) -> int:
    model = read_model_file(args.model)
    h, w = _resolution(args, model.train_size)
    write_image(sample(model.params, h, w), args.out)
    print(f"sampled {h}x{w} -> {args.out}")
    return 0


def _cmd_recover(args) -> int:
    model = read_model_file(args.model)
    key = load_key(args.key)
    view = recover(model.params, key)
    h, w = _resolution(args, model.train_size)
    write_image(sample(view, h, w), args.out)
    print(f"recovered {h}x{w} -> {args.out}")
    return 0


def _cmd_metrics(args) -> int:
    ref = read_image(args.ref)
    test = read_image(args.test)
    report = metric_report(test, ref)
    print(report.line())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(dataclasses.asdict(report), fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_prune(args) -> int:
    model = read_model_file(args.model)
    pruned = prune(model.params, PruneSpec(args.method, args.rate))
    save_model(pruned, args.out, train_size=model.train_size)
    print(f"pruned {args.method} rate {args.rate:g} -> {args.out}")
    return 0


def _cmd_attack(args) -> int:
    model = read_model_file(args.model)
    sparse, arch = load_mask(args.mask)
    if arch != model.params.arch:
        raise KeyMismatch("mask architecture does not match the model")
    secrets = [read_image(p) for p in args.secrets]
    report = random_key_attack(
        model.params,
        sparse,
        secrets,
        trials=args.trials,
        attack_seed=args.seed,
        inject_seeds=args.inject_seeds,
    )
    rows = []
    for i in range(report.trials):
        row = report.row(i)
        flat = {"trial": row["trial"], "seed": row["seed"], "injected": row["injected"]}
        for j, v in enumerate(row["psnr"]):
            flat[f"psnr_secret{j + 1}"] = f"{v:.6f}"
        rows.append(flat)
    _write_csv(args.report, rows)
    print(
        f"{report.trials} trials -> {args.report}; "
        f"best non-injected PSNR {report.max_psnr:.2f} dB"
    )
    return 0


def _cmd_histogram(args) -> int:
    model = read_model_file(args.model)
    rows = histogram_rows(weight_histogram(model.params, args.bins))
    _write_csv(args.out, rows)
    print(f"histograms ({args.bins} bins) -> {args.out}")
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="inrhide",
        description="Hide images inside an implicit neural image representation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    table: dict[str, argparse.ArgumentParser] = {}

    def command(name: str, func, help_: str) -> argparse.ArgumentParser:
        sub = subs.add_parser(name, help=help_)
        sub.set_defaults(func=func)
        table[name] = sub
        return sub

    p = command("fit-cover", _cmd_fit_cover, "fit a network to a cover image")
    p.add_argument("--image", required=True, help="cover image (PNG)")
    p.add_argument("--out", required=True, help="output model file")
    p.add_argument("--epochs", type=int, default=20000)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--depth", type=int, default=8, help="number of hidden layers")
    p.add_argument("--omega0", type=float, default=30.0)
    p.add_argument("--optimizer", choices=("adam", "sgd"), default="adam")
    p.add_argument("--seed", type=_auto_int, default=0)
    p.add_argument("--report", help="optional JSON fit report")

    p = command("embed", _cmd_embed, "hide secret images in a fitted model")
    p.add_argument("--cover-model", required=True)
    p.add_argument("--stego-target", required=True, help="image the stego view shows")
    p.add_argument("--secrets", nargs="+", required=True)
    p.add_argument("--seeds", nargs="+", type=_auto_int, required=True)
    p.add_argument("--ratio", type=float, default=0.05)
    p.add_argument("--epochs", type=int, default=50000)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--optimizer", choices=("sgd", "adam"), default="sgd")
    p.add_argument(
        "--init-mode",
        choices=("pretrained", "xavier_scratch", "random_positions"),
        default="pretrained",
    )
    p.add_argument("--lambda-st", type=float, default=None)
    p.add_argument("--lambda-se", type=float, default=None)
    p.add_argument("--init-seed", type=_auto_int, default=0)
    p.add_argument("--out", required=True, help="output stego model")
    p.add_argument("--keys-out", required=True, help="directory for key files")
    p.add_argument("--mask-out", help="optional standalone mask file")
    p.add_argument("--log", help="optional CSV quality log")
    p.add_argument("--log-every", type=int, default=100)

    p = command("sample", _cmd_sample, "render a model to an image")
    p.add_argument("--model", required=True)
    p.add_argument("--res", type=_parse_res, help="N or HxW; default: training size")
    p.add_argument("--out", required=True)

    p = command("recover", _cmd_recover, "extract a hidden image with its key")
    p.add_argument("--model", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--res", type=_parse_res, help="N or HxW; default: training size")
    p.add_argument("--out", required=True)

    p = command("metrics", _cmd_metrics, "compare two images")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--json", help="optional JSON report")

    p = command("prune", _cmd_prune, "zero out weights or neurons")
    p.add_argument("--model", required=True)
    p.add_argument("--method", choices=("l1_unstructured", "structured"), required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--out", required=True)

    p = command("attack", _cmd_attack, "score random-seed key guesses")
    p.add_argument("--model", required=True)
    p.add_argument("--mask", required=True, help="mask file the attacker knows")
    p.add_argument("--secrets", nargs="+", required=True, help="true secret images")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_auto_int, default=0)
    p.add_argument("--inject-seeds", nargs="*", type=_auto_int, default=None)
    p.add_argument("--report", required=True, help="output CSV")

    p = command("histogram", _cmd_histogram, "dump weight histograms to CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--out", required=True)

    return parser, table


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    # peel off --config before the real parse so it can seed defaults
    config_path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                print("error: --config needs a path", file=sys.stderr)
                return 2
            config_path = argv[i + 1]
            del argv[i : i + 2]
            break
        if tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
            del argv[i]
            break

    parser, table = build_parser()
    try:
        if config_path is not None:
            name = next((t for t in argv if not t.startswith("-")), None)
            if name not in table:
                raise FormatError("--config requires a subcommand")
            _apply_config(table[name], _load_config(config_path), config_path)
        args = parser.parse_args(argv)
        return args.func(args)
    except (
        ContractViolation,
        FormatError,
        KeyMismatch,
        TrainingError,
        NumericError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
