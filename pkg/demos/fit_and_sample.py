"""Fit a coordinate network to an image, then sample it at several resolutions.

The fitted network is a continuous function of (row, col) in [-1, 1]^2, so
once trained at one resolution it can be rendered at any other: the same
64x64 fit below is sampled at 32, 64, 128, and 256 pixels per side.

    python3 demos/fit_and_sample.py [--image your.png] [--outdir out]
"""

from __future__ import annotations

import argparse
import os

from common import demo_image, print_table
from inrhide import (
    ArchSpec,
    TrainingConfig,
    fit_cover,
    metric_report,
    read_image,
    sample,
    save_model,
    write_image,
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--image", help="PNG to fit (default: synthetic 64x64)")
    ap.add_argument("--outdir", default="demo_out/fit_and_sample")
    ap.add_argument("--epochs", type=int, default=2500)
    args = ap.parse_args()

    img = read_image(args.image) if args.image else demo_image(64, 64, seed=11)
    h, w = img.shape[:2]
    os.makedirs(args.outdir, exist_ok=True)
    write_image(img, os.path.join(args.outdir, "original.png"))

    arch = ArchSpec(in_dim=2, out_dim=3, hidden_layers=4, width=64)
    config = TrainingConfig(lr=1e-3, cover_epochs=args.epochs, optimizer="adam")
    print(f"fitting {h}x{w} image with a {arch.hidden_layers}x{arch.width} network...")
    params, report = fit_cover(img, arch, config, rng_seed=7)
    print(f"done: best loss {report.best_loss:.3e} at epoch {report.best_epoch}, "
          f"reconstruction PSNR {report.final_psnr:.2f} dB\n")

    save_model(params, os.path.join(args.outdir, "model.sinr"), train_size=(h, w))

    rows = []
    for side in (h // 2, h, 2 * h, 4 * h):
        out = sample(params, side, side)
        path = os.path.join(args.outdir, f"sample_{side}.png")
        write_image(out, path)
        row = {"resolution": f"{side}x{side}", "file": path}
        if side == h:
            rep = metric_report(out, img)
            row["vs original"] = rep.line()
        rows.append(row)
    rows[0].setdefault("vs original", "")
    for r in rows:
        r.setdefault("vs original", "")
    print_table(rows)
    print("\nThe network is the image: one file renders every resolution.")


if __name__ == "__main__":
    main()
