"""Sweep the masked-weight ratio S and watch the stego/secret trade-off.

S is the fraction of weights frozen at their (large-magnitude) cover
values and overwritten per secret view. Freezing more weights anchors the
published stego view to the cover, but leaves fewer trainable weights to
absorb the secrets -- so as S grows, stego quality rises while secret
quality falls.

The trade-off only has teeth when the shared weights are actually
contended, so this demo uses busy images and three secrets, and runs the
joint phase with plain SGD. (With Adam, or with smooth images that leave
the net slack capacity, both effects wash out -- worth trying via
--joint-optimizer adam to see the difference.)

    python3 demos/ratio_sweep.py [--ratios 0.01 0.05 0.2]
"""

from __future__ import annotations

import argparse

from common import busy_image, print_table
from inrhide import ArchSpec, TrainingConfig, fit_cover, joint_train, psnr


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--ratios", nargs="+", type=float, default=[0.01, 0.05, 0.2])
    ap.add_argument("--size", type=int, default=64)
    ap.add_argument("--cover-epochs", type=int, default=3000)
    ap.add_argument("--joint-epochs", type=int, default=1500)
    ap.add_argument("--joint-optimizer", choices=("sgd", "adam"), default="sgd")
    args = ap.parse_args()

    n = args.size
    cover_img = busy_image(n, n, seed=201)
    secrets = [busy_image(n, n, seed=s) for s in (202, 203, 204)]
    arch = ArchSpec(hidden_layers=4, width=64)

    fit_cfg = TrainingConfig(lr=1e-3, cover_epochs=args.cover_epochs,
                             joint_epochs=0, optimizer="adam")
    print("fitting the shared cover network once...")
    cover, report = fit_cover(cover_img, arch, fit_cfg, rng_seed=7)
    print(f"cover PSNR {report.final_psnr:.2f} dB\n")

    lr = 0.1 if args.joint_optimizer == "sgd" else 1e-3
    rows = []
    for ratio in args.ratios:
        print(f"joint training at S = {ratio} ...")
        config = TrainingConfig(ratio=ratio, lr=lr, cover_epochs=0,
                                joint_epochs=args.joint_epochs,
                                optimizer=args.joint_optimizer)
        bundle, _ = joint_train(cover, cover_img, secrets, [17, 42, 91],
                                config, log_every=0)
        st = psnr(bundle.final_stego_sample, cover_img)
        se = [psnr(s, img) for s, img in zip(bundle.final_secret_samples, secrets)]
        rows.append(
            {
                "S": ratio,
                "stego PSNR": f"{st:.2f}",
                "mean secret": f"{sum(se) / len(se):.2f}",
                "per secret": "/".join(f"{v:.2f}" for v in se),
            }
        )

    print()
    print_table(rows)
    print("\nstego quality rises with S; secret quality falls."
          "\nmore anchor weights help the stego, fewer shared weights hurt the secrets.")


if __name__ == "__main__":
    main()
