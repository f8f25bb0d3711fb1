"""Hide two secret images inside one published network, then extract them.

The pipeline in five steps:

  1. fit a network to the cover image
  2. mark the top 5% of weights by magnitude (the mask)
  3. generate per-secret weights from 64-bit seeds; at masked positions
     each secret's weights replace the cover's
  4. retrain the unmasked weights so the published network still shows the
     cover while each (mask, seed) pair reveals its secret
  5. hand each recipient a key file; `recover` rebuilds their secret view
     exactly -- the masked positions never moved during training

    python3 demos/hide_two_images.py [--outdir out]
"""

from __future__ import annotations

import argparse
import os

from common import demo_image, print_table
from inrhide import (
    ArchSpec,
    TrainingConfig,
    fit_cover,
    joint_train,
    load_key,
    load_model,
    make_key,
    metric_report,
    psnr,
    recover,
    sample,
    save_key,
    save_model,
    to_sparse,
    write_image,
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="demo_out/hide_two_images")
    ap.add_argument("--size", type=int, default=48)
    ap.add_argument("--cover-epochs", type=int, default=2000)
    ap.add_argument("--joint-epochs", type=int, default=5000)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    out = lambda name: os.path.join(args.outdir, name)

    n = args.size
    cover_img = demo_image(n, n, seed=21)
    secret_imgs = [demo_image(n, n, seed=22), demo_image(n, n, seed=23)]
    seeds = [17, 42]  # any distinct 64-bit integers; these go into the keys
    write_image(cover_img, out("cover.png"))
    for i, s in enumerate(secret_imgs):
        write_image(s, out(f"secret{i + 1}.png"))

    arch = ArchSpec(hidden_layers=4, width=64)
    config = TrainingConfig(
        ratio=0.05,
        lr=1e-3,
        cover_epochs=args.cover_epochs,
        joint_epochs=args.joint_epochs,
        optimizer="adam",
    )

    print("step 1: fitting the cover image...")
    cover, report = fit_cover(cover_img, arch, config, rng_seed=7)
    print(f"        cover PSNR {report.final_psnr:.2f} dB")

    print("steps 2-4: mask, substitute, joint retrain...")
    bundle, log = joint_train(cover, cover_img, secret_imgs, seeds, config,
                              log_every=max(1, args.joint_epochs // 5))
    print_table([{k: (f"{v:.2f}" if isinstance(v, float) else v) for k, v in r.items()}
                 for r in log])

    save_model(bundle.stego_params, out("stego.sinr"), train_size=(n, n))
    sparse = to_sparse(bundle.mask, arch)
    for i, seed in enumerate(seeds):
        save_key(make_key(sparse, seed, arch), out(f"secret{i + 1}.skey"))
    write_image(bundle.final_stego_sample, out("stego.png"))
    print(f"\npublished {out('stego.sinr')} plus one key file per recipient")

    print("step 5: each key extracts its own hidden image from the same file")
    stego = load_model(out("stego.sinr"))
    rows = []
    for i in range(len(seeds)):
        view = recover(stego, load_key(out(f"secret{i + 1}.skey")))
        img = sample(view, n, n)
        write_image(img, out(f"recovered{i + 1}.png"))
        rows.append(
            {
                "view": f"secret{i + 1}",
                "vs true secret": metric_report(img, secret_imgs[i]).line(),
                "bit-exact": bool((img == bundle.final_secret_samples[i]).all()),
            }
        )
    print_table(rows)
    print(f"\nstego view vs cover: PSNR {psnr(bundle.final_stego_sample, cover_img):.2f} dB")
    print("a wrong seed yields noise; see demos/random_key_attack.py")


if __name__ == "__main__":
    main()
