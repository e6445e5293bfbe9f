#!/usr/bin/env python3
"""Time the batch and progressive decoders across generation sizes.

Lossless streams of uniformly coded packets are decoded to completion; the
CSV reports median and quartile wall times per decoder and K. Values are
hardware-relative: only the ordering between decoders on one host matters.

    python scripts/decoder_timing.py --k-max 30 --repetitions 100
"""

import argparse
from pathlib import Path

from sysnc import cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=30)
    ap.add_argument("--repetitions", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    out = args.out_dir / "decoder_timing.csv"
    code = cli.main([
        "bench",
        "--k", str(args.k_max),
        "--trials", str(args.repetitions),
        "--seed", str(args.seed),
        "--out", str(out),
    ])
    if code != 0:
        raise SystemExit(code)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
