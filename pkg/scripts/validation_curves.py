#!/usr/bin/env python3
"""Regenerate the decoding-probability validation data for one generation size.

Writes two join-compatible CSVs: closed-form curves (exact full recovery and
the small-p approximation for half recovery) and Monte Carlo estimates from
the progressive decoder, for each erasure probability.

    python scripts/validation_curves.py --out-dir results/
    python scripts/validation_curves.py --trials 100000 --p 0.1,0.15,0.3
"""

import argparse
from pathlib import Path

from sysnc import cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=40)
    ap.add_argument("--n-min", type=int, default=None, help="defaults to M")
    ap.add_argument("--n-max", type=int, default=None, help="defaults to 2K")
    ap.add_argument("--p", default="0.1,0.15,0.3", help="comma-separated")
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=20150501)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    k = args.k
    n_min = args.n_min if args.n_min is not None else k // 2
    n_max = args.n_max if args.n_max is not None else 2 * k
    args.out_dir.mkdir(parents=True, exist_ok=True)
    common = [
        "--scheme", "systematic",
        "--k", str(k),
        "--m", f"{k // 2},{k}",
        "--n-min", str(n_min),
        "--n-max", str(n_max),
        "--p", args.p,
    ]
    for mode, extra, name in (
        ("analyze", [], f"validation_analytic_k{k}.csv"),
        (
            "simulate",
            ["--trials", str(args.trials), "--seed", str(args.seed),
             "--workers", str(args.workers)],
            f"validation_simulated_k{k}.csv",
        ),
    ):
        out = args.out_dir / name
        code = cli.main([mode, *common, *extra, "--out", str(out)])
        if code != 0:
            raise SystemExit(code)
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
