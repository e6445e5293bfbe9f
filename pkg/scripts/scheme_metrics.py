#!/usr/bin/env python3
"""Compare the three transmission schemes on decoding-delay metrics.

For each generation size, computes the minimum transmissions to recover half
and all of the message at the target probability, per scheme, into one CSV.
Straightforward partial recovery has no closed form and is simulated.

    python scripts/scheme_metrics.py --out-dir results/ --k 20,40
"""

import argparse
from pathlib import Path

from sysnc import cli
from sysnc.codec import SCHEMES


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", default="20,40", help="comma-separated generation sizes")
    ap.add_argument("--p", default="0.1")
    ap.add_argument("--p-hat", type=float, default=0.7, dest="p_hat")
    ap.add_argument("--trials", type=int, default=20000,
                    help="trials for the simulated straightforward column")
    ap.add_argument("--seed", type=int, default=20150501)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    out = args.out_dir / "scheme_metrics.csv"
    lines: list[str] = []
    for k_text in args.k.split(","):
        k = int(k_text)
        for scheme in SCHEMES:
            argv = [
                "metrics",
                "--scheme", scheme,
                "--k", str(k),
                "--m", f"{k // 2},{k}",
                "--p", args.p,
                "--p-hat", str(args.p_hat),
                "--n-max", str(4 * k),
            ]
            if scheme == "straightforward":
                argv += ["--trials", str(args.trials), "--seed", str(args.seed),
                         "--workers", str(args.workers)]
            cfg = cli.config_from_args(cli.build_parser().parse_args(argv))
            block = cli.run(cfg).strip().splitlines()
            if not lines:
                lines.append(block[0])
            lines.extend(block[1:])
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
