"""Command-line front end: analysis tables, simulations, delay metrics, benchmarks.

Every subcommand emits CSV (UTF-8, comma-separated, one header row; ``#``
comment lines only before the header) so curves can be re-plotted with any
tool. ``analyze`` and ``simulate`` share key-column encodings and are
join-compatible on (scheme, K, M, N, p).

Exit codes: 0 success, 2 configuration error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace

from . import analysis
from .codec import SCHEMES
from .simulator import (
    BENCH_DECODERS,
    ChannelConfig,
    bench_decode,
    run_trials,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3

MODES = ("analyze", "simulate", "metrics", "bench")
DEFAULT_REPETITIONS = 100
SEARCH_CAP_FACTOR = 8  # metrics mode scans n up to 8k unless --n-max narrows it


class ConfigError(ValueError):
    """Configuration that violates a precondition of the requested operation."""


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str
    scheme: str | None = None
    k: int | None = None
    m: tuple[int, ...] = ()
    n_min: int | None = None
    n_max: int | None = None
    p: tuple[float, ...] = ()
    q: int = 2
    trials: int | None = None
    seed: int | None = None
    p_hat: float | None = None
    out: str | None = None
    workers: int = 1

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "scheme": self.scheme,
            "k": self.k,
            "m": list(self.m),
            "n_min": self.n_min,
            "n_max": self.n_max,
            "p": list(self.p),
            "q": self.q,
            "trials": self.trials,
            "seed": self.seed,
            "p_hat": self.p_hat,
            "out": self.out,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(raw)
        if "m" in data and data["m"] is not None:
            data["m"] = tuple(int(x) for x in data["m"])
        if "p" in data and data["p"] is not None:
            data["p"] = tuple(float(x) for x in data["p"])
        return cls(**data)


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.mode not in MODES:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    if cfg.k is None:
        raise ConfigError("--k is required")
    if cfg.k < 1:
        raise ConfigError("K must be at least 1")
    if cfg.q < 2:
        raise ConfigError("q must be at least 2")
    if cfg.workers < 1:
        raise ConfigError("--workers must be at least 1")
    if cfg.mode == "bench":
        reps = cfg.trials if cfg.trials is not None else DEFAULT_REPETITIONS
        if reps < 1:
            raise ConfigError("repetitions (--trials) must be at least 1")
        return replace(cfg, trials=reps, seed=cfg.seed if cfg.seed is not None else 0)
    if cfg.scheme is None:
        raise ConfigError("--scheme is required")
    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {cfg.scheme!r}; expected one of {SCHEMES}")
    if not cfg.m:
        raise ConfigError("--m is required")
    for m in cfg.m:
        if m < 1:
            raise ConfigError("M must be at least 1")
        if m > cfg.k:
            raise ConfigError("M exceeds K")
    if not cfg.p:
        raise ConfigError("--p is required")
    for p in cfg.p:
        if not 0 <= p <= 1:
            raise ConfigError(f"erasure probability {p:g} outside [0, 1]")
    if cfg.mode in ("analyze", "simulate"):
        if cfg.n_min is None or cfg.n_max is None:
            raise ConfigError("--n (or --n-min/--n-max) is required")
        if not 1 <= cfg.n_min <= cfg.n_max:
            raise ConfigError(f"bad N range [{cfg.n_min}, {cfg.n_max}]")
    if cfg.mode == "simulate" or (
        cfg.mode == "metrics"
        and cfg.scheme == "straightforward"
        and any(m < cfg.k for m in cfg.m)
    ):
        if cfg.trials is None or cfg.trials < 1:
            raise ConfigError("--trials must be at least 1")
        if cfg.seed is None:
            raise ConfigError("--seed is required (no wall-clock default)")
    if cfg.mode == "metrics":
        if cfg.p_hat is None:
            raise ConfigError("--p-hat is required")
        if not 0 < cfg.p_hat <= 1:
            raise ConfigError(f"target probability {cfg.p_hat:g} outside (0, 1]")
    return cfg


def _fmt_prob(x: float) -> str:
    return f"{x:.12g}"


def _fmt_p(p: float) -> str:
    return f"{p:g}"


def _analyze_prob(
    scheme: str, k: int, m: int, n: int, p: float, q: int
) -> tuple[float, str] | None:
    """Probability and kind tag for one analysis row; None when n is outside
    the row family's domain (the range is clamped per family)."""
    analysis.AnalysisParams(k=k, n=n, m=m, p=p, q=q)
    if scheme == "systematic":
        if m == k:
            if n < k:
                return None
            return analysis.full_decode_prob(k, n, p, q), "exact"
        if n < m:
            return None
        return analysis.partial_decode_prob_approx(k, m, n, p, q), "approx"
    if scheme == "straightforward":
        if n < k:
            return None
        return analysis.sf_full_decode_prob(k, n, p, q), "exact"
    return float(analysis.ou_partial_decode_prob(k, m, n, p)), "exact"


def cmd_analyze(cfg: ExperimentConfig) -> list[str]:
    assert cfg.scheme and cfg.k and cfg.n_min and cfg.n_max
    if cfg.scheme == "straightforward" and any(m < cfg.k for m in cfg.m):
        raise ConfigError(
            "straightforward partial recovery has no closed form; use simulate"
        )
    rows = []
    for p in cfg.p:
        for m in cfg.m:
            family = []
            for n in range(cfg.n_min, cfg.n_max + 1):
                result = _analyze_prob(cfg.scheme, cfg.k, m, n, p, cfg.q)
                if result is not None:
                    family.append((n, *result))
            if not family:
                raise ConfigError(
                    f"no valid N in [{cfg.n_min}, {cfg.n_max}] for "
                    f"scheme={cfg.scheme}, M={m}"
                )
            rows.extend((cfg.scheme, cfg.k, m, n, p, cfg.q, prob, kind)
                        for n, prob, kind in family)
    rows.sort(key=lambda r: r[:6])
    lines = ["scheme,K,M,N,p,q,prob,kind"]
    lines.extend(
        f"{s},{k},{m},{n},{_fmt_p(p)},{q},{_fmt_prob(prob)},{kind}"
        for s, k, m, n, p, q, prob, kind in rows
    )
    return lines


def cmd_simulate(cfg: ExperimentConfig) -> list[str]:
    assert cfg.scheme and cfg.k and cfg.n_min and cfg.n_max
    assert cfg.trials is not None and cfg.seed is not None
    rows = []
    for p in cfg.p:
        curves = run_trials(
            cfg.scheme,
            cfg.k,
            list(cfg.m),
            (cfg.n_min, cfg.n_max),
            ChannelConfig(p, cfg.seed),
            cfg.trials,
            workers=cfg.workers,
        )
        for curve in curves:
            for n, est, count in curve.points:
                stderr = (est * (1.0 - est) / count) ** 0.5
                rows.append((cfg.scheme, cfg.k, curve.m, n, p, count, cfg.seed, est, stderr))
    rows.sort(key=lambda r: r[:5])
    lines = ["scheme,K,M,N,p,trials,seed,prob_sim,stderr"]
    lines.extend(
        f"{s},{k},{m},{n},{_fmt_p(p)},{count},{seed},{_fmt_prob(est)},{_fmt_prob(err)}"
        for s, k, m, n, p, count, seed, est, err in rows
    )
    return lines


def _metric_pair(
    cfg: ExperimentConfig, m: int, p: float, n_cap: int
) -> analysis.TargetMetrics:
    assert cfg.scheme and cfg.k and cfg.p_hat
    k, q, p_hat = cfg.k, cfg.q, cfg.p_hat
    if cfg.scheme == "systematic":
        if m == k:
            partial_fn, partial_start = (lambda n: analysis.full_decode_prob(k, n, p, q)), k
        else:
            partial_fn, partial_start = (
                lambda n: analysis.partial_decode_prob_approx(k, m, n, p, q)
            ), m
        full_fn = lambda n: analysis.full_decode_prob(k, n, p, q)
    elif cfg.scheme == "straightforward":
        full_fn = lambda n: analysis.sf_full_decode_prob(k, n, p, q)
        if m == k:
            partial_fn, partial_start = full_fn, k
        else:
            assert cfg.trials is not None and cfg.seed is not None
            [curve] = run_trials(
                cfg.scheme,
                k,
                [m],
                (m, n_cap),
                ChannelConfig(p, cfg.seed),
                cfg.trials,
                workers=cfg.workers,
            )
            partial_fn, partial_start = curve.estimate_at, m
    else:
        partial_fn = lambda n: float(analysis.ou_partial_decode_prob(k, m, n, p))
        partial_start = m
        full_fn = lambda n: float(analysis.ou_partial_decode_prob(k, k, n, p))
    n_partial = analysis.min_packets_for_target(partial_fn, p_hat, partial_start, n_cap)
    n_full = analysis.min_packets_for_target(full_fn, p_hat, k, n_cap)
    return analysis.TargetMetrics(p_hat, n_partial, n_full)


def cmd_metrics(cfg: ExperimentConfig) -> list[str]:
    assert cfg.scheme and cfg.k and cfg.p_hat
    n_cap = cfg.n_max if cfg.n_max is not None else SEARCH_CAP_FACTOR * cfg.k
    if n_cap < cfg.k:
        raise ConfigError(f"search cap {n_cap} is below K={cfg.k}")
    cell = lambda v: "unreachable" if v is None else str(v)
    rows = []
    for p in cfg.p:
        for m in cfg.m:
            metrics = _metric_pair(cfg, m, p, n_cap)
            rows.append(
                (cfg.scheme, cfg.k, m, p, cfg.p_hat,
                 cell(metrics.n_partial), cell(metrics.n_full), cell(metrics.delta_n))
            )
    rows.sort(key=lambda r: r[:4])
    lines = ["scheme,K,M,p,P_hat,N_hat_partial,N_hat_full,delta_N"]
    lines.extend(
        f"{s},{k},{m},{_fmt_p(p)},{_fmt_p(ph)},{np},{nf},{dn}"
        for s, k, m, p, ph, np, nf, dn in rows
    )
    return lines


def cmd_bench(cfg: ExperimentConfig) -> list[str]:
    assert cfg.k and cfg.trials is not None and cfg.seed is not None
    results = []
    for decoder in BENCH_DECODERS:
        results.extend(
            bench_decode(list(range(1, cfg.k + 1)), decoder, cfg.trials, seed=cfg.seed)
        )
    results.sort(key=lambda r: (r.decoder, r.k))
    lines = [
        "# timing values are hardware-relative; compare decoders within one run only",
        "decoder,K,median_ns,p25_ns,p75_ns,repetitions",
    ]
    lines.extend(
        f"{r.decoder},{r.k},{r.median_ns},{r.p25_ns},{r.p75_ns},{r.repetitions}"
        for r in results
    )
    return lines


_COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "metrics": cmd_metrics,
    "bench": cmd_bench,
}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sysnc",
        description="Binary network-coding toolkit: analysis, simulation, "
        "delay metrics and decoder benchmarks, all emitting CSV.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode)
        sp.add_argument("--scheme", choices=SCHEMES)
        sp.add_argument("--k", type=int)
        sp.add_argument("--m", type=_int_list, help="comma-separated thresholds")
        sp.add_argument("--n", type=int, help="shorthand for --n-min N --n-max N")
        sp.add_argument("--n-min", type=int, dest="n_min")
        sp.add_argument("--n-max", type=int, dest="n_max")
        sp.add_argument("--p", type=_float_list, help="comma-separated probabilities")
        sp.add_argument("--q", type=int)
        sp.add_argument("--trials", type=int, help="trials (repetitions for bench)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--p-hat", type=float, dest="p_hat")
        sp.add_argument("--out")
        sp.add_argument("--config", dest="config_file")
        sp.add_argument("--workers", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    file_values: dict = {}
    if args.config_file:
        try:
            with open(args.config_file, encoding="utf-8") as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        if not isinstance(file_values, dict):
            raise ConfigError("config file must hold a JSON object")
        file_values.pop("mode", None)  # the subcommand decides the mode
    if args.n is not None:
        if args.n_min is not None or args.n_max is not None:
            raise ConfigError("--n conflicts with --n-min/--n-max")
        args.n_min = args.n_max = args.n
    flag_values = {
        key: getattr(args, key)
        for key in ("scheme", "k", "m", "n_min", "n_max", "p", "q",
                    "trials", "seed", "p_hat", "out", "workers")
        if getattr(args, key) is not None
    }
    merged = {**file_values, **flag_values, "mode": args.mode}
    return _validate(ExperimentConfig.from_dict(merged))


def run(cfg: ExperimentConfig) -> str:
    lines = _COMMANDS[cfg.mode](cfg)
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        text = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except analysis.InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
