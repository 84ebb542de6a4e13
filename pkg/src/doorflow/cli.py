"""Command-line interface: seeded runs, series analysis, temperature sweeps.

Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from .config import SimConfig
from .dynamics import run
from .errors import ConfigError, DoorflowError
from .ingest import IngestSpec, load_series
from .regimes import classify_regime, episode_mask
from .stats import acf, dfa_hurst, full_report, returns

MIN_ANALYZE_ROWS = 1024

SWEEP_COLUMNS = (
    "T,seed,regime,mean_density_in_sat,mean_density_out_sat,"
    "hurst_abs,acf_abs_lag10,acf_abs_lag100"
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we owe 1
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="doorflow",
        description="Pedestrian counterflow simulator and stylized-fact analyzer.",
        epilog="Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser(
        "simulate",
        help="run one seeded simulation and write the sampled series",
        description=(
            "Writes a CSV 'time_s,rho,frac_a' to --out and the event log "
            "'time_s,agent_id,event' to the same path with the suffix "
            "'.events.csv'."
        ),
    )
    p_sim.add_argument("--config", help="JSON config file (defaults when omitted)")
    p_sim.add_argument("--seed", type=int, help="override the config seed (u64)")
    p_sim.add_argument("--out", required=True, help="output CSV path")

    p_ana = sub.add_parser(
        "analyze",
        help="compute the stylized-fact report for one CSV column",
        description=(
            "Reads one numeric column (name or 0-based index), optionally "
            "log-transforms it (prices), and writes the JSON report. "
            f"The series must have at least {MIN_ANALYZE_ROWS} rows. "
            "--figures renders the report's plots as PNG files."
        ),
    )
    p_ana.add_argument("--in", dest="input", required=True, help="input CSV path")
    p_ana.add_argument("--column", required=True, help="column name or 0-based index")
    p_ana.add_argument("--log", action="store_true", help="analyze log of the column")
    p_ana.add_argument("--delimiter", default=",", help="field delimiter (default ',')")
    p_ana.add_argument("--report", required=True, help="output JSON report path")
    p_ana.add_argument("--figures", help="directory for rendered PNG figures")

    p_swp = sub.add_parser(
        "sweep",
        help="sweep the imitation temperature T over seeded runs",
        description=(
            "Runs `runs` seeded simulations per T value (seed = seed-base + "
            "row index) and writes one summary row per run with columns: "
            f"{SWEEP_COLUMNS}. Failed runs keep their row with regime=error."
        ),
    )
    p_swp.add_argument("--config", help="JSON config file (defaults when omitted)")
    p_swp.add_argument("--T", dest="t_values", required=True,
                       help="comma-separated T values, e.g. 0.02,0.078,0.5")
    p_swp.add_argument("--runs", type=int, required=True, help="runs per T value")
    p_swp.add_argument("--seed-base", type=int, required=True, help="first seed (u64)")
    p_swp.add_argument("--out", required=True, help="summary CSV path")
    return parser


def _load_config(path: str | None) -> SimConfig:
    if path is None:
        return SimConfig()
    return SimConfig.from_json_file(path)


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    output = run(config)
    out_path = Path(args.out)
    output.to_csv(out_path)
    output.events_to_csv(out_path.with_suffix(".events.csv"))
    print(f"wrote {out_path} ({config.N_T} samples) and {out_path.with_suffix('.events.csv')}")
    return 0


def cmd_analyze(args) -> int:
    spec = IngestSpec(
        path=args.input,
        column=args.column,
        transform="log" if args.log else "identity",
        delimiter=args.delimiter,
    )
    series = load_series(spec)
    if len(series) < MIN_ANALYZE_ROWS:
        raise ConfigError(
            f"series too short: {len(series)} rows < {MIN_ANALYZE_ROWS} required"
        )
    report = full_report(series)
    report_path = Path(args.report)
    report_path.write_text(report.to_json() + "\n", encoding="utf-8")
    print(f"wrote {report_path}")
    if args.figures:
        from .figures import render_report_figures

        paths = render_report_figures(series, report, args.figures)
        print(f"wrote {len(paths)} figures to {args.figures}")
    return 0


def sweep_rows(config: SimConfig, t_values, runs: int, seed_base: int) -> list[dict]:
    """One summary dict per (T, run index), in deterministic order."""
    rows = []
    index = 0
    for t_value in t_values:
        for _ in range(runs):
            seed = seed_base + index
            index += 1
            row = {
                "T": t_value,
                "seed": seed,
                "regime": "error",
                "mean_density_in_sat": math.nan,
                "mean_density_out_sat": math.nan,
                "hurst_abs": math.nan,
                "acf_abs_lag10": math.nan,
                "acf_abs_lag100": math.nan,
            }
            try:
                run_config = dataclasses.replace(config, T=t_value, seed=seed)
                output = run(run_config)
                row.update(_summarize_run(output))
            except DoorflowError as exc:
                print(f"sweep: run T={t_value} seed={seed} failed: {exc}", file=sys.stderr)
            rows.append(row)
    return rows


def _summarize_run(output) -> dict:
    classification = classify_regime(output.fraction)
    mask = episode_mask(output.density.size, classification.episodes)
    summary = {
        "regime": classification.regime,
        "mean_density_in_sat": float(output.density[mask].mean()) if mask.any() else math.nan,
        "mean_density_out_sat": float(output.density[~mask].mean()) if (~mask).any() else math.nan,
        "hurst_abs": math.nan,
        "acf_abs_lag10": math.nan,
        "acf_abs_lag100": math.nan,
    }
    abs_r = np.abs(returns(output.density, 1).values)
    try:
        summary["hurst_abs"] = dfa_hurst(abs_r).slope
    except DoorflowError:
        pass
    if abs_r.size > 100:
        try:
            correlations = acf(abs_r, 100)
            summary["acf_abs_lag10"] = float(correlations[10])
            summary["acf_abs_lag100"] = float(correlations[100])
        except DoorflowError:
            pass
    return summary


def cmd_sweep(args) -> int:
    config = _load_config(args.config)
    try:
        t_values = [
            math.inf if v.strip().lower() in ("inf", "infinity") else float(v)
            for v in args.t_values.split(",")
            if v.strip() != ""
        ]
    except ValueError as exc:
        raise ConfigError(f"bad --T list {args.t_values!r}: {exc}") from exc
    if not t_values:
        raise ConfigError("--T needs at least one value")
    if args.runs < 1:
        raise ConfigError(f"--runs must be >= 1, got {args.runs}")
    rows = sweep_rows(config, t_values, args.runs, args.seed_base)
    out_path = Path(args.out)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SWEEP_COLUMNS + "\n")
        for row in rows:
            fh.write(
                f"{row['T']!r},{row['seed']},{row['regime']},"
                f"{row['mean_density_in_sat']!r},{row['mean_density_out_sat']!r},"
                f"{row['hurst_abs']!r},{row['acf_abs_lag10']!r},{row['acf_abs_lag100']!r}\n"
            )
    print(f"wrote {out_path} ({len(rows)} rows)")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"doorflow: error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"doorflow: config error: {exc}", file=sys.stderr)
        return 1
    except DoorflowError as exc:
        print(f"doorflow: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
