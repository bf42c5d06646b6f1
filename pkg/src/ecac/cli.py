"""Benchmark command line: run, ablate, plot."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .algorithms import build_algorithm
from .config import DEFAULT_PERCENTILE, DEFAULT_SWEEP, RunConfig, parse_config_file
from .data import SpatialIndex
from .density import pairwise_distance_percentile
from .errors import ConfigError, EcacError, MissingResult, ZeroBaseline
from .metrics import improvement_rate
from .optimizer import SelectionStrategy
from .pipeline import SCHEMA_VERSION, ClusteringResult, compute_centers, run_baseline, run_optimized
from .svg import render_scatter


def _fmt(score) -> str:
    return "n/a" if score is None else f"{score:.4f}"


def _fmt_gain(baseline, optimized) -> str:
    if baseline is None or optimized is None:
        return ""
    try:
        return f" ({improvement_rate(baseline, optimized):+.1f}%)"
    except ZeroBaseline:
        return " (n/a: zero baseline)"


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_trace(path: Path, trace: list[dict]):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in trace:
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def _resolve_deltas(config: RunConfig, dataset, truth) -> list[float]:
    """Turn the delta options into a list of absolute radii to try."""
    if config.delta is not None:
        return [float(config.delta)]
    if config.delta_percentile is not None:
        return [pairwise_distance_percentile(dataset, config.delta_percentile)]
    if config.delta_sweep is not None:
        fractions = [float(p) for p in config.delta_sweep]
    elif truth is not None:
        fractions = list(DEFAULT_SWEEP)
    else:
        # Without ground truth there is nothing to rank a sweep by.
        fractions = [DEFAULT_PERCENTILE]
    return [pairwise_distance_percentile(dataset, p) for p in fractions]


def _resolve_single_delta(config: RunConfig, dataset) -> float:
    """One radius for comparison runs: explicit value, else the default."""
    if config.delta is not None:
        return float(config.delta)
    percentile = (
        config.delta_percentile if config.delta_percentile is not None else DEFAULT_PERCENTILE
    )
    return pairwise_distance_percentile(dataset, percentile)


def _strategy(config: RunConfig, kind: str | None = None) -> SelectionStrategy:
    kind = kind or config.strategy
    seed = config.seed if kind == "random" else None
    return SelectionStrategy(kind=kind, seed=seed, cap=config.cap)


def cmd_run(config: RunConfig, dump_trace: bool = False, quiet: bool = False) -> dict:
    """Baseline and optimized pipelines on shared centers; persists JSON."""
    dataset, truth = config.load_dataset()
    algorithm = build_algorithm(config.algo, seed=config.seed, max_iter=config.max_iter, d_c=config.d_c)
    centers, extras = compute_centers(dataset, algorithm, config.k)
    index = SpatialIndex(dataset)

    baseline = run_baseline(dataset, algorithm, config.k, centers=centers)
    baseline.extras.update(extras)
    baseline.attach_metrics(truth)

    deltas = _resolve_deltas(config, dataset, truth)
    strategy = _strategy(config)

    def one(delta: float) -> ClusteringResult:
        return run_optimized(
            dataset, algorithm, config.k, delta=delta, strategy=strategy,
            centers=centers, index=index,
        ).attach_metrics(truth)

    if len(deltas) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(deltas))) as pool:
            sweep = list(pool.map(one, deltas))
    else:
        sweep = [one(deltas[0])]

    if truth is not None:
        best = max(sweep, key=lambda r: r.nmi_score)
    else:
        best = sweep[0]

    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "baseline": baseline.to_dict(),
        "optimized": best.to_dict(),
        "sweep": [r.to_dict() for r in sweep],
    }
    out = Path(config.out)
    _write_json(out / "result.json", payload)
    if dump_trace:
        _write_trace(out / "trace.jsonl", best.trace)

    if quiet:
        return payload
    print(f"dataset: n={dataset.n} d={dataset.d}  algo={config.algo} k={config.k}")
    print(f"sweep: {len(sweep)} delta value(s); best delta={best.delta:.6g} (s={best.s})")
    print(f"{'':11s}{'NMI':>22s}{'RI':>22s}")
    print(f"{'baseline':11s}{_fmt(baseline.nmi_score):>22s}{_fmt(baseline.ri_score):>22s}")
    print(
        f"{'optimized':11s}"
        f"{_fmt(best.nmi_score) + _fmt_gain(baseline.nmi_score, best.nmi_score):>22s}"
        f"{_fmt(best.ri_score) + _fmt_gain(baseline.ri_score, best.ri_score):>22s}"
    )
    return payload


def cmd_ablate(config: RunConfig, variants: list[str], dump_trace: bool = False, quiet: bool = False) -> dict:
    """Run several strategies on identical centers and delta; compare."""
    if len(variants) < 2:
        raise ConfigError("ablate needs at least two variants")
    for v in variants:
        if v not in ("local", "global", "random", "nodensity"):
            raise ConfigError(f"unknown variant {v!r}")
    if config.delta_sweep is not None:
        raise ConfigError("ablate compares at a single delta, not a sweep")

    dataset, truth = config.load_dataset()
    algorithm = build_algorithm(config.algo, seed=config.seed, max_iter=config.max_iter, d_c=config.d_c)
    centers, _ = compute_centers(dataset, algorithm, config.k)
    index = SpatialIndex(dataset)
    delta = _resolve_single_delta(config, dataset)

    cap = config.cap
    if cap is None and "nodensity" in variants:
        # Count-matched comparison: cap every variant at the mean per-set
        # extension an uncapped plain run uses on this dataset, so the
        # compared runs identify the same number of extended-centers.
        probe = run_optimized(
            dataset, algorithm, config.k, delta=delta,
            strategy=SelectionStrategy(kind="local"), centers=centers, index=index,
        )
        cap = max(1, -(-(probe.s - config.k) // config.k))

    records = []
    for kind in variants:
        strategy = SelectionStrategy(
            kind=kind, seed=config.seed if kind == "random" else None, cap=cap
        )
        result = run_optimized(
            dataset, algorithm, config.k, delta=delta, strategy=strategy,
            centers=centers, index=index,
        ).attach_metrics(truth)
        records.append(result)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "delta": delta,
        "cap": cap,
        "variants": {r.strategy: r.to_dict() for r in records},
    }
    out = Path(config.out)
    _write_json(out / "ablate.json", payload)
    if dump_trace:
        for r in records:
            _write_trace(out / f"trace-{r.strategy}.jsonl", r.trace)

    if quiet:
        return payload
    print(f"dataset: n={dataset.n} d={dataset.d}  algo={config.algo} k={config.k} delta={delta:.6g} cap={cap}")
    print(f"{'variant':12s}{'NMI':>10s}{'RI':>10s}{'s':>8s}{'extend_ms':>12s}{'fallbacks':>11s}")
    for r in records:
        print(
            f"{r.strategy:12s}{_fmt(r.nmi_score):>10s}{_fmt(r.ri_score):>10s}"
            f"{r.s:>8d}{r.timings.get('extend_ms', 0.0):>12.1f}{r.fallback_count:>11d}"
        )
    return payload


def cmd_plot(result_path, mode: str, out_path=None) -> Path:
    """Render a persisted run result as an SVG scatter plot."""
    result_path = Path(result_path)
    if not result_path.exists():
        raise MissingResult(f"no result file at {result_path}")
    try:
        payload = json.loads(result_path.read_text(encoding="utf-8"))
        record = payload["optimized"]
        config = RunConfig.from_sources(payload["config"], {})
    except (json.JSONDecodeError, KeyError) as exc:
        raise MissingResult(f"{result_path} is not a run result: {exc}") from None
    result = ClusteringResult.from_dict(record)
    dataset, _ = config.load_dataset()
    svg = render_scatter(
        dataset.points,
        result.labels,
        result.center_ids,
        mode=mode,
        extended_sets=result.extended_sets,
    )
    if out_path is None:
        out_path = result_path.parent / f"plot-{mode}.svg"
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(svg, encoding="utf-8")
    print(f"wrote {out_path}")
    return out_path


def _label_col(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--data", help="CSV dataset path")
    parser.add_argument("--label-col", type=_label_col, dest="label_col",
                        help="label column index or header name")
    parser.add_argument("--algo", choices=["kmeans", "dpc"])
    parser.add_argument("--k", type=int)
    parser.add_argument("--delta", type=float, help="absolute neighborhood radius")
    parser.add_argument("--delta-percentile", type=float, dest="delta_percentile",
                        help="radius as a pairwise-distance percentile in (0,1)")
    parser.add_argument("--delta-sweep", dest="delta_sweep",
                        help="comma-separated percentile fractions to sweep")
    parser.add_argument("--strategy", choices=["local", "global", "random", "nodensity"])
    parser.add_argument("--cap", type=int, help="max extended-centers per set")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--d-c", type=float, dest="d_c", help="DPC cutoff distance")
    parser.add_argument("--max-iter", type=int, dest="max_iter")
    parser.add_argument("--normalize", action="store_const", const=True, default=None,
                        help="min-max scale features to [0,1]")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--trace", action="store_true",
                        help="also dump the per-selection trace as JSON lines")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = parse_config_file(args.config) if args.config else None
    flag_keys = (
        "data", "label_col", "algo", "k", "delta", "delta_percentile",
        "delta_sweep", "strategy", "cap", "seed", "d_c", "max_iter",
        "normalize", "out",
    )
    flags = {key: getattr(args, key) for key in flag_keys}
    if isinstance(flags.get("delta_sweep"), str):
        flags["delta_sweep"] = [float(p) for p in flags["delta_sweep"].split(",")]
    return RunConfig.from_sources(file_values, flags)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecac",
        description="Benchmark center-based clustering with extended-center optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="baseline vs optimized on one dataset")
    _add_common_flags(p_run)

    p_ablate = sub.add_parser("ablate", help="compare selection strategies")
    _add_common_flags(p_ablate)
    p_ablate.add_argument(
        "--variants", default="local,global",
        help="comma-separated strategies to compare (>= 2)",
    )

    p_plot = sub.add_parser("plot", help="render a result.json as SVG")
    p_plot.add_argument("result", help="path to result.json")
    p_plot.add_argument("--mode", choices=["clusters", "extended-sets"],
                        default="clusters")
    p_plot.add_argument("--out", help="output SVG path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cmd_run(_config_from_args(args), dump_trace=args.trace)
        elif args.command == "ablate":
            variants = [v.strip() for v in args.variants.split(",") if v.strip()]
            cmd_ablate(_config_from_args(args), variants, dump_trace=args.trace)
        elif args.command == "plot":
            cmd_plot(args.result, args.mode, args.out)
    except EcacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
