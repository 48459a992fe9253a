"""Command line entry point: ``mcgraph <command> [options]``.

Every command prints (or writes to ``--output``) one JSON report with the
validated configuration echoed back, and exits 0 when all checks it ran
passed, 1 when one failed and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import experiments as ex
from .core import RngStream, parse_masses, sample_clocks
from .forests import build_f0_snapshot, component_partition_at, evolve_f1, ranges_to_blocks
from .mosaic import check_tiling, expected_surplus_by_component, verify_rate_identity
from .oracle import MAX_ENUMERATION_N, enumerate_exact_law
from .scaling import (ScalingParams, TruncationWarning, discrete_largest_component,
                      extract_excursions_and_marks, largest_excursion, sample_continuum_paths,
                      states_to_csv, truncate_c)
from .stats import CheckReport, bonferroni
from .surplus import activation_table, graph_process_g1
from .walks import WalkPath, decompose_excursions, merge_schedule

SCHEMA = "1"
COMMANDS = ("trace-walk", "simulate-forests", "verify-mosaic", "compare-oracle", "multigraph",
            "scaling")
DEFAULT_REPLICATES = {"trace-walk": 1, "simulate-forests": 100, "verify-mosaic": 1,
                      "compare-oracle": 10_000, "multigraph": 1000, "scaling": 100}


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers: {text!r}") from err


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcgraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--n", type=int, default=None)
        s.add_argument("--masses", default="unit",
                       help='"unit", "n^{-2/3}" or a comma separated list')
        s.add_argument("--probe-qs", type=_floats, default=None)
        s.add_argument("--q-max", type=float, default=None)
        s.add_argument("--replicates", type=int, default=None)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--fresh-seed", action="store_true",
                       help="draw the seed from OS entropy (it is echoed in the report)")
        s.add_argument("--alpha", type=float, default=0.01)
        s.add_argument("--output", default=None)
        s.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "multigraph":
            s.add_argument("--event-log", default=None, help="write replicate 0 as JSON lines")
        if name == "scaling":
            s.add_argument("--kappa", type=float, default=1.0)
            s.add_argument("--tau", type=float, default=0.0)
            s.add_argument("--c", type=_floats, default=())
            s.add_argument("--c-terms", type=int, default=None, help="truncate c to this many terms")
            s.add_argument("--t", type=float, default=0.0)
            s.add_argument("--S", type=float, default=10.0)
            s.add_argument("--ds", type=float, default=1e-3)
    return p


def validate(args: argparse.Namespace) -> dict:
    """Check the options and return the config echo."""
    if args.fresh_seed:
        args.seed = int(np.random.SeedSequence().entropy % (1 << 63))
    if args.replicates is None:
        args.replicates = DEFAULT_REPLICATES[args.command]
    if args.replicates < 0:
        raise ConfigError("--replicates must be nonnegative")
    if args.seed < 0:
        raise ConfigError("--seed must be nonnegative")
    if not 0 < args.alpha < 1:
        raise ConfigError("--alpha must lie in (0, 1)")
    if args.format == "csv" and args.command != "scaling":
        raise ConfigError("csv output is only available for the scaling command")
    if args.probe_qs is not None:
        if not args.probe_qs or any(q <= 0 for q in args.probe_qs):
            raise ConfigError("--probe-qs must be positive")
        if any(b <= a for a, b in zip(args.probe_qs, args.probe_qs[1:])):
            raise ConfigError("--probe-qs must be increasing")
    if args.q_max is not None and not args.q_max > 0:
        raise ConfigError("--q-max must be positive")
    if args.command != "scaling" or args.n is not None:
        if args.masses.strip() in ("unit", "n^{-2/3}", "n^(-2/3)", "critical"):
            if args.n is None:
                args.n = 3 if args.command == "compare-oracle" else 20
            if args.n < 1:
                raise ConfigError("--n must be positive")
        try:
            args.weights = parse_masses(args.masses, args.n)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        args.n = args.weights.n
    config = {k: v for k, v in vars(args).items() if k != "weights"}
    if args.command == "scaling":
        try:
            c = tuple(args.c)
            tail = 0.0
            if args.c_terms is not None:
                c, tail = truncate_c(c, args.c_terms)
            args.params = ScalingParams(kappa=args.kappa, tau=args.tau, c=tuple(sorted(c, reverse=True)),
                                        t=args.t, horizon=args.S, ds=args.ds, c_tail=tail)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        config.pop("params", None)
        config["c"] = list(args.c)
        config["c_tail"] = tail
    return config


def _clean(obj):
    """Replace non-finite floats by None so the report is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def _probes(args, default) -> list[float]:
    return list(args.probe_qs) if args.probe_qs is not None else list(default)


def cmd_trace_walk(args) -> tuple[list[CheckReport], dict]:
    x = args.weights
    qs = _probes(args, [0.5, 1.0, 2.0])
    traces = []
    mismatches = 0
    for r in range(args.replicates):
        clocks = sample_clocks(x, RngStream(args.seed, r))
        schedule = merge_schedule(x, clocks)
        rows = []
        for q in qs:
            walk = WalkPath.build(x, clocks, q)
            dec = decompose_excursions(x, clocks, q)
            t = walk.jump_times
            mismatches += dec.ranges() != component_partition_at(schedule, q)
            rows.append({"q": q, "jump_times": t.tolist(), "jump_sizes": walk.jump_sizes.tolist(),
                         "Z_left": walk.value(t, left=True).tolist(), "Z": walk.value(t).tolist(),
                         "B_left": walk.reflected(t, left=True).tolist(),
                         "B": walk.reflected(t).tolist(),
                         **dec.to_dict()})
        traces.append({"replicate": r, "labels": clocks.pi.tolist(),
                       "order_stats": clocks.order_stats.tolist(), "probes": rows,
                       "merges": schedule.to_dict()["events"]})
    check = CheckReport("walk_vs_schedule", args.replicates, float(mismatches), float("nan"),
                        mismatches == 0, claim=ex.PARTITIONS)
    return [check], {"traces": traces}


def cmd_simulate_forests(args) -> tuple[list[CheckReport], dict]:
    x = args.weights
    mismatches = 0
    sample = None
    for r in range(args.replicates):
        gen = RngStream(args.seed, r).generator()
        clocks = sample_clocks(x, gen)
        schedule = merge_schedule(x, clocks)
        f1 = evolve_f1(x, clocks, schedule, gen)
        if args.probe_qs is not None:
            qs = args.probe_qs
        else:
            top = 1.2 * schedule.events[-1].q_star if schedule.events else 1.0
            qs = np.sort(gen.uniform(0.0, top, size=20))
        f0_edges = {}
        for q in qs:
            if q <= 0:
                continue
            blocks = ranges_to_blocks(component_partition_at(schedule, q))
            f0 = build_f0_snapshot(x, clocks, q)
            mismatches += not (f0.components() == f1.components(q) == blocks)
            f0_edges[repr(float(q))] = f0.to_list()
        if r == 0:
            sample = {"labels": clocks.pi.tolist(), "f1": f1.to_list(), "f0": f0_edges}
    check = CheckReport("partition_equality", args.replicates, float(mismatches), float("nan"),
                        mismatches == 0, claim=ex.PARTITIONS)
    return [check], {"replicate_0": sample}


def cmd_verify_mosaic(args) -> tuple[list[CheckReport], dict]:
    x = args.weights
    qs = _probes(args, [0.5, 1.0, 2.0, 5.0])
    worst_rate = worst_tile = 0.0
    worst_process = None
    details = []
    for r in range(args.replicates):
        clocks = sample_clocks(x, RngStream(args.seed, r))
        table = activation_table(merge_schedule(x, clocks))
        for q in qs:
            rep = verify_rate_identity(x, clocks, table, q, raise_on_failure=False)
            tile = check_tiling(x, clocks, table, q)
            if rep.max_discrepancy >= worst_rate:
                worst_rate, worst_process = rep.max_discrepancy, rep.worst_process
            worst_tile = max(worst_tile, tile.max_discrepancy)
            details.append({"replicate": r, **rep.to_dict(), "tiling_discrepancy": tile.max_discrepancy,
                            "expected_surplus": expected_surplus_by_component(x, clocks, q)})
    tol = 1e-9
    checks = [
        CheckReport("rate_identity", args.replicates, worst_rate, float("nan"), worst_rate < tol,
                    claim=ex.RATE_CLAIM),
        CheckReport("tiling", args.replicates, worst_tile, float("nan"), worst_tile < tol,
                    claim=ex.AREA_CLAIM),
    ]
    return checks, {"max_discrepancy": worst_rate,
                    "worst_process": list(worst_process) if worst_process else None,
                    "probes": details}


def cmd_compare_oracle(args) -> tuple[list[CheckReport], dict]:
    x = args.weights
    qs = _probes(args, [ex.LN2])
    tests = len(qs) + max(len(qs) - 1, 0) + (len(qs) if x.n <= MAX_ENUMERATION_N else 0)
    alpha = bonferroni(args.alpha, tests)
    checks = []
    laws = {}
    for q in qs:
        if x.n <= MAX_ENUMERATION_N:
            checks.append(ex.oracle_self_check(x.n, q, args.replicates, args.seed, alpha, masses=x))
            laws[repr(q)] = enumerate_exact_law(x, q).to_dict()
        checks.append(ex.snapshot_law_check(x.n, q, args.replicates, args.seed, alpha, masses=x))
    for q1, q2 in zip(qs, qs[1:]):
        checks.extend(ex.process_law_check(x.n, q1, q2, args.replicates, args.seed, alpha, masses=x))
    return checks, {"per_test_alpha": alpha, "exact_laws": laws}


def cmd_multigraph(args) -> tuple[list[CheckReport], dict]:
    x = args.weights
    q = args.q_max if args.q_max is not None else _probes(args, [1.0])[-1]
    checks = ex.multigraph_mean_law(q=q, replicates=args.replicates, seed=args.seed, masses=x)
    extra = {"q": q}
    if args.event_log:
        proc = graph_process_g1(x, None, RngStream(args.seed, 0), q, multigraph=True)
        with open(args.event_log, "w") as fh:
            fh.write(proc.log.to_jsonl(proc.clocks))
        extra["event_log"] = args.event_log
    return checks, extra


def cmd_scaling(args) -> tuple[list[CheckReport], dict, str | None]:
    params = args.params
    paths = sample_continuum_paths(params, RngStream(args.seed, 0), args.replicates)
    mark_gen = RngStream(args.seed, 1).generator()
    states = []
    censored = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for levels in paths:
            st = extract_excursions_and_marks(levels[0], mark_gen)
            censored += st.censored
            states.append(st)
    largest = np.array([largest_excursion(p[0]) for p in paths])
    summary = {"mean_largest_excursion": float(largest.mean()),
               "mean_excursions": float(np.mean([s.X.size for s in states])),
               "mean_marks_largest": float(np.mean([s.Y[0] if s.Y.size else 0 for s in states])),
               "censored": int(censored), "c_tail": params.c_tail}
    checks = []
    if args.n is not None:
        # bridge: largest component with masses n^{-2/3} at time n^{1/3} + t
        disc = np.array([discrete_largest_component(args.n, params.t, RngStream(args.seed, ex.SECOND_SIDE + r))
                         for r in range(args.replicates)])
        rel = abs(disc.mean() - largest.mean()) / largest.mean()
        summary["mean_largest_component"] = float(disc.mean())
        standard = params.kappa == 1.0 and params.tau == 0.0 and not params.c
        if standard:
            checks.append(CheckReport(f"bridge_t{params.t:g}", args.replicates, float(rel),
                                      float("nan"), rel < 0.15, claim=ex.BRIDGE))
        summary["relative_gap"] = float(rel)
    csv_text = states_to_csv(states) if args.format == "csv" else None
    return checks, summary, csv_text


HANDLERS = {"trace-walk": cmd_trace_walk, "simulate-forests": cmd_simulate_forests,
            "verify-mosaic": cmd_verify_mosaic, "compare-oracle": cmd_compare_oracle,
            "multigraph": cmd_multigraph}


def emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = validate(args)
    except ConfigError as err:
        report = {"schema": SCHEMA, "command": args.command, "error": str(err)}
        sys.stderr.write(json.dumps(report) + "\n")
        return 2
    report = {"schema": SCHEMA, "command": args.command, "config": config}
    if args.replicates == 0:
        report.update(results=[], passed=True)
        emit(json.dumps(_clean(report), indent=2) + "\n", args.output)
        return 0
    csv_text = None
    if args.command == "scaling":
        checks, extra, csv_text = cmd_scaling(args)
    else:
        checks, extra = HANDLERS[args.command](args)
    passed = all(c.passed for c in checks)
    report.update(results=[c.to_dict() for c in checks], passed=passed, data=extra)
    if csv_text is not None:
        emit(csv_text, args.output)
        sys.stderr.write(json.dumps(_clean({k: report[k] for k in ("schema", "command", "results",
                                                                  "passed")})) + "\n")
    else:
        emit(json.dumps(_clean(report), indent=2) + "\n", args.output)
    return 0 if passed else 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
