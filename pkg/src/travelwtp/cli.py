"""Command-line entry point.

Exit codes: 0 success, 2 bad input data or configuration, 3 degenerate
estimate (too few bands, no variation, a group with no acceptors).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import pipeline
from .config import RunConfig, SimulationConfig
from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateDesignError,
    DegenerateGroupError,
    DomainError,
    InsufficientDataError,
    ScenarioError,
    TravelWTPError,
    UnboundedWTPError,
)
from .simulator import describe_generator, run_joint, run_revealed, run_stated, summarize, write_replications_csv

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DEGENERATE = 3


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def to_json(report: dict) -> str:
    return json.dumps(_clean(report), indent=2) + "\n"


def _flatten(report, prefix=""):
    for key, value in report.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                yield from _flatten(item, f"{name}[{i}].")
        else:
            yield name, value


def to_text(command: str, report: dict) -> str:
    lines = [f"travelwtp {command}"]
    headlines = report.get("headlines")
    if headlines:
        lines.append("")
        lines.append("headline numbers:")
        for h in headlines:
            flag = "within-tolerance" if h["within_tolerance"] else "out-of-tolerance"
            tol = f"{h['tolerance']:g}" + (" rel" if h["tolerance_kind"] == "relative" else "")
            lines.append(f"  [{flag}] {h['name']}: {h['value']:.6g} (target {h['target']:.6g} +/- {tol})")
        lines.append("")
    for name, value in _flatten({k: v for k, v in report.items() if k != "headlines"}):
        if isinstance(value, float):
            value = f"{value:.10g}"
        lines.append(f"{name} = {value}")
    return "\n".join(lines) + "\n"


def _emit(command, report, args):
    text = to_text(command, report)
    structured = to_json(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{command}.json").write_text(structured)
        (out / f"{command}.txt").write_text(text)
    sys.stdout.write(structured if args.format == "structured" else text)


def _run_config(args) -> RunConfig:
    if args.config is None:
        raise ConfigError("--config is required")
    return RunConfig.from_file(args.config)


def cmd_fit(args):
    return pipeline.fit_stage(_run_config(args))


def cmd_rwtp(args):
    return pipeline.rwtp_stage(_run_config(args))


def cmd_swtp(args):
    return pipeline.swtp_stage(_run_config(args))


def cmd_reconcile(args):
    return pipeline.reconcile_stage(_run_config(args))


def cmd_replicate_paper(args):
    return pipeline.replicate_paper(args.config or pipeline.SANMARCOS_CONFIG)


def cmd_simulate(args):
    if args.config is None:
        raise ConfigError("--config with a scenario file is required")
    sim = SimulationConfig.from_file(args.config)
    if args.seed is not None:
        sim.scenario = replace(sim.scenario, seed=args.seed)
    sc = sim.scenario
    if sim.mode == "revealed":
        rows = run_revealed(sc, sim.replications, sim.workers)
        summary = summarize(rows, "rate_per_mile", sc.true_rate_per_mile)
    elif sim.mode == "stated":
        rows = run_stated(sc, sim.groups, sim.replications, sim.workers)
        summary = summarize(rows, "stated_mean_wtp", 1.0 / sc.true_rate_per_dollar)
    else:
        rows = run_joint(sc, sim.groups, sim.replications, sim.workers)
        summary = summarize(rows, "ratio_swtp_rwtp", 1.0)
    report = {
        "mode": sim.mode,
        "seed": sc.seed,
        "generator": describe_generator(sc.generator),
        "replications": sim.replications,
        "quantity": summary.quantity,
        "truth": summary.truth,
        "n_used": summary.n_used,
        "n_excluded": summary.n_excluded,
        "mean": summary.mean,
        "sd": summary.sd,
        "standard_error": summary.standard_error,
        "bias": summary.bias,
        "relative_bias": summary.relative_bias,
        "z_score": summary.z_score,
    }
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_replications_csv(rows, Path(args.out) / "replications.csv")
    return report


COMMANDS = {
    "fit": cmd_fit,
    "rwtp": cmd_rwtp,
    "swtp": cmd_swtp,
    "reconcile": cmd_reconcile,
    "simulate": cmd_simulate,
    "replicate-paper": cmd_replicate_paper,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration or scenario file")
    common.add_argument("--out", metavar="DIR", help="write <command>.json and <command>.txt here")
    common.add_argument("--seed", type=int, help="override the scenario seed (simulate)")
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="what to print on stdout")
    parser = argparse.ArgumentParser(prog="travelwtp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (InsufficientDataError, DegenerateDesignError, DegenerateGroupError, UnboundedWTPError) as exc:
        print(f"travelwtp {args.command}: degenerate estimate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DataFormatError, ConfigError, ScenarioError, DomainError, TravelWTPError) as exc:
        print(f"travelwtp {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    _emit(args.command, report, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
