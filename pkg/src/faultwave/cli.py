"""Command-line front end.

Subcommands: simulate, analyze, fit, metrics, validate, report. Reports are
JSON by default (CSV key-value on request); the report subcommand also emits
plot-ready CSV tables and rendered PNG figures next to the document. Exit
codes: 0 success, 1 data or domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import FaultExtrema, characterize_fault
from .config import (
    CONFIG_ENV_VAR,
    load_config,
    sim_config_from_config,
)
from .errors import DomainError
from .pipeline import parse_log, simulate_experiment, write_log
from .report import (
    analyze_log,
    build_document,
    emit_plot_data,
    sha256_digest,
    write_json,
    write_kv_csv,
)

_EXTREMA_KEYS = ("v_source_v", "v_clamp_v", "i_nom_a", "v_short_min_v", "i_max_a")


def _add_common(sub: argparse.ArgumentParser, *, inputs: bool = True,
                multi_input: bool = False) -> None:
    if inputs:
        sub.add_argument("--input", action="append" if multi_input else "store",
                         required=True, help="input file path"
                         + (" (repeatable)" if multi_input else ""))
    sub.add_argument("--output", help="output path (default: stdout)")
    sub.add_argument("--config", help=f"TOML config path (else ${CONFIG_ENV_VAR}, else defaults)")
    sub.add_argument("--scenario",
                     choices=["transient_dominant", "steady_state", "balanced"],
                     help="calibration weighting scenario")
    sub.add_argument("--format", choices=["json", "csv"], default="json",
                     help="report serialization (default json)")
    sub.add_argument("--seed", type=int, help="simulation seed override")
    sub.add_argument("--bins", type=int, help="histogram bin count override")
    sub.add_argument("--window", type=int, help="STFT window length in samples")
    sub.add_argument("--hop", type=int, help="STFT hop length in samples")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faultwave",
        description="Simulate, ingest, fit, and score governed short-circuit "
                    "fault recordings.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="write a synthetic experiment log (CSV)")
    _add_common(p, inputs=False)
    p.set_defaults(func=_cmd_simulate)

    p = subs.add_parser("analyze", help="full analysis report for a log")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = subs.add_parser("fit", help="decay-model fit per trial")
    _add_common(p)
    p.set_defaults(func=_cmd_fit)

    p = subs.add_parser("metrics", help="bounded-fault report from declared extrema")
    _add_common(p)
    p.set_defaults(func=_cmd_metrics)

    p = subs.add_parser("validate", help="fidelity and calibration scores for a log")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = subs.add_parser("report", help="merged document plus plot tables and figures")
    _add_common(p, multi_input=True)
    p.set_defaults(func=_cmd_report)

    return parser


def _load_cfg(args: argparse.Namespace) -> dict:
    cfg = load_config(args.config)
    if getattr(args, "bins", None):
        cfg["fidelity"]["bins"] = args.bins
    if getattr(args, "window", None):
        cfg["fidelity"]["window_len"] = args.window
    if getattr(args, "hop", None):
        cfg["fidelity"]["hop_len"] = args.hop
    return cfg


def _emit(doc: dict, args: argparse.Namespace) -> None:
    if args.output is None:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    elif args.format == "csv":
        write_kv_csv(doc, args.output)
    else:
        write_json(doc, args.output)


def _input_digests(paths: list[str]) -> dict[str, str]:
    digests = {}
    for p in paths:
        if not Path(p).is_file():
            raise DomainError(f"input file not found: {p}")
        digests[Path(p).name] = sha256_digest(p)
    return digests


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    sim = sim_config_from_config(cfg, seed=args.seed)
    log = simulate_experiment(sim)
    if args.output is None:
        write_log(log, sys.stdout)
    else:
        write_log(log, args.output)
    return 0


def _analysis_document(args: argparse.Namespace, input_path: str) -> dict:
    cfg = _load_cfg(args)
    digests = _input_digests([input_path])
    log = parse_log(input_path)
    analysis = analyze_log(log, cfg, scenario=args.scenario)
    return build_document(analysis, digests)


def _cmd_analyze(args: argparse.Namespace) -> int:
    _emit(_analysis_document(args, args.input), args)
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    digests = _input_digests([args.input])
    log = parse_log(args.input)
    analysis = analyze_log(log, cfg, scenario=args.scenario)
    doc = {
        "metadata": build_document(analysis, digests)["metadata"],
        "fits": [
            {"trial": ta.trial_id,
             **(ta.fit.to_dict() if ta.fit is not None
                else {"error": "collapse transient unresolved at this sampling interval"})}
            for ta in analysis.trials
        ],
    }
    _emit(doc, args)
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    cfg = _load_cfg(args)
    digests = _input_digests([args.input])
    with open(args.input, "r", encoding="utf-8") as fh:
        try:
            declared = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"extrema file {args.input} is not valid JSON: {exc}") from None
    missing = [key for key in _EXTREMA_KEYS if key not in declared]
    if missing:
        raise DomainError(f"extrema file lacks keys: {', '.join(missing)}")
    k = float(declared.get("k_per_s", cfg["metrics"]["k_default_per_s"]))
    t_fault = float(declared.get("t_fault_s", cfg["metrics"]["t_fault_s"]))
    extrema = FaultExtrema(
        v_source=float(declared["v_source_v"]),
        v_clamp=float(declared["v_clamp_v"]),
        i_nom=float(declared["i_nom_a"]),
        v_short_min=float(declared["v_short_min_v"]),
        i_max_clap=float(declared["i_max_a"]),
        k_fit=k,
        t_fault=t_fault,
    )
    provenance = "declared" if "k_per_s" in declared else "default"
    report = characterize_fault(
        extrema, cfg["clamp"]["c_j_f"], int(cfg["clamp"]["n_clamp_diodes"]),
        k_provenance=provenance,
    )
    from datetime import datetime, timezone

    from . import __version__

    doc = {
        "metadata": {
            "tool": "faultwave",
            "version": __version__,
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "inputs": digests,
        },
        **report.to_dict(),
    }
    _emit(doc, args)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    full = _analysis_document(args, args.input)
    doc = {
        "metadata": full["metadata"],
        "spectral": {str(t["trial"]): t["spectral"] for t in full["trials"]},
        "calibration": full["calibration"],
        "warnings": full["warnings"],
    }
    _emit(doc, args)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    if args.output is None:
        raise DomainError("report requires --output (a directory)")
    cfg = _load_cfg(args)
    inputs = list(args.input)
    csv_inputs = [p for p in inputs if p.lower().endswith(".csv")]
    json_inputs = [p for p in inputs if not p.lower().endswith(".csv")]
    if len(csv_inputs) != 1:
        raise DomainError("report needs exactly one CSV log among its inputs")
    digests = _input_digests(inputs)

    log = parse_log(csv_inputs[0])
    analysis = analyze_log(log, cfg, scenario=args.scenario)
    doc = build_document(analysis, digests)

    merged = {}
    for p in json_inputs:
        with open(p, "r", encoding="utf-8") as fh:
            try:
                merged[Path(p).name] = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"cannot merge {p}: not valid JSON: {exc}") from None
    if merged:
        doc["merged"] = merged

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.format == "csv":
        write_kv_csv(doc, out_dir / "report.csv")
    else:
        write_json(doc, out_dir / "report.json")
    emit_plot_data(analysis, out_dir,
                   current_guard_a=cfg["fit"]["current_guard_a"])

    from .figures import render_figures

    render_figures(analysis, out_dir)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
