"""Command-line front end.

Subcommands:
  analyze-matrix  spectrum, dominant set, hyperbolicity, resonance verdicts
  benford         conformance report for a flow signal, synthetic signal, or CSV data
  example         scripted demonstration scenarios with checked expectations
  census          Monte Carlo resonance census over a random-matrix ensemble

Exit codes: 0 success / expectation met, 2 usage or parse error,
3 numeric degradation (partial report), 4 expectation failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, Tolerances, VerdictThresholds, load_config
from .dataio import load_matrix, parse_exact_spectrum, write_digit_csv, write_ecdf_csv
from .demos import EXAMPLE_IDS, run_example
from .errors import BenflowError, SignalOverflowError, UsageError
from .flowsignal import (
    NormOnFlow,
    Observable,
    ObservableOnFlow,
    Synthetic,
    benford_report_from_samples,
    benford_verdict,
    load_signal_csv,
)
from .genericity import EnsembleSpec, resonance_census
from .matrixcore import is_hyperbolic, spectrum
from .resonance import is_b_nonresonant, is_exp_b_nonresonant, is_exp_nonresonant_algebraic
from .significand import digit_law_pmf
from .udmod1 import SamplingGrid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_EXPECTATION = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benflow",
        description="Benford conformance analysis for linear flows",
    )
    parser.add_argument("--version", action="version", version=f"benflow {__version__}")
    parser.add_argument("--base", type=int, help="significand base b >= 2 (default 10)")
    parser.add_argument("--horizon", type=float, help="sampling horizon T (default 1e4)")
    parser.add_argument("--step", type=float, help="sampling step (default 1e-2)")
    parser.add_argument("--seed", type=int, help="seed for randomized commands")
    parser.add_argument("--out", type=Path, help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    parser.add_argument("--config", type=Path, help="JSON config mirroring RunConfig fields")

    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze-matrix", help="spectral and resonance analysis of a generator")
    p_analyze.add_argument("matrix", type=Path, help="matrix file (CSV rows or JSON)")

    p_benford = sub.add_parser("benford", help="Benford conformance verdict for a signal")
    source = p_benford.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", type=Path, help="generator matrix file")
    source.add_argument("--synthetic", metavar="SPEC", help="r=R,k=K,modes=w:u[,w:u...]")
    source.add_argument("--signal-csv", type=Path, help="two-column (t, value) CSV")
    p_benford.add_argument("--observable", type=Path, help="observable coefficient matrix file")
    p_benford.add_argument("--norm", choices=("spectral", "frobenius", "max"), help="use a norm signal")
    p_benford.add_argument("--digits-csv", type=Path, help="write per-digit frequencies here")
    p_benford.add_argument("--ecdf-csv", type=Path, help="write significand ECDF samples here")

    p_example = sub.add_parser("example", help="run a scripted demonstration scenario")
    p_example.add_argument("id", help=f"one of: {', '.join(EXAMPLE_IDS)}")

    p_census = sub.add_parser("census", help="random-matrix resonance census")
    p_census.add_argument("--dim", type=int, required=True)
    p_census.add_argument("--n", type=int, required=True)
    p_census.add_argument("--dist", default="gaussian", help="gaussian | uniform | int<m>")
    p_census.add_argument("--tol", type=float, default=1e-8)
    p_census.add_argument("--height", type=int, default=8)
    return parser


def _merge_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    overrides = {}
    if args.base is not None:
        overrides["base"] = args.base
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
    if args.step is not None:
        overrides["step"] = args.step
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.format is not None:
        overrides["output_format"] = args.format
    return replace(cfg, **overrides) if overrides else cfg


def _emit(text: str, out: Path | None) -> None:
    if out:
        out.write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# analyze-matrix


def _complex_dict(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _cmd_analyze(args, cfg: RunConfig) -> int:
    matrix, annotation = load_matrix(args.matrix)
    info = spectrum(matrix, cfg.tolerances.eigen_cluster)
    eigs = [z for p in info.points for z in [p.z] * p.m]
    report = {
        "dim": int(matrix.shape[0]),
        "eigenvalues": [
            {**_complex_dict(p.z), "multiplicity": p.m, "jordan_index": p.k} for p in info.points
        ],
        "r": info.r,
        "kmax": info.kmax,
        "dominant": [_complex_dict(p.z) for p in info.dominant],
        "hyperbolic": is_hyperbolic(matrix, cfg.tolerances.hyperbolicity),
        "algebraic_shortcut_nonresonant": is_exp_nonresonant_algebraic(
            eigs, cfg.tolerances.hyperbolicity
        ),
        "notes": list(info.notes),
    }
    if annotation is not None:
        exact_set = parse_exact_spectrum(annotation)
        verdict = is_exp_b_nonresonant(exact_set, cfg.base)
        report["exact"] = {
            "base": cfg.base,
            "resonant": verdict.resonant,
            "witness": (
                {
                    "kind": verdict.witness.kind,
                    "q": verdict.witness.q,
                    "p": list(verdict.witness.p),
                }
                if verdict.witness
                else None
            ),
            "assumptions": list(verdict.assumptions),
            "detail": verdict.detail,
        }
    if cfg.output_format == "csv":
        lines = ["re,im,multiplicity,jordan_index"]
        for p in info.points:
            lines.append(f"{p.z.real:.12g},{p.z.imag:.12g},{p.m},{p.k}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# benford


def _parse_synthetic(text: str) -> Synthetic:
    fields = dict(part.split("=", 1) for part in text.split(",") if "=" in part)
    try:
        r = float(fields.get("r", "0"))
        k = int(fields.get("k", "0"))
        modes_text = fields.get("modes", "0:1")
        modes = tuple(
            (float(w), float(u)) for w, u in (m.split(":") for m in modes_text.split(";") if m)
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad synthetic spec {text!r}: {exc}") from None
    return Synthetic(r=r, k=k, modes=modes)


def _cmd_benford(args, cfg: RunConfig) -> int:
    thresholds = cfg.thresholds
    if args.signal_csv:
        _, values = load_signal_csv(args.signal_csv)
        report = benford_report_from_samples(values, cfg.base, thresholds, cfg.weyl_k)
    else:
        if args.synthetic:
            spec = _parse_synthetic(args.synthetic)
        else:
            matrix, _ = load_matrix(args.matrix)
            if args.observable:
                obs_matrix, _ = load_matrix(args.observable)
                spec = ObservableOnFlow(matrix, Observable(obs_matrix))
            else:
                spec = NormOnFlow(matrix, args.norm or "spectral")
        grid = SamplingGrid(T=cfg.horizon, step=cfg.step)
        report = benford_verdict(spec, cfg.base, grid, thresholds, cfg.weyl_k)
    if args.digits_csv and report.digit_histogram is not None:
        write_digit_csv(args.digits_csv, report.digit_histogram, digit_law_pmf(report.base))
    if args.ecdf_csv and report.ecdf_quantiles:
        write_ecdf_csv(args.ecdf_csv, report.ecdf_quantiles, report.base)
    if cfg.output_format == "csv" and report.digit_histogram is not None:
        freqs = report.digit_histogram.frequencies()
        pmf = digit_law_pmf(report.base)
        lines = ["digit,observed,target"]
        for d in range(1, report.base):
            lines.append(f"{d},{freqs[d - 1]:.10g},{pmf[d - 1]:.10g}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(json.dumps(report.to_dict(), indent=2), args.out)
    return EXIT_NUMERIC if report.truncated_at is not None else EXIT_OK


# ---------------------------------------------------------------------------
# example and census


def _cmd_example(args, cfg: RunConfig) -> int:
    result = run_example(args.id, cfg)
    _emit(json.dumps(result.to_dict(), indent=2), args.out)
    return EXIT_OK if result.passed else EXIT_EXPECTATION


def _cmd_census(args, cfg: RunConfig) -> int:
    spec = EnsembleSpec(d=args.dim, distribution=args.dist, N=args.n, seed=cfg.seed)
    report = resonance_census(spec, cfg.base, args.tol, args.height)
    if cfg.output_format == "csv":
        d = report.to_dict()
        header = ",".join(d.keys())
        row = ",".join(str(v) for v in d.values())
        _emit(f"{header}\n{row}", args.out)
    else:
        _emit(report.to_json(), args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        cfg = _merge_config(args)
        if args.command == "analyze-matrix":
            return _cmd_analyze(args, cfg)
        if args.command == "benford":
            return _cmd_benford(args, cfg)
        if args.command == "example":
            return _cmd_example(args, cfg)
        if args.command == "census":
            return _cmd_census(args, cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except SignalOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (BenflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
