"""Command-line front end.

Subcommands:

  align     run the full pipeline and write the alignment as JSON
  probs     write the conditional measurement tables as TSV, one per setting
  spectrum  write the operator's spectral report as JSON
  bench     time joint versus per-factor simulation, CSV

Exit codes: 0 success, 1 invalid input, 2 convergence or size limit,
3 file I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import linalg
from .bench import format_csv, run_bench
from .errors import ConvergenceError, SizeError, ValidationError
from .matching import MatchConfig
from .measure import format_tables_tsv
from .netio import read_edge_list
from .operators import (hermitian_decompose, kron_support_connected, normality_report,
                        read_scores, stochastic_operator)
from .pea import DEFAULT_T, success_probability
from .pipeline import MAX_NETWORKS, MODELS, align_networks

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


def _phase_qubits(text: str) -> int:
    t = int(text)
    if not 2 <= t <= 12:
        raise argparse.ArgumentTypeError("phase qubits must lie in 2..12")
    return t


def _unit_float(text: str) -> float:
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError("min score must lie in [0, 1]")
    return x


def _add_run_flags(p: argparse.ArgumentParser, out_default: str) -> None:
    p.add_argument("--networks", nargs="+", required=True, metavar="PATH",
                   help=f"edge-list files, 2 to {MAX_NETWORKS}")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--phase-qubits", type=_phase_qubits, default=DEFAULT_T)
    p.add_argument("--model", choices=MODELS, default="closest-hermitian")
    p.add_argument("--scores", metavar="PATH", help="node-pair score TSV (pairs only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=out_default)
    p.add_argument("--tie-break", choices=("lowest-index",), default="lowest-index")
    p.add_argument("--min-score", type=_unit_float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qisorank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("align", help="align networks, write JSON"), "alignment.json")
    _add_run_flags(sub.add_parser("probs", help="write conditional tables"), "tables")
    _add_run_flags(sub.add_parser("spectrum", help="write spectral report"), "spectrum.json")
    bench = sub.add_parser("bench", help="joint vs per-factor timing")
    bench.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12, 16])
    bench.add_argument("--count", type=int, default=2, help="networks per run")
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--phase-qubits", type=_phase_qubits, default=DEFAULT_T)
    bench.add_argument("--out", help="CSV path (default: standard output)")
    return parser


def _load(args):
    if not 2 <= len(args.networks) <= MAX_NETWORKS:
        raise ValidationError(f"--networks takes 2 to {MAX_NETWORKS} files")
    if args.mode == "sampled" and args.shots < 1:
        raise ValidationError("--shots must be >= 1 in sampled mode")
    nets = [read_edge_list(p) for p in args.networks]
    names = [n.name for n in nets]
    if len(set(names)) != len(names):
        # Same file stem twice: keep them apart in the output.
        nets = [read_edge_list(p, name=f"{n.name}_{k + 1}")
                for k, (p, n) in enumerate(zip(args.networks, nets))]
    scores = None
    if args.scores:
        if len(nets) != 2:
            raise ValidationError("--scores is defined for network pairs only")
        scores = read_scores(args.scores, *nets)
    return nets, scores


def _run(args):
    nets, scores = _load(args)
    cfg = MatchConfig(tie_break=args.tie_break, min_score=args.min_score)
    run = align_networks(nets, model=args.model, mode=args.mode, t=args.phase_qubits,
                         shots=args.shots, seed=args.seed, scores=scores, cfg=cfg)
    return nets, run


def cmd_align(args) -> int:
    nets, run = _run(args)
    al = run.alignment
    doc = al.to_dict()
    doc["success_probability"] = run.outcome.success_probability
    doc["recovered_eigenvalue"] = run.outcome.recovered_eigenvalue
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"{len(al)} tuples aligned across {', '.join(al.networks)}")
    for nodes, score, prov in zip(al.tuples, al.scores, al.provenance):
        print(f"  {' - '.join(nodes)}\t{score:.4f}\t{prov}")
    ec = doc["edge_correctness"]
    print(f"edge_correctness: {'undefined' if ec is None else f'{ec:.4f}'}")
    print(f"success_probability: {run.outcome.success_probability:.6f}")
    for w in al.warnings:
        print(f"warning: {w}")
    return 0


def cmd_probs(args) -> int:
    nets, run = _run(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, tables in run.settings:
        path = out / f"{name}.tsv"
        path.write_text(format_tables_tsv(tables, nets), encoding="utf-8")
        print(f"wrote {path}")
    return 0


def spectrum_report(nets, model: str) -> dict:
    A = stochastic_operator(nets)
    hm = hermitian_decompose(A)
    rho = float(linalg.eig_oracle(hm.H).eigenvalues[0].real)
    norm = normality_report(A)
    probs = success_probability(A.matrix if model == "exact-stochastic" else hm.H)
    return {
        "networks": [n.name for n in nets],
        "model": model,
        "dimension": A.dim,
        "kronecker_support_connected": kron_support_connected(nets),
        "rho_H": rho,
        "rho_lower": hm.rho_lower,
        "rho_upper": hm.rho_upper,
        "rho_within_bounds": hm.rho_lower - 1e-12 <= rho <= hm.rho_upper + 1e-12,
        "rho_above_half": rho > 0.5,
        "scale_s": 1.0 if model == "exact-stochastic" else hm.scale_s,
        "S_is_zero": bool(np.max(np.abs(hm.S)) <= linalg.HERMITIAN_TOL),
        "normality": {
            "is_normal": norm.is_normal,
            "normality_defect": norm.normality_defect,
            "commutator_HS": norm.commutator_HS,
            "eig_alignment": None if np.isnan(norm.eig_alignment) else norm.eig_alignment,
        },
        "principal_success_probability": float(probs[0]),
        "success_probability": [float(p) for p in probs],
    }


def cmd_spectrum(args) -> int:
    nets, _ = _load(args)
    report = spectrum_report(nets, args.model)
    Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(f"rho(H) = {report['rho_H']:.6f} in [{report['rho_lower']:.6f}, "
          f"{report['rho_upper']:.6f}]")
    print(f"principal success probability = {report['principal_success_probability']:.6f}")
    return 0


def cmd_bench(args) -> int:
    if args.count < 2 or args.repetitions < 1 or min(args.sizes) < 3:
        raise ValidationError("bench needs --count >= 2, --repetitions >= 1, sizes >= 3")
    rows = run_bench(args.sizes, m=args.count, repetitions=args.repetitions,
                     t=args.phase_qubits)
    text = format_csv(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {"align": cmd_align, "probs": cmd_probs, "spectrum": cmd_spectrum,
            "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
