"""Command-line interface.

Subcommands: bench (Monte Carlo benchmark from a config file plus flag
overrides), classify (split one dataset, print per-observation decisions),
diagnose (angle-condition scan), synth (write generated data as CSV).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .diagnostics import angle_condition_scan
from .errors import DataError, NumericalError, SrckitError
from .harness import (
    FEATURE_CSV,
    SIMILARITY_CSV,
    BenchConfig,
    holdout_split,
    load_dataset,
    parse_config_file,
    run_benchmark,
    save_feature_csv,
)
from .report import SINKS, emit_report
from .solvers import PATH_SOLVERS, StopCriteria, full_regression
from .classifier import src_classify
from .linalg import normalize_columns
from .synth import cone_model, subspace_model

USAGE_ERROR, DATA_ERROR, NUMERICAL_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _add_common(p):
    p.add_argument("--dataset", help="dataset file path")
    p.add_argument("--format", choices=[FEATURE_CSV, SIMILARITY_CSV], default=None)
    p.add_argument("--similarity", action="store_true", help="treat the dataset as a square similarity matrix")
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--sparsity-max", type=int, default=None)
    p.add_argument("--out-dir", default=".", help="output directory")


def build_parser() -> _Parser:
    parser = _Parser(prog="srckit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    bench = sub.add_parser("bench", help="run the benchmark protocol")
    _add_common(bench)
    bench.add_argument("--config", help="flat key = value config file")
    bench.add_argument("--solver", help="comma-separated solvers (omp,homotopy,marginal,full)")
    bench.add_argument("--replicates", type=int, default=None)
    bench.add_argument("--baseline-dims", type=int, default=None)
    bench.add_argument("--knn-k", type=int, default=None)
    bench.add_argument("--split-fraction", type=float, default=None)
    bench.add_argument("--emit", default="json,csv,svg", help="comma-separated sinks: json,csv,svg")

    classify = sub.add_parser("classify", help="classify one hold-out split")
    _add_common(classify)
    classify.add_argument("--solver", default="omp", choices=sorted(PATH_SOLVERS) + ["full"])
    classify.add_argument("--split-fraction", type=float, default=0.5)

    diagnose = sub.add_parser("diagnose", help="scan the angle condition")
    _add_common(diagnose)
    diagnose.add_argument("--c-grid", default="10,20,30,40,50,60,70,80",
                          help="comma-separated candidate angles in degrees")
    diagnose.add_argument("--scan-sparsity", type=int, default=1,
                          help="submatrix size for the between-class part")
    diagnose.add_argument("--mc-samples", type=int, default=200)
    diagnose.add_argument("--mode", choices=["nearest", "reassign"], default="nearest")
    diagnose.add_argument("--split-fraction", type=float, default=0.5)

    synth = sub.add_parser("synth", help="generate synthetic data as CSV")
    _add_common(synth)
    synth.add_argument("--model", choices=["subspace", "cone"], required=True)
    synth.add_argument("--classes", type=int, default=5)
    synth.add_argument("--features", type=int, default=50)
    synth.add_argument("--per-class", type=int, default=50)
    synth.add_argument("--subspace-dim", type=int, default=4)
    synth.add_argument("--noise-sigma", type=float, default=0.0)
    synth.add_argument("--within-angle", type=float, default=5.0, help="degrees")
    synth.add_argument("--between-angle", type=float, default=90.0, help="degrees")
    synth.add_argument("--out", help="output CSV path (default <out-dir>/<model>.csv)")
    return parser


def _resolve_format(args) -> str:
    if args.similarity:
        return SIMILARITY_CSV
    return args.format or FEATURE_CSV


def _load(args):
    if not args.dataset:
        raise DataError("--dataset is required")
    return load_dataset(args.dataset, _resolve_format(args))


def _cmd_bench(args) -> int:
    values = parse_config_file(args.config) if args.config else {}
    overrides = {
        "dataset": args.dataset,
        "sparsity_max": args.sparsity_max,
        "baseline_dims": args.baseline_dims,
        "knn_k": args.knn_k,
        "monte_carlo": args.replicates,
        "split_fraction": args.split_fraction,
        "master_seed": args.seed,
        "solvers": tuple(s.strip() for s in args.solver.split(",")) if args.solver else None,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.similarity or args.format == SIMILARITY_CSV:
        values["similarity_input"] = True
    config = BenchConfig(**values).validate()
    if not config.dataset:
        raise DataError("no dataset given (flag --dataset or config key dataset)")
    report = run_benchmark(config)
    sinks = [s.strip() for s in args.emit.split(",") if s.strip()]
    bad = [s for s in sinks if s not in SINKS]
    if bad:
        raise SystemExit(USAGE_ERROR)
    paths = emit_report(report, sinks, args.out_dir)
    for p in paths:
        print(p)
    return 0


def _cmd_classify(args) -> int:
    data = _load(args)
    seed = args.seed if args.seed is not None else 0
    train, test = holdout_split(data, args.split_fraction, seed)
    Xtr = normalize_columns(train.features)
    Xte = normalize_columns(test.features)
    K = max(train.n_classes, test.n_classes)
    cap = args.sparsity_max if args.sparsity_max is not None else 100
    stop = StopCriteria(cap, 1e-8, 1e-8)
    wrong = 0
    print("index true predicted residuals")
    for j in range(Xte.shape[1]):
        x = Xte[:, j]
        if args.solver == "full":
            beta = full_regression(Xtr, x).beta
        else:
            path = PATH_SOLVERS[args.solver](Xtr, x, stop)
            beta = path.beta_at(cap)
        decision = src_classify(Xtr, beta, train.labels, x, K)
        wrong += decision.label != test.labels[j]
        residuals = " ".join(f"{v:.4f}" for v in decision.class_residuals)
        print(f"{j} {test.labels[j]} {decision.label} {residuals}")
    print(f"# error {wrong / Xte.shape[1]:.4f} ({wrong}/{Xte.shape[1]})")
    return 0


def _cmd_diagnose(args) -> int:
    data = _load(args)
    seed = args.seed if args.seed is not None else 0
    train, test = holdout_split(data, args.split_fraction, seed)
    train.features = normalize_columns(train.features)
    test.features = normalize_columns(test.features)
    c_grid = np.deg2rad([float(v) for v in args.c_grid.split(",")])
    result = angle_condition_scan(
        train, test, c_grid, s=args.scan_sparsity,
        mode=args.mode, n_samples=args.mc_samples, seed=seed,
    )
    print(f"q_hat {result.q_hat:.4f} over {test.n_obs} test pairs "
          f"(mode={result.mode}, s={result.sparsity}, samples={result.n_samples})")
    for ci, c in enumerate(result.c_grid):
        both = np.mean(result.within_ok[:, ci] & result.between_ok[:, ci])
        print(f"c={np.rad2deg(c):5.1f}deg within={result.within_ok[:, ci].mean():.3f} "
              f"between={result.between_ok[:, ci].mean():.3f} both={both:.3f}")
    out = Path(args.out_dir) / "diagnose.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({
        "q_hat": result.q_hat,
        "c_grid_deg": np.rad2deg(result.c_grid).tolist(),
        "satisfied": result.satisfied.tolist(),
        "within_ok": result.within_ok.tolist(),
        "between_ok": result.between_ok.tolist(),
        "mode": result.mode,
        "sparsity": result.sparsity,
        "n_samples": result.n_samples,
        "seed": result.seed,
    }, indent=2) + "\n")
    print(out)
    return 0


def _cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.model == "subspace":
        data = subspace_model(
            args.classes, args.features, args.subspace_dim,
            args.per_class, args.noise_sigma, seed,
        )
    else:
        data = cone_model(
            args.classes, args.features,
            float(np.deg2rad(args.within_angle)), float(np.deg2rad(args.between_angle)),
            args.per_class, seed,
        )
    out = Path(args.out) if args.out else Path(args.out_dir) / f"{args.model}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_feature_csv(data, out)
    print(out)
    return 0


_COMMANDS = {
    "bench": _cmd_bench,
    "classify": _cmd_classify,
    "diagnose": _cmd_diagnose,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"srckit: numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except (SrckitError, OSError, ValueError) as exc:
        print(f"srckit: data error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
