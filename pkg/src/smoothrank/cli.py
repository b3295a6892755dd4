"""Command-line interface.

Subcommands: train, score, eval, splits, size-sweep, dim-sweep, generate.
All randomness flows from --seed, so reruns with identical arguments
produce byte-identical outputs. Exit code 0 on success; errors print a
diagnostic line on stderr and exit nonzero.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .concordance import concordance_index
from .data import impute_knn, load_csv, save_csv
from .experiments import (SplitPlan, emit_report, run_dimensionality_sweep,
                          run_random_splits, run_size_sweep)
from .model import load_model, save_model, score_dataset, train
from .synthetic import SyntheticConfig, generate


def _add_dataset_args(p):
    p.add_argument("dataset", help="survival dataset CSV")
    p.add_argument("--time-col", default="time", help="survival time column")
    p.add_argument("--event-col", default="event", help="event indicator column (0/1)")
    p.add_argument("--feature-cols", default="rest",
                   help='comma-separated feature columns, or "rest" (default)')
    p.add_argument("--impute", choices=["none", "knn5"], default="none",
                   help="fill missing values before the experiment")


def _load_dataset(args):
    cols = None if args.feature_cols == "rest" else [
        c.strip() for c in args.feature_cols.split(",") if c.strip()
    ]
    ds = load_csv(args.dataset, time_col=args.time_col, event_col=args.event_col,
                  feature_cols=cols)
    if args.impute == "knn5":
        ds = impute_knn(ds, k=5)
    return ds


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="smoothrank",
        description="Ensemble bipartite-ranking risk models for censored survival data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and write it as JSON")
    _add_dataset_args(p)
    p.add_argument("--out", required=True, help="output model file")

    p = sub.add_parser("score", help="score a dataset with a trained model")
    _add_dataset_args(p)
    p.add_argument("--model", required=True, help="model file from `train`")
    p.add_argument("--out", required=True, help="output scores CSV")

    p = sub.add_parser("eval", help="concordance index of scores against a dataset")
    _add_dataset_args(p)
    p.add_argument("--scores", required=True, help="scores CSV from `score`")

    p = sub.add_parser("splits", help="repeated random train/test split experiment")
    _add_dataset_args(p)
    p.add_argument("--n-splits", type=int, default=100)
    p.add_argument("--train-fraction", type=float, default=2.0 / 3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("size-sweep", help="training-size sweep with fixed test sets")
    _add_dataset_args(p)
    p.add_argument("--sizes", required=True, type=_int_list,
                   help="comma-separated training-set sizes")
    p.add_argument("--draws", type=int, default=20, help="training draws per size")
    p.add_argument("--reps", type=int, default=10, help="outer repetitions")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("dim-sweep", help="synthetic dimensionality sweep")
    p.add_argument("--feature-counts", required=True, type=_int_list,
                   help="comma-separated feature counts")
    p.add_argument("--replicates", type=int, default=20)
    p.add_argument("--n-records", type=int, default=400)
    p.add_argument("--censoring", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("generate", help="write one synthetic dataset as CSV")
    p.add_argument("--n-records", type=int, default=400)
    p.add_argument("--n-features", type=int, required=True)
    p.add_argument("--censoring", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    return parser


def _cmd_train(args):
    model = train(_load_dataset(args))
    save_model(model, args.out)
    print(f"trained on {args.dataset}: {len(model.surviving)} of "
          f"{model.n_features} features kept, threshold "
          f"{model.threshold_spec.threshold:g} -> {args.out}")


def _cmd_score(args):
    ds = _load_dataset(args)
    model = load_model(args.model)
    if model.feature_names and tuple(ds.feature_names) != tuple(model.feature_names):
        raise ValueError("dataset feature columns do not match the model's")
    scores = score_dataset(model, ds)
    with open(args.out, "w") as f:
        f.write("index,score\n")
        for i, s in enumerate(scores):
            f.write(f"{i},{float(s)!r}\n")
    print(f"scored {ds.n_records} records -> {args.out}")


def _cmd_eval(args):
    ds = _load_dataset(args)
    with open(args.scores) as f:
        header = f.readline().strip().split(",")
        i_score = header.index("score")
        scores = np.array([float(line.split(",")[i_score]) for line in f])
    if scores.size != ds.n_records:
        raise ValueError(f"{scores.size} scores for {ds.n_records} records")
    ci = concordance_index(scores, ds.times, ds.events)
    print(f"concordance index: {ci:.6g}")


def _cmd_splits(args):
    plan = SplitPlan(train_fraction=args.train_fraction, n_splits=args.n_splits,
                     seed=args.seed)
    result = run_random_splits(_load_dataset(args), plan)
    emit_report(result, args.out, fmt=args.format)
    print(f"mean ci {result.mean_ci:.4f} over {len(result.per_run_ci)} splits "
          f"({result.redraws} redraws), mean surviving features "
          f"{result.surviving_features_mean:.1f} -> {args.out}")


def _cmd_size_sweep(args):
    rows = run_size_sweep(_load_dataset(args), args.sizes, draws_per_size=args.draws,
                          outer_reps=args.reps, test_fraction=args.test_fraction,
                          seed=args.seed)
    emit_report(rows, args.out, fmt=args.format, key_name="size")
    for row in rows:
        print(f"size {row.key}: mean ci {row.mean_ci:.4f} "
              f"(sd {row.sd_ci:.4f}, {row.n_models} models)")


def _cmd_dim_sweep(args):
    base = SyntheticConfig(n_features=1, n_records=args.n_records,
                           censoring_fraction=args.censoring, seed=args.seed)
    rows = run_dimensionality_sweep(base, args.feature_counts,
                                    replicates=args.replicates)
    emit_report(rows, args.out, fmt=args.format, key_name="m")
    for row in rows:
        print(f"m {row.key}: mean ci {row.mean_ci:.4f} "
              f"(sd {row.sd_ci:.4f}, {row.n_models} models)")


def _cmd_generate(args):
    cfg = SyntheticConfig(n_features=args.n_features, n_records=args.n_records,
                          censoring_fraction=args.censoring, seed=args.seed)
    save_csv(generate(cfg), args.out)
    print(f"wrote {args.n_records} x {args.n_features} synthetic dataset -> {args.out}")


_COMMANDS = {
    "train": _cmd_train,
    "score": _cmd_score,
    "eval": _cmd_eval,
    "splits": _cmd_splits,
    "size-sweep": _cmd_size_sweep,
    "dim-sweep": _cmd_dim_sweep,
    "generate": _cmd_generate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
