"""Experiment protocols: repeated random splits, training-size sweeps,
and dimensionality sweeps on synthetic data, plus report emission.

Every run is a deterministic function of (dataset, configuration, seed).
Randomness is drawn from per-run generators seeded by (seed, run index,
attempt), so the i-th run's result never depends on how many runs come
before or after it, and degenerate splits can be redrawn without
disturbing the stream of any other run.
"""

import csv
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .concordance import concordance_index
from .model import score_dataset, train
from .synthetic import derive_seed, generate

_MAX_SPLIT_ATTEMPTS = 100


@dataclass(frozen=True)
class SplitPlan:
    train_fraction: float = 2.0 / 3.0
    n_splits: int = 100
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.n_splits < 1:
            raise ValueError("n_splits must be positive")


@dataclass(frozen=True)
class ExperimentResult:
    per_run_ci: tuple
    per_run_surviving: tuple
    redraws: int
    config_echo: dict = field(repr=False)

    @property
    def mean_ci(self):
        return float(np.mean(self.per_run_ci))

    @property
    def surviving_features_mean(self):
        return float(np.mean(self.per_run_surviving))


@dataclass(frozen=True)
class SweepRow:
    key: int  # training size or feature count
    mean_ci: float
    sd_ci: float
    n_models: int
    redraws: int = 0


def _evaluate_split(dataset, train_idx, test_idx):
    """Train on one part, score the other; raises ValueError when the
    split is degenerate (untrainable part or no comparable test pair)."""
    model = train(dataset.subset(train_idx))
    test = dataset.subset(test_idx)
    scores = score_dataset(model, test)
    ci = concordance_index(scores, test.times, test.events)
    return ci, len(model.surviving)


def run_random_splits(dataset, plan):
    """Repeated random train/test splits: train on the larger part, report
    the test concordance index of each split. Degenerate splits are
    redrawn from the same run's stream, with the total redraw count
    recorded."""
    n = dataset.n_records
    n_train = round(plan.train_fraction * n)
    if n_train < 2 or n - n_train < 2:
        raise ValueError("dataset too small for the requested split fraction")

    cis, survivors, redraws = [], [], 0
    for i in range(plan.n_splits):
        for attempt in range(_MAX_SPLIT_ATTEMPTS):
            rng = np.random.default_rng([plan.seed, i, attempt])
            perm = rng.permutation(n)
            try:
                ci, n_surv = _evaluate_split(dataset, perm[:n_train], perm[n_train:])
            except ValueError:
                redraws += 1
                continue
            cis.append(ci)
            survivors.append(n_surv)
            break
        else:
            raise ValueError(f"split {i}: no usable split after "
                             f"{_MAX_SPLIT_ATTEMPTS} attempts")

    return ExperimentResult(
        per_run_ci=tuple(cis),
        per_run_surviving=tuple(survivors),
        redraws=redraws,
        config_echo={
            "protocol": "random-splits",
            "n_records": n,
            "n_features": dataset.n_features,
            "train_fraction": plan.train_fraction,
            "n_splits": plan.n_splits,
            "seed": plan.seed,
        },
    )


def run_size_sweep(dataset, sizes, draws_per_size=20, outer_reps=10,
                   test_fraction=0.2, seed=0):
    """Training-size sweep with a fixed held-out test set per repetition.

    Each outer repetition holds out a fresh test set, then draws
    `draws_per_size` training subsets of every size from the remainder;
    all models of one repetition are judged on the same test set. Returns
    one row per size, averaging over outer_reps * draws_per_size models.
    """
    n = dataset.n_records
    n_test = round(test_fraction * n)
    if n_test < 2:
        raise ValueError("test fraction leaves too few test records")
    pool_size = n - n_test
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 2 for s in sizes):
        raise ValueError("sizes must be positive")
    if max(sizes) > pool_size:
        raise ValueError(f"largest size {max(sizes)} exceeds the {pool_size} "
                         "records left after the test holdout")

    by_size = {s: [] for s in sizes}
    redraws = {s: 0 for s in sizes}
    for rep in range(outer_reps):
        rng = np.random.default_rng([seed, rep])
        perm = rng.permutation(n)
        test_idx, pool = perm[:n_test], perm[n_test:]
        for s in sizes:
            for d in range(draws_per_size):
                for attempt in range(_MAX_SPLIT_ATTEMPTS):
                    draw_rng = np.random.default_rng([seed, rep, s, d, attempt])
                    train_idx = pool[draw_rng.choice(pool_size, size=s, replace=False)]
                    try:
                        ci, _ = _evaluate_split(dataset, train_idx, test_idx)
                    except ValueError:
                        redraws[s] += 1
                        continue
                    by_size[s].append(ci)
                    break
                else:
                    raise ValueError(f"size {s}: no usable training draw after "
                                     f"{_MAX_SPLIT_ATTEMPTS} attempts")

    return [
        SweepRow(key=s, mean_ci=float(np.mean(by_size[s])),
                 sd_ci=float(np.std(by_size[s], ddof=1)), n_models=len(by_size[s]),
                 redraws=redraws[s])
        for s in sizes
    ]


def run_dimensionality_sweep(base, counts, replicates=20):
    """Synthetic dimensionality sweep: for every feature count, generate
    `replicates` datasets, split each into equal train/test halves, and
    average the test concordance index."""
    counts = [int(m) for m in counts]
    rows = []
    for m in counts:
        cis = []
        for rep in range(replicates):
            cfg = replace(base, n_features=m, seed=derive_seed(base.seed, m, rep))
            ds = generate(cfg)
            half = ds.n_records // 2
            split_rng = np.random.default_rng([base.seed, m, rep, 1])
            perm = split_rng.permutation(ds.n_records)
            ci, _ = _evaluate_split(ds, perm[:half], perm[half:])
            cis.append(ci)
        rows.append(SweepRow(key=m, mean_ci=float(np.mean(cis)),
                             sd_ci=float(np.std(cis, ddof=1)), n_models=len(cis)))
    return rows


def _fmt(x):
    """6 significant digits, plain decimal where possible."""
    return format(float(x), ".6g")


def emit_report(result, path, fmt="csv", key_name="size"):
    """Write an ExperimentResult or a sweep-row table to csv or json."""
    if fmt not in ("csv", "json"):
        raise ValueError('format must be "csv" or "json"')
    if isinstance(result, ExperimentResult):
        _emit_splits(result, path, fmt)
    else:
        _emit_sweep(list(result), path, fmt, key_name)


def _emit_splits(result, path, fmt):
    if not result.per_run_ci:
        raise ValueError("empty result")
    if fmt == "csv":
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["split_index", "ci", "surviving_features"])
            for i, (ci, surv) in enumerate(zip(result.per_run_ci, result.per_run_surviving)):
                writer.writerow([i, _fmt(ci), surv])
        return
    payload = {
        "runs": [
            {"split_index": i, "ci": float(_fmt(ci)), "surviving_features": surv}
            for i, (ci, surv) in enumerate(zip(result.per_run_ci, result.per_run_surviving))
        ],
        "mean_ci": float(_fmt(result.mean_ci)),
        "surviving_features_mean": float(_fmt(result.surviving_features_mean)),
        "redraws": result.redraws,
        "config": result.config_echo,
    }
    with open(path, "w") as f:
        json.dump(payload, f, indent=1, sort_keys=True)
        f.write("\n")


def _emit_sweep(rows, path, fmt, key_name):
    if not rows:
        raise ValueError("empty result")
    if fmt == "csv":
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow([key_name, "mean_ci", "sd_ci", "n_models"])
            for row in rows:
                writer.writerow([row.key, _fmt(row.mean_ci), _fmt(row.sd_ci), row.n_models])
        return
    payload = {
        "rows": [
            {key_name: row.key, "mean_ci": float(_fmt(row.mean_ci)),
             "sd_ci": float(_fmt(row.sd_ci)), "n_models": row.n_models}
            for row in rows
        ],
    }
    with open(path, "w") as f:
        json.dump(payload, f, indent=1, sort_keys=True)
        f.write("\n")
