"""Censored survival observations: data model, CSV ingestion, outcome
binarization by a time threshold, and k-nearest-neighbor imputation.

Covariates are stored as a float matrix with NaN marking missing cells.
All types are immutable after construction; operations are pure
functions of their inputs.
"""

import csv
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

MISSING_TOKENS = ("", "NA")


@dataclass(frozen=True)
class SurvivalRecord:
    """One observation: covariates (None = missing), survival time, and
    the event indicator (True = failure observed, False = censored)."""

    covariates: tuple
    time: float
    event: bool

    def __post_init__(self):
        if self.time <= 0:
            raise ValueError("survival time must be positive")


@dataclass(frozen=True)
class SurvivalDataset:
    covariates: np.ndarray = field(repr=False)  # (N, M), NaN = missing
    times: np.ndarray = field(repr=False)
    events: np.ndarray = field(repr=False)
    feature_names: tuple

    def __post_init__(self):
        x = np.asarray(self.covariates, dtype=float)
        t = np.asarray(self.times, dtype=float)
        e = np.asarray(self.events, dtype=bool)
        if x.ndim != 2:
            raise ValueError("covariates must be a 2-d matrix")
        n, m = x.shape
        if n < 2:
            raise ValueError("dataset needs at least 2 records")
        if t.shape != (n,) or e.shape != (n,):
            raise ValueError("times/events must have one entry per record")
        if np.any(t <= 0):
            raise ValueError("survival times must be positive")
        if len(self.feature_names) != m:
            raise ValueError("feature_names must have one entry per column")
        object.__setattr__(self, "covariates", x)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "events", e)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_records(self):
        return self.covariates.shape[0]

    @property
    def n_features(self):
        return self.covariates.shape[1]

    def record(self, i):
        row = self.covariates[i]
        cov = tuple(None if np.isnan(v) else float(v) for v in row)
        return SurvivalRecord(cov, float(self.times[i]), bool(self.events[i]))

    @property
    def records(self):
        return [self.record(i) for i in range(self.n_records)]

    @classmethod
    def from_records(cls, records, feature_names):
        m = len(feature_names)
        rows = []
        for r in records:
            if len(r.covariates) != m:
                raise ValueError("all records must have the declared feature count")
            rows.append([np.nan if v is None else float(v) for v in r.covariates])
        return cls(
            covariates=np.array(rows, dtype=float).reshape(len(records), m),
            times=np.array([r.time for r in records], dtype=float),
            events=np.array([r.event for r in records], dtype=bool),
            feature_names=tuple(feature_names),
        )

    def subset(self, indices):
        idx = np.asarray(indices, dtype=int)
        return SurvivalDataset(
            covariates=self.covariates[idx].copy(),
            times=self.times[idx].copy(),
            events=self.events[idx].copy(),
            feature_names=self.feature_names,
        )


class ClassLabel(Enum):
    CLASS1 = 1  # early failure: event observed at or before the threshold
    CLASS2 = 2  # survived past the threshold


@dataclass(frozen=True)
class BinarizationSpec:
    """Time threshold splitting records into early failures vs. survivors."""

    threshold: float

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


@dataclass(frozen=True)
class BinarySample:
    covariates: tuple
    class_label: ClassLabel


def _parse_cell(text, row, col):
    token = text.strip()
    if token in MISSING_TOKENS:
        return np.nan
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"row {row}, column {col!r}: cannot parse {text!r}") from None


def load_csv(path, time_col, event_col, feature_cols=None):
    """Read a survival dataset from a headered CSV file.

    Empty cells and the literal token "NA" parse as missing covariates;
    the time and event columns must be present and non-missing, with the
    event encoded as 0/1. feature_cols=None takes every remaining column,
    in file order. Errors name the offending 1-based data row and column.
    """
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = list(reader)

    header = [h.strip() for h in header]
    for col in (time_col, event_col):
        if col not in header:
            raise ValueError(f"{path}: no column named {col!r}")
    if feature_cols is None:
        feature_cols = [c for c in header if c not in (time_col, event_col)]
    if not feature_cols:
        raise ValueError("schema must name at least one feature column")
    missing = [c for c in feature_cols if c not in header]
    if missing:
        raise ValueError(f"{path}: no column named {missing[0]!r}")

    i_time = header.index(time_col)
    i_event = header.index(event_col)
    i_feats = [header.index(c) for c in feature_cols]

    times, events, matrix = [], [], []
    for r, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise ValueError(f"row {r}: expected {len(header)} cells, got {len(row)}")
        t = _parse_cell(row[i_time], r, time_col)
        if np.isnan(t):
            raise ValueError(f"row {r}, column {time_col!r}: time is missing")
        if t <= 0:
            raise ValueError(f"row {r}, column {time_col!r}: time must be positive")
        ev = _parse_cell(row[i_event], r, event_col)
        if np.isnan(ev) or ev not in (0.0, 1.0):
            raise ValueError(f"row {r}, column {event_col!r}: event must be 0 or 1")
        times.append(t)
        events.append(bool(ev))
        matrix.append([_parse_cell(row[i], r, header[i]) for i in i_feats])

    return SurvivalDataset(
        covariates=np.array(matrix, dtype=float).reshape(len(rows), len(feature_cols)),
        times=np.array(times),
        events=np.array(events),
        feature_names=tuple(feature_cols),
    )


def save_csv(dataset, path, time_col="time", event_col="event"):
    """Write a dataset as CSV; missing cells become "NA". Floats use repr,
    so a load_csv round trip preserves every cell exactly."""

    def fmt(v):
        if np.isnan(v):
            return "NA"
        return repr(int(v)) if float(v).is_integer() else repr(float(v))

    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([time_col, event_col, *dataset.feature_names])
        for i in range(dataset.n_records):
            writer.writerow(
                [fmt(dataset.times[i]), int(dataset.events[i])]
                + [fmt(v) for v in dataset.covariates[i]]
            )


def _class_sizes(dataset, threshold):
    n1 = int(np.count_nonzero(dataset.events & (dataset.times <= threshold)))
    n2 = int(np.count_nonzero(dataset.times > threshold))
    return n1, n2


def select_threshold(dataset):
    """Pick the observed event time that best balances the two classes.

    Scans every distinct event time as a candidate threshold and returns
    the one minimizing the absolute class-size difference, preferring the
    smaller threshold on ties. Candidates leaving either class empty are
    skipped; if none remains, raises ValueError.
    """
    event_times = np.unique(dataset.times[dataset.events])
    if event_times.size == 0:
        raise ValueError("dataset contains no events")
    best = None
    for threshold in event_times:
        n1, n2 = _class_sizes(dataset, threshold)
        if n1 == 0 or n2 == 0:
            continue
        gap = abs(n1 - n2)
        if best is None or gap < best[0]:
            best = (gap, float(threshold))
    if best is None:
        raise ValueError("no threshold yields two non-empty classes")
    return BinarizationSpec(threshold=best[1])


def binarize(dataset, spec):
    """Split records into the two training classes.

    Class 1 holds observed events with t <= threshold; class 2 holds all
    records with t > threshold. Censored records at or before the
    threshold belong to neither class and are excluded from training.
    """
    labels = binarize_labels(dataset, spec)
    samples = []
    for i in np.nonzero(labels != 0)[0]:
        rec = dataset.record(int(i))
        label = ClassLabel.CLASS1 if labels[i] == 1 else ClassLabel.CLASS2
        samples.append(BinarySample(covariates=rec.covariates, class_label=label))
    return samples


def binarize_labels(dataset, spec):
    """Array form of binarize: 1 for class 1, 2 for class 2, 0 for excluded."""
    t = spec.threshold
    labels = np.zeros(dataset.n_records, dtype=int)
    labels[dataset.events & (dataset.times <= t)] = 1
    labels[dataset.times > t] = 2
    n1 = int(np.count_nonzero(labels == 1))
    n2 = int(np.count_nonzero(labels == 2))
    if n1 == 0 or n2 == 0:
        raise ValueError(f"threshold {t} leaves an empty class ({n1} vs {n2})")
    return labels


def impute_knn(dataset, k=5):
    """Fill missing cells with the mean over the k nearest neighbors.

    Distances are Euclidean over the covariates present in both records,
    computed on standardized features (zero mean, unit variance over each
    feature's non-missing values) and divided by the number of shared
    features. Neighbors must have the target feature present; if fewer
    than k qualify, all of them are used. Non-missing cells are never
    changed.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    x = dataset.covariates
    present = ~np.isnan(x)
    if not np.all(present.any(axis=0)):
        j = int(np.nonzero(~present.any(axis=0))[0][0])
        raise ValueError(f"feature {dataset.feature_names[j]!r} is missing in every record")
    if not np.all(present.any(axis=1)):
        i = int(np.nonzero(~present.any(axis=1))[0][0])
        raise ValueError(f"record {i} has no non-missing covariates")
    if present.all():
        return dataset

    mean = np.nanmean(x, axis=0)
    sd = np.nanstd(x, axis=0)
    sd[sd == 0.0] = 1.0
    z = (x - mean) / sd

    filled = x.copy()
    for i, j in zip(*np.nonzero(~present)):
        # row i lacks feature j, so neither j nor row i itself can qualify
        shared = present & present[i]
        candidates = np.nonzero(present[:, j] & shared.any(axis=1))[0]
        if candidates.size == 0:
            raise ValueError(
                f"record {i}: no neighbor shares a feature and has "
                f"{dataset.feature_names[j]!r} present"
            )
        diff = np.where(shared[candidates], z[candidates] - z[i], 0.0)
        n_shared = shared[candidates].sum(axis=1)
        dist = np.sqrt((diff * diff).sum(axis=1)) / n_shared
        order = np.argsort(dist, kind="stable")
        nearest = candidates[order[: min(k, candidates.size)]]
        filled[i, j] = x[nearest, j].mean()

    return replace(dataset, covariates=filled)
