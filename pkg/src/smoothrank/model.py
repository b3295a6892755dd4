"""The Smooth Rank ensemble: per-feature marginal predictors built from
class-conditional densities, smoothed with LOESS, weighted by their
ranking performance, and aggregated into a single risk score.

Each feature is handled independently. Its two class-conditional
densities g1, g2 (class 1 = early failure) are estimated on a shared
grid, combined into the contrast ratio

    q(r) = (g1(r) - g2(r)) / (pi1 * g1(r) + pi2 * g2(r)),

masked where the mixture density is too small to be reliable, and
smoothed into the marginal predictor q~. Each predictor's weight is the
concordance index between its outputs and the survival outcome of the
training records, minus 0.5 (for a two-class outcome this concordance
is the area under the ROC curve); weights are then shrunk against the
largest one. The final score of a covariate vector x is the weighted
average of q~_i(x^i) over the features present in x.

Features are standardized internally (zero mean, unit variance over the
training samples where they are present) before density estimation, so
the mixture-density cutoff acts on a scale-free quantity and scores are
invariant under feature-wise affine rescaling.
"""

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .concordance import concordance_index
from .data import BinarizationSpec, ClassLabel, binarize_labels, select_threshold
from .kde import GRID_POINTS, EvaluationGrid, bandwidth, estimate_density, make_grid
from .loess import DEFAULT_SPAN, LoessFit, loess_fit, loess_predict

#: Mixture-density level below which the contrast ratio is unreliable.
DENSITY_CUTOFF = 0.1

#: Minimum per-class sample count for a feature to be usable.
MIN_CLASS_SAMPLES = 4


@dataclass(frozen=True)
class ClassPriors:
    pi1: float
    pi2: float

    def __post_init__(self):
        if not (0.0 < self.pi1 < 1.0 and 0.0 < self.pi2 < 1.0):
            raise ValueError("priors must lie in (0, 1)")
        if abs(self.pi1 + self.pi2 - 1.0) > 1e-12:
            raise ValueError("priors must sum to 1")

    @classmethod
    def from_counts(cls, n1, n2):
        total = n1 + n2
        return cls(pi1=n1 / total, pi2=n2 / total)


@dataclass(frozen=True)
class MarginalPredictor:
    """Per-feature smoothed contrast function plus its ensemble weight.

    A predictor that could not be built (too few samples, constant
    feature, fully masked ratio) is kept as a dropped placeholder with
    weight 0 so the ensemble always has one entry per feature.
    """

    feature_index: int
    weight: float = 0.0
    shift: float = 0.0
    scale: float = 1.0
    priors: ClassPriors | None = None
    grid: EvaluationGrid | None = field(default=None, repr=False)
    q_raw: np.ndarray | None = field(default=None, repr=False)  # NaN = masked
    q_smooth: LoessFit | None = field(default=None, repr=False)
    drop_reason: str | None = None

    @property
    def dropped(self):
        return self.q_smooth is None

    def evaluate(self, values):
        """q~ at raw feature values (standardized internally); dropped
        predictors evaluate to 0."""
        if self.dropped:
            return np.zeros_like(np.asarray(values, dtype=float))
        return loess_predict(self.q_smooth, (np.asarray(values, dtype=float) - self.shift) / self.scale)


def build_q_raw(g1, g2, priors, cutoff=DENSITY_CUTOFF):
    """Pointwise contrast ratio on the shared grid, NaN where the mixture
    density pi1*g1 + pi2*g2 falls below the cutoff."""
    if g1.grid is not g2.grid and not np.array_equal(g1.grid.points, g2.grid.points):
        raise ValueError("class densities must share one grid")
    mixture = priors.pi1 * g1.values + priors.pi2 * g2.values
    with np.errstate(invalid="ignore", divide="ignore"):
        q = np.where(mixture >= cutoff, (g1.values - g2.values) / mixture, np.nan)
    return q


def _fit_marginal(values1, values2, feature_index, *, cutoff=DENSITY_CUTOFF,
                  span=DEFAULT_SPAN, n_grid=GRID_POINTS):
    """Build one marginal predictor from the per-class feature values."""

    def dropped(reason):
        return MarginalPredictor(feature_index=feature_index, drop_reason=reason)

    v1 = np.asarray(values1, dtype=float)
    v2 = np.asarray(values2, dtype=float)
    if v1.size < MIN_CLASS_SAMPLES or v2.size < MIN_CLASS_SAMPLES:
        return dropped("fewer than %d samples in a class" % MIN_CLASS_SAMPLES)

    combined = np.concatenate([v1, v2])
    shift = float(combined.mean())
    scale = float(combined.std())
    if scale == 0.0:
        return dropped("constant feature")
    z1 = (v1 - shift) / scale
    z2 = (v2 - shift) / scale

    try:
        h1, h2 = bandwidth(z1), bandwidth(z2)
        grid = make_grid(z1, z2, n_points=n_grid)
    except ValueError as exc:
        return dropped(str(exc))
    g1 = estimate_density(z1, grid, h1)
    g2 = estimate_density(z2, grid, h2)
    priors = ClassPriors.from_counts(v1.size, v2.size)
    q_raw = build_q_raw(g1, g2, priors, cutoff)

    unmasked = ~np.isnan(q_raw)
    if np.count_nonzero(unmasked) < 4:
        return dropped("mixture density below cutoff almost everywhere")
    q_smooth = loess_fit(grid.points[unmasked], q_raw[unmasked], span=span)
    return MarginalPredictor(
        feature_index=feature_index, shift=shift, scale=scale, priors=priors,
        grid=grid, q_raw=q_raw, q_smooth=q_smooth,
    )


def _split_by_class(samples, feature_index):
    values, labels = [], []
    for s in samples:
        v = s.covariates[feature_index]
        if v is None or (isinstance(v, float) and math.isnan(v)):
            continue
        values.append(float(v))
        labels.append(1 if s.class_label is ClassLabel.CLASS1 else 2)
    return np.array(values), np.array(labels, dtype=int)


def build_predictor(samples, feature_index, *, cutoff=DENSITY_CUTOFF,
                    span=DEFAULT_SPAN, n_grid=GRID_POINTS):
    """Marginal predictor for one feature of a binarized sample list.

    Only samples with the feature present are used. The predictor's
    weight is left at 0; assign it afterwards via predictor_weight and
    shrink_weights.
    """
    values, labels = _split_by_class(samples, feature_index)
    return _fit_marginal(values[labels == 1], values[labels == 2], feature_index,
                         cutoff=cutoff, span=span, n_grid=n_grid)


def predictor_weight(predictor, dataset):
    """Weight = concordance of q~ with the survival outcome, minus 0.5.

    The concordance index is computed between the predictor's outputs and
    the (time, event) targets over the training records where the feature
    is present; for a two-class outcome it equals the area under the ROC
    curve with class 1 ranked as higher risk. Records missing the feature
    are skipped (the predictor is undefined there). Negative weights are
    kept; shrinkage zeroes them later. Dropped predictors and predictors
    with no comparable record pair weigh 0.
    """
    if predictor.dropped:
        return 0.0
    col = dataset.covariates[:, predictor.feature_index]
    present = ~np.isnan(col)
    return _weight_from_arrays(predictor, col[present],
                               dataset.times[present], dataset.events[present])


def _weight_from_arrays(predictor, values, times, events):
    try:
        ci = concordance_index(predictor.evaluate(values), times, events)
    except ValueError:
        return 0.0
    return ci - 0.5


def shrink_weights(weights):
    """Shrink weights against the largest: w_i - mu/3 when w_i > mu/3,
    else 0, with mu = max(weights). A non-positive mu zeroes everything."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError("weights must be non-empty")
    mu = float(w.max())
    if mu <= 0.0:
        return np.zeros_like(w)
    return np.where(w > mu / 3.0, w - mu / 3.0, 0.0)


@dataclass(frozen=True)
class SmoothRankModel:
    predictors: tuple
    threshold_spec: BinarizationSpec
    shrinkage_mu: float
    feature_names: tuple = ()

    @property
    def n_features(self):
        return len(self.predictors)

    @property
    def surviving(self):
        """Indices of predictors with positive post-shrinkage weight."""
        return [p.feature_index for p in self.predictors if p.weight > 0.0]


def train(dataset, *, cutoff=DENSITY_CUTOFF, span=DEFAULT_SPAN, n_grid=GRID_POINTS):
    """Fit a Smooth Rank model on a survival dataset.

    Pipeline: select the balancing time threshold, binarize, build one
    marginal predictor per feature from the two classes, weight each by
    its concordance with the training survival outcome, and shrink the
    weights against the largest.
    """
    spec = select_threshold(dataset)
    labels_all = binarize_labels(dataset, spec)
    used = labels_all != 0
    x = dataset.covariates[used]
    labels = labels_all[used]

    predictors = []
    raw_weights = np.zeros(dataset.n_features)
    for j in range(dataset.n_features):
        col = x[:, j]
        present = ~np.isnan(col)
        v, lab = col[present], labels[present]
        predictor = _fit_marginal(v[lab == 1], v[lab == 2], j,
                                  cutoff=cutoff, span=span, n_grid=n_grid)
        if not predictor.dropped:
            full_col = dataset.covariates[:, j]
            full_present = ~np.isnan(full_col)
            raw_weights[j] = _weight_from_arrays(
                predictor, full_col[full_present],
                dataset.times[full_present], dataset.events[full_present])
        predictors.append(predictor)

    if all(p.dropped for p in predictors):
        raise ValueError("every feature was dropped; nothing to aggregate")

    final = shrink_weights(raw_weights)
    if not np.any(final > 0.0):
        warnings.warn("all predictor weights shrank to zero; scores will be 0")
    predictors = [replace(p, weight=float(w)) for p, w in zip(predictors, final)]
    return SmoothRankModel(
        predictors=tuple(predictors),
        threshold_spec=spec,
        shrinkage_mu=float(np.max(raw_weights)),
        feature_names=dataset.feature_names,
    )


def score(model, covariates):
    """Risk score of one covariate vector: the weighted average of q~ over
    features that are present and carry positive weight.

    Missing values may be None or NaN. An empty active set scores 0 with
    a warning; the function is total by design.
    """
    num = 0.0
    den = 0.0
    for predictor in model.predictors:
        if predictor.weight <= 0.0 or predictor.dropped:
            continue
        v = covariates[predictor.feature_index]
        if v is None or (isinstance(v, float) and math.isnan(v)):
            continue
        num += predictor.weight * float(predictor.evaluate(np.float64(v)))
        den += predictor.weight
    if den == 0.0:
        warnings.warn("no usable feature in input; returning the neutral score 0")
        return 0.0
    return num / den


def score_dataset(model, dataset):
    """Vectorized score() over every record of a dataset."""
    n = dataset.n_records
    num = np.zeros(n)
    den = np.zeros(n)
    for predictor in model.predictors:
        if predictor.weight <= 0.0 or predictor.dropped:
            continue
        col = dataset.covariates[:, predictor.feature_index]
        present = ~np.isnan(col)
        if not present.any():
            continue
        num[present] += predictor.weight * predictor.evaluate(col[present])
        den[present] += predictor.weight
    empty = den == 0.0
    if empty.any():
        warnings.warn(f"{int(empty.sum())} record(s) had no usable feature; scored 0")
    return np.where(empty, 0.0, num / np.where(empty, 1.0, den))


# -- serialization ----------------------------------------------------------

FORMAT_NAME = "smooth-rank-model"
FORMAT_VERSION = 1


def _predictor_to_dict(p, name):
    entry = {
        "feature_index": p.feature_index,
        "feature_name": name,
        "weight": p.weight,
    }
    if p.dropped:
        entry["dropped"] = True
        entry["drop_reason"] = p.drop_reason
        return entry
    entry.update(
        shift=p.shift,
        scale=p.scale,
        priors=[p.priors.pi1, p.priors.pi2],
        grid={"lo": p.grid.lo, "hi": p.grid.hi, "n_points": p.grid.n_points},
        q_raw=[None if math.isnan(v) else v for v in p.q_raw],
        design_x=list(p.q_smooth.design_x),
        fitted_y=list(p.q_smooth.fitted_y),
        span=p.q_smooth.span,
    )
    return entry


def model_to_dict(model):
    names = model.feature_names or tuple(
        f"x{p.feature_index}" for p in model.predictors
    )
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "threshold": model.threshold_spec.threshold,
        "shrinkage_mu": model.shrinkage_mu,
        "feature_names": list(names),
        "predictors": [
            _predictor_to_dict(p, names[p.feature_index]) for p in model.predictors
        ],
    }


def model_from_dict(payload):
    if payload.get("format") != FORMAT_NAME:
        raise ValueError("not a serialized model")
    if payload.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model version {payload.get('version')!r}")
    predictors = []
    for entry in payload["predictors"]:
        if entry.get("dropped"):
            predictors.append(MarginalPredictor(
                feature_index=entry["feature_index"],
                weight=entry["weight"],
                drop_reason=entry.get("drop_reason"),
            ))
            continue
        grid = EvaluationGrid(
            lo=entry["grid"]["lo"],
            hi=entry["grid"]["hi"],
            points=np.linspace(entry["grid"]["lo"], entry["grid"]["hi"],
                               entry["grid"]["n_points"]),
        )
        predictors.append(MarginalPredictor(
            feature_index=entry["feature_index"],
            weight=entry["weight"],
            shift=entry["shift"],
            scale=entry["scale"],
            priors=ClassPriors(*entry["priors"]),
            grid=grid,
            q_raw=np.array([np.nan if v is None else v for v in entry["q_raw"]]),
            q_smooth=LoessFit(
                design_x=np.array(entry["design_x"]),
                fitted_y=np.array(entry["fitted_y"]),
                span=entry["span"],
            ),
        ))
    return SmoothRankModel(
        predictors=tuple(predictors),
        threshold_spec=BinarizationSpec(threshold=payload["threshold"]),
        shrinkage_mu=payload["shrinkage_mu"],
        feature_names=tuple(payload["feature_names"]),
    )


def save_model(model, path):
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=1)
        f.write("\n")


def load_model(path):
    with open(path) as f:
        return model_from_dict(json.load(f))
