"""Artificial survival data with a shared latent risk.

Each record carries a latent risk drawn as the log of a positive normal
variable. Event times and every feature are the risk plus independent
uniform noise on [min(risk)/2, max(risk)/2], so all features correlate
positively with the risk. A fixed fraction of records is censored by
scaling the recorded time down by a uniform factor in [0.2, 0.8].
"""

from dataclasses import dataclass, replace

import numpy as np

from .data import SurvivalDataset

_MAX_REDRAW_ROUNDS = 1000


@dataclass(frozen=True)
class SyntheticConfig:
    n_features: int
    n_records: int = 400
    censoring_fraction: float = 0.5
    seed: int = 0
    risk_source_mean: float = 10.0
    risk_source_sd: float = 2.0

    def __post_init__(self):
        if self.n_records < 4:
            raise ValueError("n_records must be at least 4")
        if self.n_features < 1:
            raise ValueError("n_features must be at least 1")
        if not 0.0 <= self.censoring_fraction < 1.0:
            raise ValueError("censoring_fraction must lie in [0, 1)")


def _positive_normal(rng, n, mean, sd):
    """Normal draws redrawn until positive (the log must exist)."""
    v = rng.normal(mean, sd, size=n)
    for _ in range(_MAX_REDRAW_ROUNDS):
        bad = v <= 0.0
        if not bad.any():
            return v
        v[bad] = rng.normal(mean, sd, size=int(bad.sum()))
    raise ValueError("risk source yields non-positive draws with probability ~1")


def _generate_with_latents(config):
    """Dataset plus its latent (risk, event time) vectors, for invariants."""
    rng = np.random.default_rng(config.seed)
    n, m = config.n_records, config.n_features

    risk = np.log(_positive_normal(rng, n, config.risk_source_mean, config.risk_source_sd))
    q_lo, q_hi = risk.min() / 2.0, risk.max() / 2.0
    if not q_lo < q_hi:
        raise ValueError("degenerate risk draw: all risks identical")

    t = risk + rng.uniform(q_lo, q_hi, size=n)
    for _ in range(_MAX_REDRAW_ROUNDS):
        bad = t <= 0.0
        if not bad.any():
            break
        # Redraw the whole record's latents; the noise interval stays frozen
        # from the first complete risk draw.
        k = int(bad.sum())
        risk[bad] = np.log(_positive_normal(rng, k, config.risk_source_mean,
                                            config.risk_source_sd))
        t[bad] = risk[bad] + rng.uniform(q_lo, q_hi, size=k)
    else:
        raise ValueError("configuration implies non-positive times")

    features = risk[:, None] + rng.uniform(q_lo, q_hi, size=(n, m))

    n_censored = round(config.censoring_fraction * n)
    censored_idx = rng.choice(n, size=n_censored, replace=False)
    events = np.ones(n, dtype=bool)
    events[censored_idx] = False
    target = t.copy()
    target[censored_idx] = t[censored_idx] * rng.uniform(0.2, 0.8, size=n_censored)

    dataset = SurvivalDataset(
        covariates=features,
        times=target,
        events=events,
        feature_names=tuple(f"f{j + 1}" for j in range(m)),
    )
    return dataset, risk, t


def generate(config):
    """One synthetic dataset, a pure function of config.seed."""
    dataset, _, _ = _generate_with_latents(config)
    return dataset


def derive_seed(base_seed, n_features, replicate):
    """Deterministic child seed for one (feature count, replicate) cell."""
    ss = np.random.SeedSequence([int(base_seed), int(n_features), int(replicate)])
    return int(ss.generate_state(1, np.uint64)[0])


def sweep_feature_counts(base, counts, replicates):
    """Independent datasets for every feature count and replicate.

    Returns a flat list ordered by (count, replicate); each dataset's
    stream is derived from (base.seed, count, replicate), so the output
    is reproducible regardless of generation order.
    """
    if not counts or any(c < 1 for c in counts):
        raise ValueError("counts must be non-empty and positive")
    datasets = []
    for m in counts:
        for rep in range(replicates):
            cfg = replace(base, n_features=int(m), seed=derive_seed(base.seed, m, rep))
            datasets.append(generate(cfg))
    return datasets
