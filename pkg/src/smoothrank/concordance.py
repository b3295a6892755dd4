"""Harrell's concordance index for censored survival targets.

A pair of observations is comparable when the earlier one is an observed
event: record i precedes record j iff event_i and t_i < t_j. Scores are
risk scores: higher score means earlier predicted failure, so a
comparable pair is concordant when the earlier record scored higher.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConcordanceCounts:
    concordant: int
    discordant: int
    ties: int

    def __post_init__(self):
        if min(self.concordant, self.discordant, self.ties) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def comparable(self):
        return self.concordant + self.discordant + self.ties

    def index(self):
        """CI = (concordant + 0.5 * ties) / comparable."""
        if self.comparable == 0:
            raise ValueError("no comparable pairs")
        return (self.concordant + 0.5 * self.ties) / self.comparable


def _as_targets(times, events):
    t = np.asarray(times, dtype=float)
    e = np.asarray(events, dtype=bool)
    if t.shape != e.shape or t.ndim != 1:
        raise ValueError("times and events must be 1-d and equally long")
    if np.any(t <= 0):
        raise ValueError("survival times must be positive")
    return t, e


def comparable_pairs(times, events):
    """All ordered index pairs (i, j) with event_i and t_i < t_j.

    Pairs with equal times are never comparable, and a censored record
    cannot be the earlier element of a pair.
    """
    t, e = _as_targets(times, events)
    earlier = e[:, None] & (t[:, None] < t[None, :])
    return list(zip(*np.nonzero(earlier)))


def concordance_counts(scores, times, events):
    """Concordant / discordant / tied counts over all comparable pairs."""
    t, e = _as_targets(times, events)
    s = np.asarray(scores, dtype=float)
    if s.shape != t.shape:
        raise ValueError("scores must match targets in length")
    earlier = e[:, None] & (t[:, None] < t[None, :])
    diff = s[:, None] - s[None, :]
    return ConcordanceCounts(
        concordant=int(np.count_nonzero(earlier & (diff > 0))),
        discordant=int(np.count_nonzero(earlier & (diff < 0))),
        ties=int(np.count_nonzero(earlier & (diff == 0))),
    )


def concordance_index(scores, times, events):
    """Harrell's concordance index in [0, 1]; ties among comparable pairs
    count one half. Raises ValueError when no pair is comparable."""
    return concordance_counts(scores, times, events).index()
