"""Degree-1 locally weighted regression (LOESS) with tricube weights.

At each design point a weighted linear least-squares line is fitted over
the nearest-neighbor window and evaluated there. No robustness
iterations are performed. Prediction between design points is linear
interpolation with constant extrapolation beyond the fitted range.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SPAN = 0.75


@dataclass(frozen=True)
class LoessFit:
    design_x: np.ndarray = field(repr=False)
    fitted_y: np.ndarray = field(repr=False)
    span: float
    degree: int = 1

    def __post_init__(self):
        x = np.asarray(self.design_x, dtype=float)
        y = np.asarray(self.fitted_y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("design_x and fitted_y must be 1-d and equally long")
        if np.any(np.diff(x) <= 0):
            raise ValueError("design_x must be strictly increasing")
        if not np.all(np.isfinite(y)):
            raise ValueError("fitted values must be finite")
        object.__setattr__(self, "design_x", x)
        object.__setattr__(self, "fitted_y", y)


def _window_starts(x, q):
    """Start index of the q-nearest-neighbor window around each point.

    x is sorted, so the q nearest neighbors of x[k] form a contiguous run
    containing k; the run minimizes the distance to its farthest member.
    """
    n = x.size
    # c[s] = x[s] + x[s+q-1] is increasing; the optimal start is where the
    # window's edge distances balance, i.e. where c[s] crosses 2*x[k].
    c = x[: n - q + 1] + x[q - 1 :]
    k = np.arange(n)
    lo = np.maximum(0, k - q + 1)
    hi = np.minimum(k, n - q)
    t = np.searchsorted(c, 2.0 * x)
    cand_a = np.clip(t - 1, lo, hi)
    cand_b = np.clip(t, lo, hi)

    def edge_dist(s):
        return np.maximum(x - x[s], x[s + q - 1] - x)

    return np.where(edge_dist(cand_a) <= edge_dist(cand_b), cand_a, cand_b)


def loess_fit(x, y, span=DEFAULT_SPAN):
    """Fit degree-1 LOESS at every design point.

    The window holds q = ceil(span * n) nearest neighbors; tricube weights
    w_j = (1 - (d_j/d_max)^3)^3 use d_max = distance to the q-th nearest
    neighbor. A window whose weighted design is singular (all usable
    abscissae coincide) falls back to the weighted mean with a warning.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and equally long")
    n = x.size
    if n < 4:
        raise ValueError(f"loess needs at least 4 points, got {n}")
    if not 0.0 < span <= 1.0:
        raise ValueError("span must lie in (0, 1]")
    order = np.argsort(x, kind="stable")
    x, y = x[order], y[order]
    if np.any(np.diff(x) == 0.0):
        raise ValueError("duplicate abscissae are not supported")
    q = min(math.ceil(span * n), n)
    if q < 2:
        raise ValueError(f"window of {q} points is too small; increase span")

    starts = _window_starts(x, q)
    idx = starts[:, None] + np.arange(q)[None, :]
    xw = x[idx]
    yw = y[idx]
    u = xw - x[:, None]
    d_max = np.abs(u).max(axis=1)
    if np.any(d_max <= 0.0):
        raise ValueError("zero-width neighbor window")
    w = (1.0 - np.clip(np.abs(u) / d_max[:, None], 0.0, 1.0) ** 3) ** 3

    s0 = w.sum(axis=1)
    s1 = (w * u).sum(axis=1)
    s2 = (w * u * u).sum(axis=1)
    t0 = (w * yw).sum(axis=1)
    t1 = (w * u * yw).sum(axis=1)
    det = s0 * s2 - s1 * s1
    singular = det <= 1e-14 * s0 * s2
    if np.any(singular):
        warnings.warn("singular loess window; falling back to weighted mean")
    safe_det = np.where(singular, 1.0, det)
    fitted = np.where(singular, t0 / s0, (s2 * t0 - s1 * t1) / safe_det)
    return LoessFit(design_x=x, fitted_y=fitted, span=float(span))


def loess_predict(fit, x_new):
    """Evaluate a fit at new points: linear interpolation between design
    points, constant (endpoint) extrapolation outside the fitted range."""
    out = np.interp(x_new, fit.design_x, fit.fitted_y)
    return float(out) if np.isscalar(x_new) else out
