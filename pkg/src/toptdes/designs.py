"""Discrete probability designs on the circle [0, 2*pi).

A design is a finite probability measure: support points sorted in
[0, 2*pi) with strictly positive weights summing to one.  All constructors
funnel through :func:`make_design`, which canonicalizes its input, so a
``Design`` instance can always be assumed canonical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDesignError
from .fourier import TWO_PI

# points closer than this are considered duplicates during canonicalization
_CANON_DELTA = 1e-9
# tolerated drift of the weight sum before renormalizing
_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Design:
    """Canonical discrete design: sorted points, positive weights, sum 1."""

    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 1 or w.shape != pts.shape or pts.size == 0:
            raise InvalidDesignError("points and weights must be matching 1-d arrays")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
            raise InvalidDesignError("points and weights must be finite")
        if np.any(pts < 0.0) or np.any(pts >= TWO_PI):
            raise InvalidDesignError("points must lie in [0, 2*pi)")
        if np.any(np.diff(pts) <= 0.0):
            raise InvalidDesignError("points must be strictly increasing")
        if np.any(w <= 0.0):
            raise InvalidDesignError("weights must be strictly positive")
        if abs(w.sum() - 1.0) > _SUM_TOL:
            raise InvalidDesignError("weights must sum to 1")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def support_size(self) -> int:
        return self.points.size

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Design":
        try:
            points, weights = data["points"], data["weights"]
        except (TypeError, KeyError) as exc:
            raise InvalidDesignError(
                'design JSON must be {"points": [...], "weights": [...]}'
            ) from exc
        return make_design(points, weights)

    def to_json(self) -> str:
        # repr-based float serialization round-trips bit-exactly (<= 17
        # significant digits)
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Design":
        return cls.from_dict(json.loads(text))


def make_design(points, weights) -> Design:
    """Canonicalize raw points/weights into a :class:`Design`.

    Reduces points mod 2*pi, drops zero-weight points, sorts, merges
    near-duplicates (circular distance <= 1e-9) by weighted circular mean,
    and renormalizes the weights when their sum has drifted.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=float)).ravel()
    w = np.atleast_1d(np.asarray(weights, dtype=float)).ravel()
    if pts.size == 0:
        raise InvalidDesignError("design must have at least one point")
    if pts.shape != w.shape:
        raise InvalidDesignError("points and weights must have equal length")
    if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
        raise InvalidDesignError("points and weights must be finite")
    if np.any(w < 0.0):
        raise InvalidDesignError("weights must be nonnegative")
    keep = w > 0.0
    if not np.any(keep):
        raise InvalidDesignError("total weight must be positive")
    pts, w = pts[keep], w[keep]
    pts = _wrap(pts)
    order = np.argsort(pts, kind="stable")
    pts, w = _cluster(pts[order], w[order], _CANON_DELTA)
    total = w.sum()
    if abs(total - 1.0) > _SUM_TOL:
        w = w / total
    return Design(points=pts, weights=w)


def _wrap(x: np.ndarray) -> np.ndarray:
    """Reduce mod 2*pi; np.mod of a tiny negative rounds to 2*pi itself."""
    out = np.mod(x, TWO_PI)
    return np.where(out >= TWO_PI, 0.0, out)


def _cluster(pts: np.ndarray, w: np.ndarray, delta: float):
    """Single-linkage clustering of sorted points at circular distance delta.

    Each cluster collapses to its weight-weighted circular mean with the
    summed weight.  Assumes cluster spans are well below pi.
    """
    if pts.size == 1 or delta <= 0.0:
        return pts, w
    breaks = np.nonzero(np.diff(pts) > delta)[0]
    ids = np.zeros(pts.size, dtype=int)
    ids[breaks + 1] = 1
    ids = np.cumsum(ids)
    n_clusters = ids[-1] + 1
    # wrap-around: last cluster may connect to the first across 0
    wrap = n_clusters > 1 and (pts[0] + TWO_PI - pts[-1]) <= delta
    if wrap:
        ids[ids == ids[-1]] = 0
        uniq = np.unique(ids)
        ids = np.searchsorted(uniq, ids)
        n_clusters -= 1
    if n_clusters == pts.size:
        return pts, w
    out_pts = np.empty(n_clusters)
    out_w = np.empty(n_clusters)
    for c in range(n_clusters):
        sel = ids == c
        pw, ww = pts[sel], w[sel]
        # mean relative to the first member keeps wrap-spanning clusters exact
        rel = np.mod(pw - pw[0] + np.pi, TWO_PI) - np.pi
        total = ww.sum()
        out_pts[c] = _wrap(pw[0] + (ww @ rel) / total)
        out_w[c] = total
    order = np.argsort(out_pts, kind="stable")
    return out_pts[order], out_w[order]


def merge_close(design: Design, delta: float) -> Design:
    """Merge support points closer than ``delta`` (circular distance).

    Clusters collapse to their weight-weighted circular mean; total weight
    is preserved.  Never increases the support size.
    """
    if not np.isfinite(delta) or delta < 0.0:
        raise InvalidDesignError(f"delta must be a nonnegative real, got {delta!r}")
    pts, w = _cluster(design.points, design.weights, delta)
    total = w.sum()
    if abs(total - 1.0) > _SUM_TOL:
        w = w / total
    return Design(points=pts, weights=w)


def convex_combine(d1: Design, d2: Design, alpha: float) -> Design:
    """Mixture design (1-alpha)*d1 + alpha*d2, canonicalized."""
    if not (np.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise InvalidDesignError(f"alpha must lie in [0, 1], got {alpha!r}")
    pts = np.concatenate([d1.points, d2.points])
    w = np.concatenate([(1.0 - alpha) * d1.weights, alpha * d2.weights])
    return make_design(pts, w)


def point_mass(x: float) -> Design:
    """Design placing all weight on a single point."""
    return make_design([x], [1.0])


def circular_distance(a, b):
    """Distance on the circle of circumference 2*pi, elementwise."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), TWO_PI)
    out = np.minimum(d, TWO_PI - d)
    return float(out) if np.ndim(out) == 0 else out


def support_distance(d1: Design, d2: Design) -> float:
    """Hausdorff distance between the two supports (circular metric)."""
    dist = circular_distance(d1.points[:, None], d2.points[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def weight_distance(d1: Design, d2: Design) -> float:
    """Total-variation distance treating nearest supports as matched.

    Intended for designs whose supports are already close (e.g. solver
    output vs a closed form); each point of ``d1`` is matched to the
    nearest point of ``d2`` and the weight differences are accumulated.
    """
    dist = circular_distance(d1.points[:, None], d2.points[None, :])
    nearest = dist.argmin(axis=1)
    w2 = np.zeros(d2.support_size)
    np.add.at(w2, nearest, d1.weights)
    return float(0.5 * np.abs(w2 - d2.weights).sum())
