"""Independent reference implementations used as test oracles.

Deliberately plain and slow: the basis matrices are built by explicit
loops straight from the model definition, the criterion value comes
from numpy's lstsq on square-root-weighted rows, and the Chebyshev
values from numpy's polynomial module.  Nothing here shares numerics
with the package.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev as npcheb

TWO_PI = 2.0 * np.pi


def nuisance_matrix(k1: int, k2: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    cols = [np.ones_like(x)]
    for i in range(1, k1 + 1):
        cols.append(np.sin(i * x))
    for i in range(1, k2 + 1):
        cols.append(np.cos(i * x))
    return np.stack(cols, axis=-1)


def extra_part(m: int, k1: int, k2: int, b, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    cols = []
    for i in range(k1 + 1, m + 1):
        cols.append(np.sin(i * x))
    for i in range(k2 + 1, m + 1):
        cols.append(np.cos(i * x))
    return np.stack(cols, axis=-1) @ b


def t_oracle(m: int, k1: int, k2: int, b, points, weights) -> float:
    """min over q of sum_i w_i (A(x_i) q + e(x_i))^2 via plain lstsq."""
    x = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    A = nuisance_matrix(k1, k2, x)
    e = extra_part(m, k1, k2, b, x)
    sw = np.sqrt(w)
    q, *_ = np.linalg.lstsq(sw[:, None] * A, -sw * e, rcond=None)
    r = sw * (A @ q + e)
    return float(r @ r)


def cheb_oracle(n: int, t):
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return npcheb.chebval(t, coeffs)


def dense_max_abs(f, n: int = 8192) -> float:
    grid = np.arange(n) * (TWO_PI / n)
    return float(np.abs(f(grid)).max())


def random_problem_dims(rng: np.random.Generator) -> tuple[int, int, int]:
    m = int(rng.integers(1, 6))
    k1 = int(rng.integers(0, m))
    k2 = int(rng.integers(0, m))
    return m, k1, k2


def random_b(rng: np.random.Generator, m: int, k1: int, k2: int) -> np.ndarray:
    n_extra = 2 * m - k1 - k2
    while True:
        b = rng.normal(size=n_extra)
        if np.abs(b).max() > 0.1:
            return b


def random_design_arrays(
    rng: np.random.Generator, n_min: int, n_max: int, min_sep: float = 0.05
) -> tuple[np.ndarray, np.ndarray]:
    """Well-separated random support with weights bounded away from 0."""
    for _ in range(200):
        n = int(rng.integers(n_min, n_max + 1))
        pts = np.sort(rng.uniform(0.0, TWO_PI, size=n))
        gaps = np.diff(np.concatenate([pts, [pts[0] + TWO_PI]]))
        if n == 1 or gaps.min() > min_sep:
            w = rng.dirichlet(np.full(n, 2.0))
            if w.min() > 0.01:
                return pts, w
    raise RuntimeError("failed to draw a separated design")
