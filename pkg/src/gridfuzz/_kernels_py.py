"""Pure-Python (numpy) implementations of the sampled-set kernels.

Every routine here has a twin in ``_ckernels.pyx`` that performs the same
floating point operations in the same order, so both backends return
bit-identical results.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def grid(lo: float, hi: float, n: int) -> np.ndarray:
    step = (hi - lo) / (n - 1)
    xs = np.arange(n, dtype=np.float64) * step + lo
    xs[n - 1] = hi
    return xs


def _trapezoid_on(xs: np.ndarray, a1: float, a2: float, a3: float, a4: float) -> np.ndarray:
    out = np.zeros_like(xs)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        up = (xs - a1) / (a2 - a1)
        down = (a4 - xs) / (a4 - a3)
    inside = (xs >= a1) & (xs <= a4)
    rising = inside & (xs < a2)
    plateau = inside & (xs >= a2) & (xs <= a3)
    falling = inside & (xs > a3)
    out[rising] = up[rising]
    out[plateau] = 1.0
    out[falling] = down[falling]
    return out


def sample_trapezoid(a1: float, a2: float, a3: float, a4: float,
                     lo: float, hi: float, n: int) -> np.ndarray:
    return _trapezoid_on(grid(lo, hi, n), a1, a2, a3, a4)


def aggregate_clipped(shapes: np.ndarray, strengths: np.ndarray,
                      lo: float, hi: float, n: int) -> np.ndarray:
    """Pointwise max over trapezoids clipped at their firing strengths."""
    xs = grid(lo, hi, n)
    out = np.zeros(n, dtype=np.float64)
    for (a1, a2, a3, a4), w in zip(shapes, strengths):
        if w <= 0.0:
            continue
        np.maximum(out, np.minimum(_trapezoid_on(xs, a1, a2, a3, a4), w), out=out)
    return out


def _maximizers(grades: np.ndarray, eps: float) -> np.ndarray:
    gmax = grades.max()
    if gmax <= 0.0:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(grades >= gmax - eps)


def mom(grades: np.ndarray, lo: float, hi: float, eps: float) -> float:
    """Mean of maximum; NaN when every grade is zero."""
    idx = _maximizers(grades, eps)
    if idx.size == 0:
        return float("nan")
    n = grades.shape[0]
    step = (hi - lo) / (n - 1)
    # integer index sums are exact, so both backends agree bit-for-bit
    mean_idx = float(int(idx.sum())) / idx.size
    return mean_idx * step + lo


def bounding(grades: np.ndarray, lo: float, hi: float, eps: float) -> tuple[float, float, float, float]:
    idx = _maximizers(grades, eps)
    if idx.size == 0:
        nan = float("nan")
        return (nan, nan, nan, nan)
    n = grades.shape[0]
    xs = grid(lo, hi, n)
    support = np.flatnonzero(grades > 0.0)
    first, last = int(support[0]), int(support[-1])
    left = first - 1 if first > 0 else first
    right = last + 1 if last < n - 1 else last
    return (float(xs[left]), float(xs[idx[0]]), float(xs[idx[-1]]), float(xs[right]))
