# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampled-set kernels.

Mirrors ``_kernels_py`` operation for operation; the two must stay
bit-identical (tests/test_kernels.py checks this).
"""
import numpy as np

BACKEND = "cython"


cdef inline double _grid_at(Py_ssize_t i, Py_ssize_t n, double lo, double hi, double step) noexcept nogil:
    if i == n - 1:
        return hi
    return <double>i * step + lo


cdef inline double _trap(double x, double a1, double a2, double a3, double a4) noexcept nogil:
    if x < a1 or x > a4:
        return 0.0
    if x < a2:
        return (x - a1) / (a2 - a1)
    if x <= a3:
        return 1.0
    return (a4 - x) / (a4 - a3)


def grid(double lo, double hi, Py_ssize_t n):
    cdef double step = (hi - lo) / (n - 1)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        o[i] = _grid_at(i, n, lo, hi, step)
    return out


def sample_trapezoid(double a1, double a2, double a3, double a4,
                     double lo, double hi, Py_ssize_t n):
    cdef double step = (hi - lo) / (n - 1)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _trap(_grid_at(i, n, lo, hi, step), a1, a2, a3, a4)
    return out


def aggregate_clipped(const double[:, :] shapes, const double[:] strengths,
                      double lo, double hi, Py_ssize_t n):
    cdef double step = (hi - lo) / (n - 1)
    cdef Py_ssize_t m = shapes.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, r
    cdef double x, g, w
    with nogil:
        for i in range(n):
            x = _grid_at(i, n, lo, hi, step)
            for r in range(m):
                w = strengths[r]
                if w <= 0.0:
                    continue
                g = _trap(x, shapes[r, 0], shapes[r, 1], shapes[r, 2], shapes[r, 3])
                if w < g:
                    g = w
                if g > o[i]:
                    o[i] = g
    return out


cdef double _max(const double[:] grades) noexcept nogil:
    cdef double gmax = 0.0
    cdef Py_ssize_t i
    for i in range(grades.shape[0]):
        if grades[i] > gmax:
            gmax = grades[i]
    return gmax


def mom(const double[:] grades, double lo, double hi, double eps):
    cdef Py_ssize_t n = grades.shape[0]
    cdef double gmax = _max(grades)
    if gmax <= 0.0:
        return float("nan")
    cdef double thr = gmax - eps
    cdef long long total = 0
    cdef long long count = 0
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            if grades[i] >= thr:
                total += i
                count += 1
    cdef double step = (hi - lo) / (n - 1)
    cdef double mean_idx = <double>total / <double>count
    return mean_idx * step + lo


def bounding(const double[:] grades, double lo, double hi, double eps):
    cdef Py_ssize_t n = grades.shape[0]
    cdef double gmax = _max(grades)
    if gmax <= 0.0:
        nan = float("nan")
        return (nan, nan, nan, nan)
    cdef double thr = gmax - eps
    cdef double step = (hi - lo) / (n - 1)
    cdef Py_ssize_t first = -1, last = -1, kfirst = -1, klast = -1, i
    for i in range(n):
        if grades[i] > 0.0:
            if first < 0:
                first = i
            last = i
        if grades[i] >= thr:
            if kfirst < 0:
                kfirst = i
            klast = i
    if first > 0:
        first -= 1
    if last < n - 1:
        last += 1
    return (_grid_at(first, n, lo, hi, step), _grid_at(kfirst, n, lo, hi, step),
            _grid_at(klast, n, lo, hi, step), _grid_at(last, n, lo, hi, step))
