# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled weighted-L1 coordinate descent kernel.

Contract matches _cd_py.cd_weighted_l1: beta is updated in place and the
return value is (iterations, converged). X must be Fortran-ordered float64.
"""

import numpy as np


def cd_weighted_l1(const double[::1, :] X, const double[::1] y,
                   const double[::1] weights, double[::1] beta,
                   double tol, int max_iter):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef double[::1] r = np.empty(n, dtype=np.float64)
    cdef double[::1] colsq = np.empty(d, dtype=np.float64)
    cdef Py_ssize_t i, j, it, done
    cdef double acc, bj, bnew, zj, wj, cj, change, ab, max_change, max_abs
    cdef bint converged = False

    for i in range(n):
        r[i] = y[i]
    for j in range(d):
        acc = 0.0
        for i in range(n):
            acc += X[i, j] * X[i, j]
        colsq[j] = acc
        bj = beta[j]
        if bj != 0.0:
            for i in range(n):
                r[i] -= X[i, j] * bj

    done = 0
    for it in range(1, max_iter + 1):
        max_change = 0.0
        max_abs = 0.0
        for j in range(d):
            cj = colsq[j]
            if cj <= 0.0:
                continue
            bj = beta[j]
            acc = 0.0
            for i in range(n):
                acc += X[i, j] * r[i]
            zj = acc + cj * bj
            wj = weights[j] * n
            if zj > wj:
                bnew = (zj - wj) / cj
            elif zj < -wj:
                bnew = (zj + wj) / cj
            else:
                bnew = 0.0
            if bnew != bj:
                change = bnew - bj
                for i in range(n):
                    r[i] -= change * X[i, j]
                beta[j] = bnew
                if change < 0.0:
                    change = -change
                if change > max_change:
                    max_change = change
            ab = bnew if bnew >= 0.0 else -bnew
            if ab > max_abs:
                max_abs = ab
        done = it
        if max_change < tol * (1.0 + max_abs):
            converged = True
            break
    return int(done), bool(converged)
