"""NumPy fallback for the weighted-L1 coordinate descent kernel.

Shares its contract with the compiled version in _cd_cy.pyx: minimize

    ||y - X b||^2 / (2n) + sum_j weights[j] * |b[j]|

by cyclic coordinate descent with an incrementally maintained residual,
updating beta in place. Returns (iterations, converged). A sweep converges
when the largest coordinate change falls below tol * (1 + max|beta|).
"""

import numpy as np


def cd_weighted_l1(X, y, weights, beta, tol, max_iter):
    n, d = X.shape
    colsq = np.einsum("ij,ij->j", X, X)
    r = y - X @ beta
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        max_change = 0.0
        max_abs = 0.0
        for j in range(d):
            cj = colsq[j]
            if cj <= 0.0:
                continue
            bj = beta[j]
            zj = X[:, j] @ r + cj * bj
            wj = weights[j] * n
            if zj > wj:
                bnew = (zj - wj) / cj
            elif zj < -wj:
                bnew = (zj + wj) / cj
            else:
                bnew = 0.0
            if bnew != bj:
                r -= (bnew - bj) * X[:, j]
                beta[j] = bnew
                change = abs(bnew - bj)
                if change > max_change:
                    max_change = change
            ab = abs(bnew)
            if ab > max_abs:
                max_abs = ab
        if max_change < tol * (1.0 + max_abs):
            converged = True
            break
    return it, converged
