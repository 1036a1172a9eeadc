"""Dense two-phase primal simplex for small linear programs.

Solves   minimize c'x  subject to  A x <= b,  x >= 0.

Written for the moderate problem sizes this package produces (a few thousand
variables at most). Bland's smallest-index rule is used for both the entering
and the leaving choice, which rules out cycling; the price is extra pivots,
irrelevant at this scale. Pivot elements smaller than EPS in magnitude are
treated as zero.
"""

import numpy as np

from .errors import InfeasibleError, UnboundedError, ValidationError

EPS = 1e-9


def _pivot(T, cost, basis, row, col):
    T[row] /= T[row, col]
    if cost is not None and cost[col] != 0.0:
        cost -= cost[col] * T[row]
        cost[col] = 0.0
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    nz = colvals != 0.0
    if nz.any():
        T[nz] -= np.outer(colvals[nz], T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _bland_enter(cost, width):
    for j in range(width):
        if cost[j] < -EPS:
            return j
    return -1


def _bland_leave(T, basis, col):
    best = -1
    best_ratio = np.inf
    for i in range(T.shape[0]):
        a = T[i, col]
        if a > EPS:
            ratio = T[i, -1] / a
            if ratio < best_ratio - EPS or (
                ratio <= best_ratio + EPS and (best < 0 or basis[i] < basis[best])
            ):
                best = i
                best_ratio = min(ratio, best_ratio)
    return best


def _run_phase(T, cost, basis, width):
    pivots = 0
    while True:
        col = _bland_enter(cost, width)
        if col < 0:
            return pivots
        row = _bland_leave(T, basis, col)
        if row < 0:
            raise UnboundedError("LP unbounded: column %d has no blocking row" % col)
        _pivot(T, cost, basis, row, col)
        pivots += 1


def linprog_simplex(c, A, b):
    """Minimize c'x with A x <= b, x >= 0; returns (x, objective, pivots).

    Raises InfeasibleError (with the phase-1 objective as certificate) or
    UnboundedError. The returned x is a vertex: nonbasic entries are exact
    zeros.
    """
    c = np.asarray(c, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if A.ndim != 2 or c.ndim != 1 or b.ndim != 1:
        raise ValidationError("need 2-d A and 1-d c, b")
    m, nv = A.shape
    if c.shape[0] != nv or b.shape[0] != m:
        raise ValidationError("inconsistent LP dimensions")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValidationError("LP data must be finite")

    # Columns: nv structural | m slacks | n_art artificials | rhs.
    neg = b < 0
    n_art = int(neg.sum())
    n_slack = m
    width = nv + n_slack + n_art
    T = np.zeros((m, width + 1))
    T[:, :nv] = A
    T[:, nv:nv + n_slack] = np.eye(m)
    T[:, -1] = b
    basis = np.empty(m, dtype=np.int64)
    k = 0
    for i in range(m):
        if neg[i]:
            T[i] *= -1.0
            col = nv + n_slack + k
            T[i, col] = 1.0
            basis[i] = col
            k += 1
        else:
            basis[i] = nv + i

    pivots = 0
    if n_art:
        cost1 = np.zeros(width + 1)
        cost1[nv + n_slack:width] = 1.0
        for i in range(m):
            if basis[i] >= nv + n_slack:
                cost1 -= T[i]
        pivots += _run_phase(T, cost1, basis, width)
        phase1_obj = -cost1[-1]
        if phase1_obj > 1e-7 * (1.0 + float(np.abs(b).max())):
            raise InfeasibleError("LP infeasible: phase-1 objective %.3e > 0" % phase1_obj)
        # Any artificial still basic sits at level zero: pivot it out on a
        # structural/slack column, or drop its row as redundant.
        drop = []
        for i in range(m):
            if basis[i] >= nv + n_slack:
                row_cols = np.flatnonzero(np.abs(T[i, :nv + n_slack]) > EPS)
                if row_cols.size:
                    _pivot(T, None, basis, i, int(row_cols[0]))
                    pivots += 1
                else:
                    drop.append(i)
        if drop:
            keep = np.setdiff1d(np.arange(m), drop)
            T = T[keep]
            basis = basis[keep]
            m = T.shape[0]
        T = np.delete(T, np.s_[nv + n_slack:width], axis=1)
        width = nv + n_slack

    cost2 = np.zeros(width + 1)
    cost2[:nv] = c
    for i in range(m):
        if basis[i] < nv and c[basis[i]] != 0.0:
            cost2 -= c[basis[i]] * T[i]
    pivots += _run_phase(T, cost2, basis, width)

    x = np.zeros(nv)
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = T[i, -1]
    return x, float(c @ x), pivots
