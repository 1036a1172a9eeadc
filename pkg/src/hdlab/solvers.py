"""Sparse linear-model solvers sharing one result type.

Loss convention throughout: ||y - X b||^2 / (2n) plus the solver's own
regularizer. Penalized solvers (coordinate descent, proximal gradient, the
reweighted scheme) require standardized columns so one lambda means the same
thing for every coordinate; constraint-based and refit solvers do not.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import Dataset, is_standardized
from .errors import (
    ConfigurationError,
    NotStandardizedError,
    SingularityError,
    SizeLimitError,
    SolverError,
    StepSizeError,
    ValidationError,
)
from .penalties import PenaltySpec, penalty_derivative, penalty_value, prox
from .simplex import linprog_simplex

BEST_SUBSET_MAX_D = 15


@dataclass
class FitResult:
    """Outcome of one solve.

    beta_hat : (d,) coefficient vector.
    active_set : sorted indices of the nonzero coefficients.
    residuals : y - X beta_hat.
    objective : solver-specific objective at beta_hat (see each solver).
    iterations : sweeps / iterations / pivots, depending on the solver.
    converged : whether the stopping rule fired before the iteration cap.
    objective_trace : per-iteration objective values where the solver tracks
        them (proximal gradient and the reweighted scheme), else None.
    """

    beta_hat: np.ndarray
    active_set: np.ndarray
    residuals: np.ndarray
    objective: float
    iterations: int
    converged: bool
    objective_trace: np.ndarray = None


def _finish(data, beta, objective, iterations, converged, trace=None):
    beta = np.asarray(beta, dtype=np.float64)
    residuals = data.y - data.X @ beta
    active = np.flatnonzero(beta)
    if trace is not None:
        trace = np.asarray(trace, dtype=np.float64)
    return FitResult(beta, active, residuals, float(objective), int(iterations),
                     bool(converged), trace)


def _require_standardized(data):
    if not is_standardized(data.X):
        raise NotStandardizedError(
            "penalized solvers need standardized columns; run standardize() first"
        )


def _quadratic_loss(data, beta):
    r = data.y - data.X @ beta
    return float(r @ r) / (2.0 * data.n)


def penalized_objective(data, beta, penalty):
    """||y - X b||^2/(2n) + sum_j P(|b_j|)."""
    return _quadratic_loss(data, beta) + float(np.sum(penalty_value(penalty, beta)))


def l0_objective(data, beta, lam):
    """||y - X b||^2/(2n) + lam * (number of nonzeros)."""
    return _quadratic_loss(data, beta) + lam * int(np.count_nonzero(beta))


def coord_descent_weighted_l1(data, weights, beta_init=None, tol=1e-10, max_iter=20000):
    """Cyclic coordinate descent for per-coordinate weighted L1.

    Minimizes ||y - X b||^2/(2n) + sum_j weights[j] |b_j| on standardized
    data. The `objective` field reports that weighted value.
    """
    y = data.require_y()
    _require_standardized(data)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if weights.shape != (data.d,):
        raise ValidationError("weights must have shape (%d,)" % data.d)
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise ValidationError("weights must be finite and >= 0")
    if not (np.isfinite(tol) and tol > 0):
        raise ConfigurationError("tol must be positive")
    if max_iter < 1:
        raise ConfigurationError("max_iter must be >= 1")
    if beta_init is None:
        beta = np.zeros(data.d)
    else:
        beta = np.array(beta_init, dtype=np.float64, copy=True)
        if beta.shape != (data.d,) or not np.all(np.isfinite(beta)):
            raise ValidationError("beta_init must be a finite vector of length d")
    X_f = np.asfortranarray(data.X)
    y_c = np.ascontiguousarray(y)
    iters, converged = kernels.cd_weighted_l1(X_f, y_c, weights, beta, tol, max_iter)
    obj = _quadratic_loss(data, beta) + float(weights @ np.abs(beta))
    return _finish(data, beta, obj, iters, converged)


def coord_descent_l1(data, lam, beta_init=None, tol=1e-10, max_iter=20000):
    """Lasso by coordinate descent: all coordinates share the weight lam."""
    if not (np.isfinite(lam) and lam >= 0):
        raise ValidationError("lam must be finite and >= 0")
    return coord_descent_weighted_l1(
        data, np.full(data.d, float(lam)), beta_init=beta_init, tol=tol, max_iter=max_iter
    )


def kkt_violation(data, beta, weights):
    """Largest violation of the weighted-L1 stationarity conditions.

    For g = X'(y - X beta)/n the optimum satisfies |g_j| <= w_j on inactive
    coordinates and g_j = sign(beta_j) w_j on active ones; returns the max
    excess over both sets (0 at an exact optimum).
    """
    beta = np.asarray(beta, dtype=np.float64)
    w = np.broadcast_to(np.asarray(weights, dtype=np.float64), (data.d,))
    g = data.X.T @ (data.require_y() - data.X @ beta) / data.n
    active = beta != 0
    viol = 0.0
    if np.any(~active):
        viol = max(viol, float(np.max(np.abs(g[~active]) - w[~active], initial=-np.inf)))
    if np.any(active):
        viol = max(viol, float(np.max(np.abs(g[active] - np.sign(beta[active]) * w[active]))))
    return max(viol, 0.0)


def largest_gram_eigenvalue(X, max_iter=500, tol=1e-12):
    """Top eigenvalue of X'X/n by power iteration (fixed internal seed)."""
    n, d = X.shape
    v = np.random.default_rng(0).standard_normal(d)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    v /= nv
    est = 0.0
    for _ in range(max_iter):
        w = X.T @ (X @ v) / n
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(nw - est) <= tol * max(1.0, nw):
            return float(nw)
        est = nw
    return float(est)


def ista(data, penalty, step=None, tol=1e-10, max_iter=5000):
    """Proximal gradient for quadratic loss plus any supported penalty.

    The step must satisfy step <= 1/L with L the top eigenvalue of X'X/n
    (estimated internally; the default step is exactly 1/L). With an exact
    prox this makes the objective nonincreasing for every family, which is
    also tracked in objective_trace. A rising objective on the convex
    penalty raises StepSizeError.
    """
    y = data.require_y()
    if not isinstance(penalty, PenaltySpec):
        raise ConfigurationError("penalty must be a PenaltySpec")
    X = data.X
    n = data.n
    L = largest_gram_eigenvalue(X)
    if L == 0.0:
        obj = penalized_objective(data, np.zeros(data.d), penalty)
        return _finish(data, np.zeros(data.d), obj, 0, True, trace=[obj])
    if step is None:
        step = 1.0 / L
    else:
        if not (np.isfinite(step) and step > 0):
            raise StepSizeError("step must be finite and > 0")
        if step > (1.0 + 1e-6) / L:
            raise StepSizeError(
                "step %.3e exceeds 1/L = %.3e for this design" % (step, 1.0 / L)
            )

    beta = np.zeros(data.d)
    r = y.copy()
    obj = penalized_objective(data, beta, penalty)
    trace = [obj]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        grad = -(X.T @ r) / n
        beta_new = prox(penalty, beta - step * grad, step)
        r = y - X @ beta_new
        new_obj = float(r @ r) / (2.0 * n) + float(np.sum(penalty_value(penalty, beta_new)))
        trace.append(new_obj)
        if penalty.family == "soft" and new_obj > obj + 1e-8 * (1.0 + abs(obj)):
            raise StepSizeError(
                "objective rose from %.6e to %.6e; step %.3e too large" % (obj, new_obj, step)
            )
        delta = float(np.max(np.abs(beta_new - beta)))
        beta = beta_new
        obj = new_obj
        if delta < tol * (1.0 + float(np.max(np.abs(beta)))):
            converged = True
            break
    return _finish(data, beta, obj, it, converged, trace=trace)


def lla(data, penalty, init=None, tol=1e-8, max_outer=20, inner_tol=1e-10,
        inner_max_iter=20000):
    """Local linear approximation for the folded-concave penalties.

    Each outer round freezes weights w_j = P'(|b_j|) and solves the weighted
    L1 problem by coordinate descent, warm-started from the current iterate
    so the true penalized objective (tracked in objective_trace) never
    increases. From a zero start the first round is exactly the Lasso at the
    penalty's lam. Stops when the weight vector moves less than tol in sup
    norm, or after max_outer rounds.
    """
    if penalty.family not in ("scad", "mcp"):
        raise ConfigurationError("the reweighted scheme needs a scad or mcp penalty")
    data.require_y()
    _require_standardized(data)
    if max_outer < 1:
        raise ConfigurationError("max_outer must be >= 1")
    if init is None:
        beta = np.zeros(data.d)
    else:
        beta = np.array(init, dtype=np.float64, copy=True)
        if beta.shape != (data.d,) or not np.all(np.isfinite(beta)):
            raise ValidationError("init must be a finite vector of length d")
    weights = penalty_derivative(penalty, np.abs(beta))
    trace = [penalized_objective(data, beta, penalty)]
    converged = False
    outer = 0
    for outer in range(1, max_outer + 1):
        fit = coord_descent_weighted_l1(
            data, weights, beta_init=beta, tol=inner_tol, max_iter=inner_max_iter
        )
        beta = fit.beta_hat
        trace.append(penalized_objective(data, beta, penalty))
        new_weights = penalty_derivative(penalty, np.abs(beta))
        if float(np.max(np.abs(new_weights - weights))) < tol:
            weights = new_weights
            converged = True
            break
        weights = new_weights
    return _finish(data, beta, trace[-1], outer, converged, trace=trace)


def best_subset_l0(data, lam):
    """Exact L0-penalized fit by exhausting supports (d <= 15).

    Minimizes ||y - X b||^2/(2n) + lam * |support| with an OLS refit on each
    support; supports are scanned by size then lexicographic order, and ties
    keep the first minimizer, so smaller supports win exact ties.
    """
    y = data.require_y()
    if data.d > BEST_SUBSET_MAX_D:
        raise SizeLimitError(
            "best_subset_l0 enumerates 2^d supports; d=%d exceeds the cap %d"
            % (data.d, BEST_SUBSET_MAX_D)
        )
    if not (np.isfinite(lam) and lam >= 0):
        raise ValidationError("lam must be finite and >= 0")
    X = data.X
    n = data.n
    best_obj = float(y @ y) / (2.0 * n)
    best_support = ()
    best_coef = np.zeros(0)
    count = 1
    for size in range(1, data.d + 1):
        for support in itertools.combinations(range(data.d), size):
            cols = X[:, support]
            coef, _, _, _ = np.linalg.lstsq(cols, y, rcond=None)
            r = y - cols @ coef
            obj = float(r @ r) / (2.0 * n) + lam * size
            count += 1
            if obj < best_obj:
                best_obj = obj
                best_support = support
                best_coef = coef
    beta = np.zeros(data.d)
    if best_support:
        beta[list(best_support)] = best_coef
    return _finish(data, beta, best_obj, count, True)


@dataclass(frozen=True)
class HighConfidenceSetSpec:
    """Constraint set {b : ||X'(y - X b)||_inf <= gamma_n} over a dataset."""

    dataset: Dataset
    gamma_n: float

    def __post_init__(self):
        self.dataset.require_y()
        if not (np.isfinite(self.gamma_n) and self.gamma_n >= 0):
            raise ValidationError("gamma_n must be finite and >= 0")


def default_gamma_n(data, scale=1.0):
    """Pilot constraint radius: scale * sd(y) * sqrt(2 log(d) / n)."""
    y = data.require_y()
    if not (np.isfinite(scale) and scale > 0):
        raise ConfigurationError("scale must be positive")
    if data.n < 2:
        raise ValidationError("default gamma_n needs at least 2 rows")
    sigma = float(np.std(y, ddof=1))
    return scale * sigma * math.sqrt(2.0 * math.log(data.d) / data.n)


def hcs_membership(spec, beta, rtol=1e-9):
    """Whether beta satisfies ||X'(y - X beta)||_inf <= gamma_n.

    A small relative tolerance absorbs round-off so the solver's own optimum
    always passes; assumes O(1) data scale.
    """
    data = spec.dataset
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (data.d,):
        raise ValidationError("beta must have shape (%d,)" % data.d)
    val = float(np.max(np.abs(data.X.T @ (data.y - data.X @ beta))))
    return val <= spec.gamma_n * (1.0 + rtol) + rtol


def dantzig_selector(spec):
    """Minimum-L1 point of the constraint set, via the simplex LP.

    Splits beta into positive and negative parts and solves the resulting
    inequality-form LP exactly; the objective field is ||beta||_1 and
    iterations counts simplex pivots. The returned vertex is checked for
    feasibility within 1e-8 before being accepted.
    """
    data = spec.dataset
    X, y = data.X, data.y
    d = data.d
    G = X.T @ X
    g = X.T @ y
    gamma = spec.gamma_n
    A = np.block([[G, -G], [-G, G]])
    b = np.concatenate([gamma + g, gamma - g])
    c = np.ones(2 * d)
    try:
        x, _, pivots = linprog_simplex(c, A, b)
    except SolverError as exc:
        raise SolverError("dantzig LP failed: %s" % exc)
    beta = x[:d] - x[d:]
    slack = float(np.max(np.abs(X.T @ (y - X @ beta)))) - gamma
    if slack > 1e-8 * (1.0 + gamma):
        raise SolverError(
            "simplex returned an infeasible point: constraint excess %.3e" % slack
        )
    obj = float(np.sum(np.abs(beta)))
    return _finish(data, beta, obj, pivots, True)


def ols_refit(data, support):
    """Least squares on the given support, zeros elsewhere.

    Requires X restricted to the support to have full column rank; raises
    SingularityError otherwise. objective is the quadratic loss.
    """
    y = data.require_y()
    support = np.unique(np.asarray(support, dtype=np.int64))
    if support.size and (support[0] < 0 or support[-1] >= data.d):
        raise ValidationError("support indices outside [0, %d)" % data.d)
    beta = np.zeros(data.d)
    if support.size:
        if support.size > data.n:
            raise SingularityError(
                "support of size %d cannot be refit on %d rows" % (support.size, data.n)
            )
        cols = data.X[:, support]
        coef, _, rank, _ = np.linalg.lstsq(cols, y, rcond=None)
        if rank < support.size:
            raise SingularityError("design restricted to the support is rank deficient")
        beta[support] = coef
    return _finish(data, beta, _quadratic_loss(data, beta), 1, True)


def cross_validate(data, lambda_grid, folds, seed, solver=None):
    """K-fold cross-validation over a lambda grid.

    Folds come from a seeded permutation split (np.array_split order); each
    training fold is standardized internally and its column transform is
    applied to the held-out rows, so the solver's standardization contract
    holds within every fold. The grid is traversed from largest to smallest
    lambda with warm starts. Returns (lambda_star, cv_curve) where cv_curve
    is the pooled held-out mean squared error aligned with lambda_grid, and
    lambda_star is the largest lambda attaining the minimum.

    The solver handle takes (train_dataset, lam, beta_init) and returns a
    FitResult; the default is the Lasso coordinate descent.
    """
    y = data.require_y()
    grid = np.asarray(lambda_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0 or not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise ConfigurationError("lambda_grid must be a nonempty vector of finite values >= 0")
    if not isinstance(folds, (int, np.integer)) or folds < 2:
        raise ConfigurationError("folds must be an integer >= 2")
    if folds > data.n:
        raise ConfigurationError("more folds than rows")
    if solver is None:
        def solver(ds, lam, beta_init):
            return coord_descent_l1(ds, lam, beta_init=beta_init)

    perm = np.random.default_rng(seed).permutation(data.n)
    chunks = np.array_split(perm, folds)
    if min(len(ch) for ch in chunks) < 2:
        raise ConfigurationError("every fold needs at least 2 rows")
    order = np.argsort(-grid, kind="stable")
    sq_err = np.zeros(grid.size)
    for i, test_idx in enumerate(chunks):
        train_idx = np.concatenate([chunks[k] for k in range(folds) if k != i])
        Xtr = data.X[train_idx]
        mu = Xtr.mean(axis=0)
        sd = Xtr.std(axis=0, ddof=1)
        if np.any(sd == 0.0):
            j = int(np.flatnonzero(sd == 0.0)[0])
            raise ConfigurationError(
                "column %s is constant within a training fold" % data.name_of(j)
            )
        train = Dataset((Xtr - mu) / sd, y[train_idx])
        Xte = (data.X[test_idx] - mu) / sd
        beta_ws = None
        for idx in order:
            fit = solver(train, float(grid[idx]), beta_ws)
            beta_ws = fit.beta_hat
            resid = y[test_idx] - Xte @ fit.beta_hat
            sq_err[idx] += float(resid @ resid)
    cv_curve = sq_err / data.n
    at_min = np.flatnonzero(cv_curve == cv_curve.min())
    lambda_star = float(grid[at_min].max())
    return lambda_star, cv_curve
