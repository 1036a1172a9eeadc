"""Diagnostics for wide data: spurious correlation, variance estimation,
and residual-based exogeneity checks.

The spurious-correlation tools quantify how strongly pure noise columns can
mimic signal: the best single correlate of a target column, and the best
multiple correlation achievable by a small subset. Both are fed by one shared
correlation routine, so the subset-size-1 multiple correlation equals the
single-column statistic exactly, replicate by replicate.
"""

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .data import Dataset, sample_corr
from .errors import (
    ConfigurationError,
    SelectionTooLargeError,
    SingularityError,
    SizeLimitError,
    UndefinedCorrelationError,
    ValidationError,
)
from .report import ExperimentReport

EXACT_SUBSET_CAP = 1_000_000

# Candidate columns whose residual norm (after projection on the already
# selected ones) falls below this relative floor are treated as collinear
# and skipped by greedy selection.
_COLLINEAR_EPS = 1e-12


@dataclass(frozen=True)
class SpuriousCorrelationReport:
    """r_hat: best |single-column correlation| with the target;
    R_hat: best multiple correlation over subsets of the given size;
    subset: 0-based column indices realizing R_hat; method: greedy|exact."""

    r_hat: float
    R_hat: float
    subset: np.ndarray
    method: str


@dataclass(frozen=True)
class VarianceEstimate:
    sigma2_hat: float
    method: str
    support_size: int


@dataclass(frozen=True)
class EndogeneityReport:
    """raw_correlations: per-column correlation with the residuals;
    permuted_correlations: the same under row-permuted designs, pooled;
    tail_statistic: KS distance between raw and pooled null;
    permutations: number of permutations B;
    null_tail_statistics: per-permutation KS distances against the other
    permutations, giving a reference distribution for tail_statistic."""

    raw_correlations: np.ndarray
    permuted_correlations: np.ndarray
    tail_statistic: float
    permutations: int
    null_tail_statistics: np.ndarray

    def null_quantile(self, q=0.95):
        return float(np.quantile(self.null_tail_statistics, q))

    def flagged(self, q=0.95):
        """True when the raw tail statistic exceeds the null q-quantile."""
        return bool(self.tail_statistic > self.null_quantile(q))


@dataclass(frozen=True)
class OveridReport:
    """Per selected column j: correlation of X_j and of X_j^2 with the
    residuals. Both should be near zero under a correctly specified
    exogenous model."""

    selected: np.ndarray
    corr_x: np.ndarray
    corr_x2: np.ndarray


def _center_columns(X):
    Xc = X - X.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", Xc, Xc))
    return Xc, norms


def _corr_columns(X, v, what="column"):
    """Correlation of every column of X with v; the shared code path."""
    vc = v - v.mean()
    nv = math.sqrt(float(vc @ vc))
    if nv == 0.0:
        raise UndefinedCorrelationError("target vector is constant")
    Xc, norms = _center_columns(X)
    bad = np.flatnonzero(norms == 0.0)
    if bad.size:
        raise UndefinedCorrelationError("%s %d is constant" % (what, int(bad[0])))
    return np.clip((Xc.T @ vc) / (norms * nv), -1.0, 1.0)


def max_spurious_corr(data):
    """Largest |correlation| between column 0 and any other column."""
    if data.d < 2:
        raise ValidationError("need at least 2 columns")
    corr = _corr_columns(data.X[:, 1:], data.X[:, 0])
    return float(np.max(np.abs(corr)))


def _greedy_indices(C, t, size):
    """Forward selection of `size` columns of C maximizing multiple
    correlation with t. Returns (indices in pick order, R).

    Keeps an orthonormal basis of the selected columns; each step picks the
    column whose residual direction gains the most explained variance.
    """
    n = t.shape[0]
    tc = t - t.mean()
    nt = math.sqrt(float(tc @ tc))
    if nt == 0.0:
        raise UndefinedCorrelationError("target vector is constant")
    Cres = C - C.mean(axis=0)
    orig_sq = np.einsum("ij,ij->j", Cres, Cres)
    if np.any(orig_sq == 0.0):
        j = int(np.flatnonzero(orig_sq == 0.0)[0])
        raise UndefinedCorrelationError("column %d is constant" % j)
    tres = tc.copy()
    picked = []
    proj_sq = 0.0
    for step in range(size):
        res_sq = np.einsum("ij,ij->j", Cres, Cres)
        usable = res_sq > _COLLINEAR_EPS * orig_sq
        if picked:
            usable[picked] = False
        if not np.any(usable):
            break
        dots = Cres.T @ tres
        gains = np.where(usable, dots * dots / np.where(usable, res_sq, 1.0), -np.inf)
        j = int(np.argmax(gains))
        q = Cres[:, j] / math.sqrt(res_sq[j])
        coef = float(q @ tres)
        proj_sq += coef * coef
        tres = tres - coef * q
        Cres = Cres - np.outer(q, q @ Cres)
        picked.append(j)
    R = math.sqrt(proj_sq) / nt
    return picked, float(min(1.0, R))


def _exact_best_subset_r(C, t, size):
    """Exhaustive multiple correlation over all subsets of the given size."""
    n, p = C.shape
    count = math.comb(p, size)
    if count > EXACT_SUBSET_CAP:
        raise SizeLimitError(
            "exact search over %d subsets exceeds the cap %d; use method='greedy'"
            % (count, EXACT_SUBSET_CAP)
        )
    tc = t - t.mean()
    tt = float(tc @ tc)
    if tt == 0.0:
        raise UndefinedCorrelationError("target vector is constant")
    Cc, norms = _center_columns(C)
    if np.any(norms == 0.0):
        j = int(np.flatnonzero(norms == 0.0)[0])
        raise UndefinedCorrelationError("column %d is constant" % j)
    G = Cc.T @ Cc
    g = Cc.T @ tc
    best_r2 = -1.0
    best = None
    combos = itertools.combinations(range(p), size)
    chunk = 65536
    while True:
        idx = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if idx.size == 0:
            break
        Gs = G[idx[:, :, None], idx[:, None, :]]
        gs = g[idx]
        try:
            sol = np.linalg.solve(Gs, gs[:, :, None])[:, :, 0]
            r2 = np.einsum("km,km->k", gs, sol) / tt
        except np.linalg.LinAlgError:
            r2 = np.empty(idx.shape[0])
            for k in range(idx.shape[0]):
                coef, _, _, _ = np.linalg.lstsq(Cc[:, idx[k]], tc, rcond=None)
                fit = Cc[:, idx[k]] @ coef
                r2[k] = float(fit @ fit) / tt
        k = int(np.argmax(r2))
        if r2[k] > best_r2:
            best_r2 = float(r2[k])
            best = idx[k]
    r = math.sqrt(min(max(best_r2, 0.0), 1.0))
    return list(best), r


def max_multiple_corr(data, subset_size, method="greedy"):
    """Best (multiple) correlation between column 0 and subsets of the rest.

    subset_size=1 reduces to max_spurious_corr through the identical
    correlation routine, so the two statistics agree exactly. For larger
    subsets, method "greedy" runs forward selection and "exact" enumerates
    all subsets (capped at one million). Reported subset indices refer to
    the original columns of X (so they start at 1).
    """
    if data.d < 2:
        raise ValidationError("need at least 2 columns")
    if not 1 <= subset_size <= data.d - 1:
        raise ConfigurationError("subset_size must lie in [1, d-1]")
    if method not in ("greedy", "exact"):
        raise ConfigurationError("method must be 'greedy' or 'exact'")
    t = data.X[:, 0]
    C = data.X[:, 1:]
    corr = _corr_columns(C, t)
    r_hat = float(np.max(np.abs(corr)))
    if subset_size == 1:
        j = int(np.argmax(np.abs(corr)))
        return SpuriousCorrelationReport(
            r_hat, r_hat, np.array([j + 1], dtype=np.int64), method
        )
    if method == "greedy":
        picked, R = _greedy_indices(C, t, subset_size)
    else:
        picked, R = _exact_best_subset_r(C, t, subset_size)
        # The best singleton expands to a feasible subset, so r_hat is a
        # valid lower bound; flooring shields the R_hat >= r_hat guarantee
        # from the different rounding of the Gram-solve route.
        R = max(R, r_hat)
    subset = np.array(sorted(j + 1 for j in picked), dtype=np.int64)
    return SpuriousCorrelationReport(r_hat, R, subset, method)


def greedy_spurious_support(data, size):
    """Columns of X greedily selected to correlate with the response.

    This is the forward-selection machinery of max_multiple_corr aimed at y;
    on a null model it returns the support that most flatters the fit.
    """
    y = data.require_y()
    if not 1 <= size <= data.d:
        raise ConfigurationError("size must lie in [1, d]")
    picked, _ = _greedy_indices(data.X, y, size)
    return np.array(sorted(picked), dtype=np.int64)


def spurious_experiment(n, d_list, reps, subset_size, seed, method="greedy"):
    """Monte Carlo distribution of r_hat and R_hat on pure-noise designs.

    Each (d, replicate) pair gets its own RNG stream derived from the master
    seed, so results do not depend on execution order. Returns an
    ExperimentReport with the per-replicate values and their quantiles.
    """
    t0 = time.perf_counter()
    d_list = [int(d) for d in d_list]
    if not d_list or min(d_list) < 2:
        raise ConfigurationError("d_list entries must be >= 2")
    if reps < 1 or n < 3:
        raise ConfigurationError("need reps >= 1 and n >= 3")
    if subset_size > min(d_list) - 1:
        raise ConfigurationError("subset_size must be < min(d_list)")
    values = []
    quantiles = []
    summary = {}
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    for d in d_list:
        r_all = np.empty(reps)
        R_all = np.empty(reps)
        for rep in range(reps):
            rng = np.random.default_rng([seed, d, rep])
            ds = Dataset(rng.standard_normal((n, d)))
            rep_out = max_multiple_corr(ds, subset_size, method)
            r_all[rep] = rep_out.r_hat
            R_all[rep] = rep_out.R_hat
            values.append([d, rep, rep_out.r_hat, rep_out.R_hat])
        for stat, arr in (("r_hat", r_all), ("R_hat", R_all)):
            quantiles.append([d, stat] + [float(np.quantile(arr, q)) for q in qs])
        summary["median_r_hat_d%d" % d] = float(np.median(r_all))
        summary["median_R_hat_d%d" % d] = float(np.median(R_all))
    return ExperimentReport(
        experiment="spurious",
        params={"n": n, "d_list": d_list, "reps": reps, "subset_size": subset_size,
                "seed": seed, "method": method},
        tables={
            "values": (["d", "rep", "r_hat", "R_hat"], values),
            "quantiles": (["d", "stat", "q05", "q25", "q50", "q75", "q95"], quantiles),
        },
        summary=summary,
        wall_clock=time.perf_counter() - t0,
    )


def residual_variance(data, support):
    """Plug-in noise variance: RSS/(n - |S|) after OLS on the support.

    Understates the truth badly when the support was dredged from the same
    data; see rcv_variance for the refitted alternative.
    """
    y = data.require_y()
    support = np.unique(np.asarray(support, dtype=np.int64)) if len(support) else \
        np.empty(0, dtype=np.int64)
    if support.size and (support[0] < 0 or support[-1] >= data.d):
        raise ValidationError("support indices outside [0, %d)" % data.d)
    if support.size >= data.n:
        raise ValidationError("support size must be smaller than n")
    if support.size:
        cols = data.X[:, support]
        coef, _, rank, _ = np.linalg.lstsq(cols, y, rcond=None)
        if rank < support.size:
            raise SingularityError("design restricted to the support is rank deficient")
        r = y - cols @ coef
    else:
        r = y
    sigma2 = float(r @ r) / (data.n - support.size)
    return VarianceEstimate(sigma2, "naive", int(support.size))


def rcv_variance(data, selector, seed):
    """Refitted cross-validation variance estimate.

    The rows are split in half at random; each half selects a support via
    `selector` (a callable Dataset -> indices), the variance is estimated by
    OLS refit of that support on the *other* half, and the two estimates are
    averaged. Selection and estimation never see the same rows, which removes
    the dredging bias of residual_variance.
    """
    y = data.require_y()
    if data.n < 4:
        raise ValidationError("rcv needs at least 4 rows")
    perm = np.random.default_rng(seed).permutation(data.n)
    half = data.n // 2
    parts = (perm[:half], perm[half:])
    estimates = []
    sizes = []
    for own, other in ((0, 1), (1, 0)):
        sel_idx = parts[own]
        fit_idx = parts[other]
        sel_ds = Dataset(data.X[sel_idx], y[sel_idx])
        support = np.unique(np.asarray(selector(sel_ds), dtype=np.int64))
        if support.size and (support[0] < 0 or support[-1] >= data.d):
            raise ValidationError("selector returned indices outside [0, %d)" % data.d)
        if support.size >= fit_idx.size:
            raise SelectionTooLargeError(
                "selected %d columns but the refit half has only %d rows"
                % (support.size, fit_idx.size)
            )
        fit_ds = Dataset(data.X[fit_idx], y[fit_idx])
        estimates.append(residual_variance(fit_ds, support).sigma2_hat)
        sizes.append(int(support.size))
    return VarianceEstimate(0.5 * (estimates[0] + estimates[1]), "rcv", max(sizes))


def ks_distance(a, b):
    """Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|."""
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.size == 0 or b.size == 0:
        raise ValidationError("ks_distance needs nonempty samples")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def endogeneity_diagnostic(data, fit, permutations, seed):
    """Compare residual correlations against a row-permutation null.

    For each column, correlate it with the residuals of `fit` (a FitResult,
    or any residual vector). The same correlations are recomputed B times
    with the design rows permuted against fixed residuals, pooled into a
    null sample. tail_statistic is the KS distance between the raw and
    pooled sets; null_tail_statistics holds each permutation's KS distance
    against the remaining permutations, so `flagged()` can compare the
    statistic to its own null the same way.
    """
    resid = np.asarray(getattr(fit, "residuals", fit), dtype=np.float64)
    if resid.shape != (data.n,):
        raise ValidationError("residuals must have shape (%d,)" % data.n)
    if not isinstance(permutations, (int, np.integer)) or permutations < 2:
        raise ConfigurationError("permutations must be an integer >= 2")
    raw = _corr_columns(data.X, resid)
    B = int(permutations)
    n, d = data.n, data.d
    perm_corr = np.empty((B, d))
    for b in range(B):
        rng = np.random.default_rng([seed, b])
        rows = rng.permutation(n)
        perm_corr[b] = _corr_columns(data.X[rows], resid)
    pooled = perm_corr.ravel()
    tail = ks_distance(raw, pooled)
    null_tails = np.empty(B)
    mask = np.ones(B, dtype=bool)
    for b in range(B):
        mask[b] = False
        null_tails[b] = ks_distance(perm_corr[b], perm_corr[mask].ravel())
        mask[b] = True
    return EndogeneityReport(raw, pooled, tail, B, null_tails)


def overid_check(data, fit, selected):
    """Correlations of X_j and X_j^2 with the residuals, per selected j.

    Both moments should vanish for exogenous noise; a large corr_x2 with a
    small corr_x points at coupling through the second moment.
    """
    resid = np.asarray(getattr(fit, "residuals", fit), dtype=np.float64)
    if resid.shape != (data.n,):
        raise ValidationError("residuals must have shape (%d,)" % data.n)
    selected = np.unique(np.asarray(selected, dtype=np.int64))
    if selected.size == 0:
        raise ValidationError("selected set is empty")
    if selected[0] < 0 or selected[-1] >= data.d:
        raise ValidationError("selected indices outside [0, %d)" % data.d)
    corr_x = np.empty(selected.size)
    corr_x2 = np.empty(selected.size)
    for i, j in enumerate(selected):
        corr_x[i] = sample_corr(data.X[:, j], resid)
        corr_x2[i] = sample_corr(data.X[:, j] ** 2, resid)
    return OveridReport(selected, corr_x, corr_x2)
