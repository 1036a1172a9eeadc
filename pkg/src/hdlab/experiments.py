"""Canned experiments tying the pieces together into reproducible reports.

Each function returns an ExperimentReport whose tables depend only on the
passed parameters (per-replicate RNG streams are derived from the master
seed), so re-running with the parameters embedded in a report reproduces
every table byte for byte.
"""

import time

import numpy as np

from .data import (
    Dataset,
    LinearModelSpec,
    TwoClassGaussianSpec,
    gen_linear,
    gen_spiked,
    gen_two_class,
    standardize,
)
from .diagnostics import (
    endogeneity_diagnostic,
    greedy_spurious_support,
    overid_check,
    rcv_variance,
    residual_variance,
    spurious_experiment,
)
from .dimred import pairwise_distances, pca, random_projection
from .errors import ConfigurationError, UndefinedMetricError, ValidationError
from .penalties import PenaltySpec, penalty_value
from .report import ExperimentReport
from .solvers import coord_descent_l1, cross_validate, ols_refit


def _separation(X, labels):
    """Between-centroid distance over mean within-class spread."""
    A = X[labels == 0.0]
    B = X[labels == 1.0]
    gap = float(np.linalg.norm(A.mean(axis=0) - B.mean(axis=0)))
    within = 0.0
    for block in (A, B):
        diffs = block - block.mean(axis=0)
        within += float(np.sum(np.sqrt(np.einsum("ij,ij->i", diffs, diffs))))
    within /= X.shape[0]
    if within == 0.0:
        raise UndefinedMetricError("within-class spread is zero")
    return gap / within


def _t_stat_order(X, labels):
    A = X[labels == 0.0]
    B = X[labels == 1.0]
    na, nb = A.shape[0], B.shape[0]
    va = A.var(axis=0, ddof=1)
    vb = B.var(axis=0, ddof=1)
    se = np.sqrt(va / na + vb / nb)
    se[se == 0.0] = np.inf
    t = np.abs(A.mean(axis=0) - B.mean(axis=0)) / se
    return np.lexsort((np.arange(X.shape[1]), -t))


def noise_accumulation_experiment(m_list=(2, 40, 200, 1000), n_per_class=100, d=1000,
                                  signal_count=10, signal_value=3.0, seed=0,
                                  rank_by="index"):
    """Class separation as more and more features enter the picture.

    Two Gaussian classes differ only in the first signal_count coordinates.
    For each m the first m features are kept (rank_by="index"; "t_stat"
    instead ranks features by the two-sample t statistic and keeps the top
    m). The report carries the 2-d principal-component projection of the
    kept features as the visual, the separation score measured in the full
    m-dimensional kept space, and the same score on the 2-d projection.
    """
    t0 = time.perf_counter()
    if rank_by not in ("index", "t_stat"):
        raise ConfigurationError("rank_by must be 'index' or 't_stat'")
    m_list = [int(m) for m in m_list]
    if len(set(m_list)) != len(m_list):
        raise ConfigurationError("m_list entries must be unique")
    for m in m_list:
        if not 2 <= m <= d:
            raise ConfigurationError("each m must lie in [2, d]")
    if not 0 <= signal_count <= d:
        raise ConfigurationError("signal_count must lie in [0, d]")
    mu2 = np.zeros(d)
    mu2[:signal_count] = signal_value
    spec = TwoClassGaussianSpec(n_per_class, d, np.zeros(d), mu2)
    data = gen_two_class(spec, seed)
    labels = data.y
    sep_rows = []
    proj_rows = []
    summary = {}
    for m in m_list:
        if rank_by == "index":
            cols = np.arange(m)
        else:
            cols = np.sort(_t_stat_order(data.X, labels)[:m])
        Xm = data.X[:, cols]
        proj = pca(Dataset(Xm), 2)
        scores = (Xm - Xm.mean(axis=0)) @ proj.basis
        sep_m = _separation(Xm, labels)
        sep_2d = _separation(scores, labels)
        sep_rows.append([m, sep_m, sep_2d])
        summary["separation_m%d" % m] = sep_m
        for i in range(scores.shape[0]):
            proj_rows.append([m, i, int(labels[i]), scores[i, 0], scores[i, 1]])
    return ExperimentReport(
        experiment="noise_accumulation",
        params={"m_list": m_list, "n_per_class": n_per_class, "d": d,
                "signal_count": signal_count, "signal_value": signal_value,
                "seed": seed, "rank_by": rank_by},
        tables={
            "separation": (["m", "separation", "separation_2d"], sep_rows),
            "projections": (["m", "row", "class", "pc1", "pc2"], proj_rows),
        },
        summary=summary,
        wall_clock=time.perf_counter() - t0,
    )


def spurious_correlation_experiment(seed=0, n=60, d_list=(800, 6400), reps=200,
                                    subset_size=4, method="greedy", paper_scale=False):
    """Monte Carlo of the two spurious-correlation statistics on pure noise.

    paper_scale bumps the replicate count to 1000; the desk default of 200
    keeps the run in seconds while leaving the medians stable.
    """
    reps_eff = 1000 if paper_scale else reps
    rep = spurious_experiment(n, d_list, reps_eff, subset_size, seed, method)
    rep.params["paper_scale"] = paper_scale
    return rep


def penalty_curves(lam=1.0, t_min=-3.0, t_max=3.0, points=601):
    """Penalty value curves on a sign-symmetric grid for the whole family."""
    if points < 2:
        raise ConfigurationError("points must be >= 2")
    t0 = time.perf_counter()
    grid = np.linspace(t_min, t_max, points)
    specs = [
        PenaltySpec("hard", lam),
        PenaltySpec("soft", lam),
        PenaltySpec("scad", lam, 2.1),
        PenaltySpec("scad", lam, 3.7),
        PenaltySpec("scad", lam, 100.0),
        PenaltySpec("mcp", lam, 1.0),
        PenaltySpec("mcp", lam, 3.0),
        PenaltySpec("mcp", lam, 100.0),
    ]
    rows = []
    for spec in specs:
        values = penalty_value(spec, grid)
        label = spec.label()
        for t, v in zip(grid, values):
            rows.append([label, t, v])
    return ExperimentReport(
        experiment="penalty_curves",
        params={"lam": lam, "t_min": t_min, "t_max": t_max, "points": points},
        tables={"curves": (["penalty", "t", "value"], rows)},
        summary={"n_penalties": len(specs)},
        wall_clock=time.perf_counter() - t0,
    )


def _median_relative_error(orig, reduced):
    keep = orig > 0.0
    if not np.any(keep):
        raise UndefinedMetricError("all rows coincide")
    rel = np.abs(reduced[keep] - orig[keep]) / orig[keep]
    return float(np.median(rel))


def projection_error_experiment(d_list=(100, 500, 2500), k_list=(10, 25, 50, 100, 250),
                                n=400, spike_count=10, spike_sd=5.0, seed=0):
    """Median pairwise-distance distortion: principal components vs random
    projection, across data width d and target dimension k.

    Combinations with k > min(n, d) are skipped (no valid projection of that
    rank). One dataset is drawn per d; both methods see the same data.
    """
    t0 = time.perf_counter()
    d_list = [int(d) for d in d_list]
    k_list = [int(k) for k in k_list]
    if min(k_list) < 1:
        raise ConfigurationError("k values must be >= 1")
    rows = []
    summary = {}
    for d in d_list:
        data = gen_spiked(n, d, min(spike_count, d), spike_sd, seed=[seed, d])
        orig = pairwise_distances(data.X)
        usable = [k for k in k_list if k <= min(n, d)]
        if not usable:
            continue
        base = pca(data, max(usable))
        for k in usable:
            sliced = base.basis[:, :k]
            red = pairwise_distances((data.X - data.X.mean(axis=0)) @ sliced)
            err_pca = _median_relative_error(orig, red)
            rows.append([d, k, "pca", err_pca])
            rp = random_projection(data, k, seed=[seed, d, k])
            err_rp = _median_relative_error(orig, pairwise_distances(rp.apply(data.X)))
            rows.append([d, k, "rp", err_rp])
            summary["d%d_k%d" % (d, k)] = "pca=%.4f,rp=%.4f" % (err_pca, err_rp)
    return ExperimentReport(
        experiment="projection_error",
        params={"d_list": d_list, "k_list": k_list, "n": n,
                "spike_count": spike_count, "spike_sd": spike_sd, "seed": seed},
        tables={"errors": (["d", "k", "method", "median_relative_error"], rows)},
        summary=summary,
        wall_clock=time.perf_counter() - t0,
    )


def variance_experiment(seed=0, n=60, d=800, reps=500, support_size=4, noise_sd=1.0):
    """Noise-variance estimates on a null model (all coefficients zero).

    Per replicate: the plug-in estimate after greedy selection of the
    support_size columns most correlated with the response (data dredging),
    the same plug-in on an a-priori fixed support (the first support_size
    columns), and the refitted cross-validation estimate driven by the same
    greedy selector. The truth is noise_sd**2; the first estimate collapses
    toward zero while the other two stay centered.
    """
    t0 = time.perf_counter()
    if reps < 1:
        raise ConfigurationError("reps must be >= 1")
    if not 1 <= support_size < n // 2:
        raise ConfigurationError("support_size must lie in [1, n/2)")
    spec = LinearModelSpec(n=n, d=d, beta={}, noise_sd=noise_sd)
    fixed = np.arange(support_size)
    rows = []
    for rep in range(reps):
        data = gen_linear(spec, [seed, rep])
        dredged = greedy_spurious_support(data, support_size)
        est_dredged = residual_variance(data, dredged).sigma2_hat
        est_fixed = residual_variance(data, fixed).sigma2_hat
        est_rcv = rcv_variance(
            data, lambda ds: greedy_spurious_support(ds, support_size), [seed, rep, 1]
        ).sigma2_hat
        rows.append([rep, est_dredged, est_fixed, est_rcv])
    arr = np.asarray([r[1:] for r in rows], dtype=np.float64)
    means = arr.mean(axis=0)
    truth = noise_sd ** 2
    summary = {
        "mean_dredged": float(means[0]),
        "mean_fixed": float(means[1]),
        "mean_rcv": float(means[2]),
        "truth": truth,
    }
    return ExperimentReport(
        experiment="variance",
        params={"seed": seed, "n": n, "d": d, "reps": reps,
                "support_size": support_size, "noise_sd": noise_sd},
        tables={"estimates": (["rep", "dredged_support", "fixed_support", "rcv"], rows)},
        summary=summary,
        wall_clock=time.perf_counter() - t0,
    )


def endogeneity_experiment(seed=0, n=200, d=200, support_size=3, support_strength=2.0,
                           coupled_count=30, coupling=0.8, mode="direct",
                           noise_sd=1.0, permutations=100, folds=5, grid_size=20):
    """Planted-endogeneity run next to an exogenous control.

    Each scenario draws a sparse linear model, fits the Lasso at a
    cross-validated lambda, and compares residual correlations against the
    row-permutation null. The planted scenario couples `coupled_count`
    off-support columns into the noise with the given strength and mode; the
    control uses the same layout with no coupling.
    """
    t0 = time.perf_counter()
    if not (np.isfinite(noise_sd) and noise_sd > 0):
        raise ValidationError("noise_sd must be > 0: with zero noise the residual "
                              "correlations are undefined")
    if support_size + coupled_count > d:
        raise ConfigurationError("support_size + coupled_count must fit in d")
    corr_rows = []
    summary_rows = []
    overid_rows = []
    summary = {}
    for idx, (scenario, w) in enumerate((("planted", coupling), ("exogenous", 0.0))):
        endo = {support_size + j: w for j in range(coupled_count)} if w else {}
        spec = LinearModelSpec(
            n=n, d=d, beta={j: support_strength for j in range(support_size)},
            noise_sd=noise_sd, endogenous_set=endo, endogenous_mode=mode,
        )
        data = standardize(gen_linear(spec, [seed, idx]))
        lam_max = float(np.max(np.abs(data.X.T @ data.y)) / data.n)
        grid = np.geomspace(lam_max, 0.01 * lam_max, grid_size)
        lam_star, _ = cross_validate(data, grid, folds, [seed, idx, 1])
        fit = coord_descent_l1(data, lam_star)
        diag = endogeneity_diagnostic(data, fit, permutations, [seed, idx, 2])
        thresh = diag.null_quantile(0.95)
        summary_rows.append([
            scenario, diag.tail_statistic, thresh, int(diag.flagged()),
            fit.active_set.size, lam_star,
        ])
        summary["%s_flagged" % scenario] = int(diag.flagged())
        for v in diag.raw_correlations:
            corr_rows.append([scenario, "raw", float(v)])
        for v in diag.permuted_correlations:
            corr_rows.append([scenario, "permuted", float(v)])
        if fit.active_set.size:
            refit = ols_refit(data, fit.active_set)
            over = overid_check(data, refit, fit.active_set)
            for j, cx, cx2 in zip(over.selected, over.corr_x, over.corr_x2):
                overid_rows.append([scenario, int(j), float(cx), float(cx2)])
    return ExperimentReport(
        experiment="endogeneity",
        params={"seed": seed, "n": n, "d": d, "support_size": support_size,
                "support_strength": support_strength, "coupled_count": coupled_count,
                "coupling": coupling, "mode": mode, "noise_sd": noise_sd,
                "permutations": permutations, "folds": folds, "grid_size": grid_size},
        tables={
            "summary": (["scenario", "tail_statistic", "null_q95", "flagged",
                         "support_size", "lambda_star"], summary_rows),
            "correlations": (["scenario", "kind", "value"], corr_rows),
            "overid": (["scenario", "column", "corr_x", "corr_x2"], overid_rows),
        },
        summary=summary,
        wall_clock=time.perf_counter() - t0,
    )
