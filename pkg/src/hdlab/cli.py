"""Command-line interface.

Subcommands:
  fit        penalized / constrained sparse regression on a CSV dataset
  screen     marginal screening of a CSV dataset
  diagnose   spurious | variance | endogeneity | overid experiments
  reduce     pca / random-projection dimension reduction of a CSV dataset
  reproduce  canned experiments by id (1, 2, 4, 11, endo)

Every command writes CSV artifacts (plus SVG companions where a picture
helps) into --out. Exit status: 0 on success, 2 on invalid input or solver
failure, 3 when a reproduce run fails one of its built-in sanity checks.
"""

import argparse
import csv
import os
import sys
import time

import numpy as np

from . import kernels
from .data import read_csv, standardize
from .diagnostics import ks_distance  # noqa: F401  (re-exported convenience)
from .errors import ConfigurationError, ValidationError
from .experiments import (
    endogeneity_experiment,
    noise_accumulation_experiment,
    penalty_curves,
    projection_error_experiment,
    spurious_correlation_experiment,
    variance_experiment,
)
from .penalties import parse_penalty
from .screening import sis_select
from .solvers import (
    HighConfidenceSetSpec,
    best_subset_l0,
    coord_descent_l1,
    cross_validate,
    dantzig_selector,
    default_gamma_n,
    ista,
    kkt_violation,
    lla,
)
from .svgplot import histogram_svg, line_chart_svg, scatter_svg


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)
                        for v in row])


def _write_kv(path, pairs):
    with open(path, "w") as fh:
        for k, v in pairs:
            fh.write("%s=%s\n" % (k, v))


def _load_data(args, need_y):
    data = read_csv(args.data, y_col=args.y_col)
    if need_y and data.y is None:
        raise ValidationError(
            "no response column %r in %s; use --y-col" % (args.y_col, args.data)
        )
    if getattr(args, "standardize", False):
        data = standardize(data)
    return data


def _parse_grid(text):
    try:
        grid = [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigurationError("bad --lambda-grid %r" % text)
    if not grid:
        raise ConfigurationError("empty --lambda-grid")
    return np.asarray(grid)


def _fit_once(data, args, lam):
    """Run the selected solver at one tuning value; returns (fit, extras)."""
    extras = {}
    tol = args.tol
    if args.solver == "cd":
        pen = parse_penalty(args.penalty, max(lam, np.finfo(float).tiny), args.gamma)
        if pen.family != "soft":
            raise ConfigurationError(
                "cd minimizes the soft (L1) penalty; use --solver lla for %s" % pen.family
            )
        fit = coord_descent_l1(data, lam, **({"tol": tol} if tol else {}))
        extras["kkt_violation"] = kkt_violation(data, fit.beta_hat, lam)
    elif args.solver == "ista":
        pen = parse_penalty(args.penalty, lam, args.gamma)
        kw = {"tol": tol} if tol else {}
        if args.step:
            kw["step"] = args.step
        fit = ista(data, pen, **kw)
    elif args.solver == "lla":
        pen = parse_penalty(args.penalty, lam, args.gamma)
        fit = lla(data, pen, **({"tol": tol} if tol else {}))
    elif args.solver == "l0":
        fit = best_subset_l0(data, lam)
    elif args.solver == "dantzig":
        gamma_n = args.gamma_n
        if gamma_n is None:
            gamma_n = default_gamma_n(data, args.gamma_n_scale)
        extras["gamma_n"] = gamma_n
        fit = dantzig_selector(HighConfidenceSetSpec(data, gamma_n))
    else:
        raise ConfigurationError("unknown solver %r" % args.solver)
    return fit, extras


def _cv_solver(args):
    """Solver handle (train, lam, init) -> FitResult for cross_validate."""
    solver = args.solver
    tol = args.tol

    def handle(ds, lam, init):
        if solver == "cd":
            return coord_descent_l1(ds, lam, beta_init=init, **({"tol": tol} if tol else {}))
        if solver == "ista":
            return ista(ds, parse_penalty(args.penalty, lam, args.gamma),
                        **({"tol": tol} if tol else {}))
        if solver == "lla":
            return lla(ds, parse_penalty(args.penalty, lam, args.gamma),
                       **({"tol": tol} if tol else {}))
        if solver == "l0":
            return best_subset_l0(ds, lam)
        if solver == "dantzig":
            # The grid doubles as the constraint radius gamma_n.
            return dantzig_selector(HighConfidenceSetSpec(ds, lam))
        raise ConfigurationError("unknown solver %r" % solver)

    return handle


def cmd_fit(args):
    t0 = time.perf_counter()
    data = _load_data(args, need_y=True)
    os.makedirs(args.out, exist_ok=True)
    extras = {}
    if args.lambda_grid is not None:
        grid = _parse_grid(args.lambda_grid)
        lam_star, curve = cross_validate(data, grid, args.cv_folds, args.seed,
                                         solver=_cv_solver(args))
        _write_rows(os.path.join(args.out, "fit_cv.csv"),
                    ["lambda", "cv_mse"], list(zip(grid.tolist(), curve.tolist())))
        extras["lambda_star"] = lam_star
        lam = lam_star
        if args.solver == "dantzig" and args.gamma_n is None:
            args.gamma_n = lam_star
    elif args.lam is not None:
        lam = args.lam
    elif args.solver == "dantzig":
        lam = 0.0  # unused; gamma_n drives the fit
    else:
        raise ConfigurationError("pass --lambda or --lambda-grid")
    fit, fit_extras = _fit_once(data, args, lam)
    extras.update(fit_extras)

    coef_path = os.path.join(args.out, "fit_coefficients.csv")
    rows = [[j, data.name_of(j), fit.beta_hat[j]] for j in range(data.d)]
    _write_rows(coef_path, ["index", "name", "coefficient"], rows)
    meta = [
        ("solver", args.solver),
        ("penalty", args.penalty),
        ("lambda", repr(float(lam))),
        ("n", data.n),
        ("d", data.d),
        ("seed", args.seed),
        ("objective", repr(fit.objective)),
        ("iterations", fit.iterations),
        ("converged", fit.converged),
        ("active_set_size", fit.active_set.size),
        ("kernel_backend", kernels.BACKEND),
    ]
    meta.extend(sorted((k, repr(float(v))) for k, v in extras.items()))
    meta.append(("wall_clock", "%.3f" % (time.perf_counter() - t0)))
    _write_kv(os.path.join(args.out, "fit_run.txt"), meta)
    print("fit: solver=%s active=%d/%d objective=%.6g -> %s"
          % (args.solver, fit.active_set.size, data.d, fit.objective, coef_path))
    return 0


def cmd_screen(args):
    data = _load_data(args, need_y=True)
    os.makedirs(args.out, exist_ok=True)
    res = sis_select(data, delta=args.delta, top_k=args.top_k)
    mag = np.abs(res.marginal_beta)
    order = np.lexsort((np.arange(data.d), -mag))
    kept = set(res.survivors.tolist())
    rows = []
    for rank, j in enumerate(order, start=1):
        rows.append([rank, int(j), data.name_of(j), res.marginal_beta[j],
                     int(j in kept)])
    path = os.path.join(args.out, "screen_ranking.csv")
    _write_rows(path, ["rank", "index", "name", "marginal_beta", "selected"], rows)
    print("screen: kept %d of %d (%s) -> %s" % (len(kept), data.d, res.rule, path))
    return 0


def _report_to_disk(rep, outdir):
    paths = rep.write(outdir)
    for p in paths:
        print("wrote %s" % p)
    return paths


def _hist_by_group(rows, key_idx, val_idx, prefix=""):
    groups = {}
    for row in rows:
        groups.setdefault("%s%s" % (prefix, row[key_idx]), []).append(float(row[val_idx]))
    return groups


def cmd_diagnose(args):
    os.makedirs(args.out, exist_ok=True)
    if args.kind == "spurious":
        rep = spurious_correlation_experiment(
            seed=args.seed, n=args.n, d_list=args.d, reps=args.reps,
            subset_size=args.subset_size, method=args.method)
        _report_to_disk(rep, args.out)
        _, rows = rep.tables["values"]
        histogram_svg(_hist_by_group(rows, 0, 2, "d="),
                      os.path.join(args.out, "spurious_r_hat.svg"),
                      title="max single-column correlation (null data)",
                      xlabel="r_hat")
        histogram_svg(_hist_by_group(rows, 0, 3, "d="),
                      os.path.join(args.out, "spurious_R_hat.svg"),
                      title="max multiple correlation, subsets of %d" % args.subset_size,
                      xlabel="R_hat")
    elif args.kind == "variance":
        rep = variance_experiment(seed=args.seed, n=args.n, d=args.d_single,
                                  reps=args.reps, support_size=args.support_size,
                                  noise_sd=args.noise_sd)
        _report_to_disk(rep, args.out)
        _, rows = rep.tables["estimates"]
        arr = np.asarray([r[1:] for r in rows], dtype=np.float64)
        histogram_svg({"dredged support": arr[:, 0], "fixed support": arr[:, 1],
                       "refitted cv": arr[:, 2]},
                      os.path.join(args.out, "variance_estimates.svg"),
                      title="noise variance estimates (truth %.3g)" % (args.noise_sd ** 2),
                      xlabel="sigma^2 estimate")
    elif args.kind in ("endogeneity", "overid"):
        mode = "quadratic" if args.kind == "overid" else args.mode
        rep = endogeneity_experiment(
            seed=args.seed, n=args.n, d=args.d_single, coupled_count=args.coupled_count,
            coupling=args.coupling, mode=mode, noise_sd=args.noise_sd,
            permutations=args.permutations)
        _report_to_disk(rep, args.out)
        _, rows = rep.tables["correlations"]
        for scenario in ("planted", "exogenous"):
            groups = {}
            for row in rows:
                if row[0] == scenario:
                    groups.setdefault(row[1], []).append(float(row[2]))
            if groups:
                histogram_svg(groups,
                              os.path.join(args.out, "endogeneity_%s.svg" % scenario),
                              title="residual correlations, %s scenario" % scenario,
                              xlabel="correlation")
        _, orows = rep.tables["overid"]
        if orows:
            groups = {}
            for row in orows:
                groups.setdefault(row[0], ([], []))
                groups[row[0]][0].append(float(row[2]))
                groups[row[0]][1].append(float(row[3]))
            scatter_svg(groups, os.path.join(args.out, "overid_moments.svg"),
                        title="selected columns: residual moment correlations",
                        xlabel="corr(X_j, resid)", ylabel="corr(X_j^2, resid)")
    else:
        raise ConfigurationError("unknown diagnose kind %r" % args.kind)
    return 0


def cmd_reduce(args):
    from .dimred import distortion, pca, random_projection

    data = _load_data(args, need_y=False)
    os.makedirs(args.out, exist_ok=True)
    if args.method == "pca":
        proj = pca(data, args.k)
    else:
        proj = random_projection(data, args.k, args.seed,
                                 orthonormalize=args.orthonormalize)
    Z = proj.apply(data.X)
    header = ["z%d" % (j + 1) for j in range(args.k)]
    rows = [list(Z[i]) for i in range(Z.shape[0])]
    if data.y is not None:
        header.append("y")
        for i, row in enumerate(rows):
            row.append(data.y[i])
    _write_rows(os.path.join(args.out, "reduced.csv"), header, rows)
    rep = distortion(data, proj)
    _write_rows(os.path.join(args.out, "distortion.csv"),
                ["method", "k", "median_relative_error"],
                [[rep.method, rep.k, rep.median_relative_error]])
    print("reduce: %s k=%d median distortion %.4f -> %s"
          % (args.method, args.k, rep.median_relative_error,
             os.path.join(args.out, "reduced.csv")))
    return 0


def _coerce(text):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if "," in text:
        return tuple(_coerce(part) for part in text.split(","))
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def read_config(path):
    """Parse a plain key=value file; '#' starts a comment line."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError("%s:%d: expected key=value" % (path, lineno))
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = _coerce(value)
    return out


def _first(*vals):
    for v in vals:
        if v is not None:
            return v
    return None


_FIGURES = {
    "1": noise_accumulation_experiment,
    "2": spurious_correlation_experiment,
    "4": penalty_curves,
    "11": projection_error_experiment,
    "endo": endogeneity_experiment,
}


def _reproduce_sanity(figure, rep):
    problems = []
    if figure == "1":
        for m, sep, sep2 in rep.tables["separation"][1]:
            if not (np.isfinite(sep) and sep > 0 and np.isfinite(sep2) and sep2 > 0):
                problems.append("non-positive separation at m=%s" % m)
    elif figure == "2":
        for d, r, r_hat, R_hat in rep.tables["values"][1]:
            if R_hat < r_hat - 1e-9 or not 0.0 <= r_hat <= 1.0 + 1e-12:
                problems.append("replicate %s/%s: R_hat %.12g < r_hat %.12g"
                                % (d, r, R_hat, r_hat))
    elif figure == "4":
        vals = {}
        for label, t, v in rep.tables["curves"][1]:
            if not np.isfinite(v) or v < -1e-15:
                problems.append("bad value %r at %s t=%s" % (v, label, t))
            vals.setdefault(label, []).append((t, v))
        for label, pairs in vals.items():
            lookup = dict(pairs)
            for t, v in pairs:
                if -t in lookup and abs(lookup[-t] - v) > 1e-9:
                    problems.append("%s asymmetric at t=%s" % (label, t))
                    break
    elif figure == "11":
        for d, k, method, err in rep.tables["errors"][1]:
            if not (np.isfinite(err) and err >= 0):
                problems.append("bad error %r at d=%s k=%s %s" % (err, d, k, method))
    elif figure == "endo":
        for row in rep.tables["summary"][1]:
            if not 0.0 <= row[1] <= 1.0:
                problems.append("tail statistic %r outside [0, 1]" % row[1])
    return problems


def _reproduce_svgs(figure, rep, outdir):
    if figure == "1":
        _, sep_rows = rep.tables["separation"]
        ms = [r[0] for r in sep_rows]
        line_chart_svg(
            {"selected space": (ms, [r[1] for r in sep_rows]),
             "2-d projection": (ms, [r[2] for r in sep_rows])},
            os.path.join(outdir, "noise_accumulation_separation.svg"),
            title="class separation vs number of features", xlabel="m",
            ylabel="separation")
        _, proj_rows = rep.tables["projections"]
        for m in ms:
            groups = {"class 0": ([], []), "class 1": ([], [])}
            for row in proj_rows:
                if row[0] == m:
                    g = groups["class %d" % row[2]]
                    g[0].append(row[3])
                    g[1].append(row[4])
            scatter_svg(groups,
                        os.path.join(outdir, "noise_accumulation_m%d.svg" % m),
                        title="first two principal components, m=%d" % m,
                        xlabel="pc1", ylabel="pc2")
    elif figure == "2":
        _, rows = rep.tables["values"]
        histogram_svg(_hist_by_group(rows, 0, 2, "d="),
                      os.path.join(outdir, "spurious_r_hat.svg"),
                      title="max single-column correlation (null data)", xlabel="r_hat")
        histogram_svg(_hist_by_group(rows, 0, 3, "d="),
                      os.path.join(outdir, "spurious_R_hat.svg"),
                      title="max multiple correlation", xlabel="R_hat")
    elif figure == "4":
        _, rows = rep.tables["curves"]
        series = {}
        for label, t, v in rows:
            series.setdefault(label, ([], []))
            series[label][0].append(t)
            series[label][1].append(v)
        line_chart_svg(series, os.path.join(outdir, "penalty_curves.svg"),
                       title="penalty functions", xlabel="t", ylabel="P(t)")
    elif figure == "11":
        _, rows = rep.tables["errors"]
        for d in sorted({r[0] for r in rows}):
            series = {}
            for dd, k, method, err in rows:
                if dd == d:
                    series.setdefault(method, ([], []))
                    series[method][0].append(k)
                    series[method][1].append(err)
            line_chart_svg(series,
                           os.path.join(outdir, "projection_error_d%d.svg" % d),
                           title="median distance distortion, d=%d" % d,
                           xlabel="k", ylabel="median relative error")
    elif figure == "endo":
        _, rows = rep.tables["correlations"]
        for scenario in ("planted", "exogenous"):
            groups = {}
            for row in rows:
                if row[0] == scenario:
                    groups.setdefault(row[1], []).append(float(row[2]))
            if groups:
                histogram_svg(groups,
                              os.path.join(outdir, "endogeneity_%s.svg" % scenario),
                              title="residual correlations, %s scenario" % scenario,
                              xlabel="correlation")


def cmd_reproduce(args):
    cfg = read_config(args.config) if args.config else {}
    figure = _first(args.figure, cfg.pop("figure", None))
    if figure is None:
        raise ConfigurationError("pass --figure or put figure=... in the config file")
    figure = str(figure)
    if figure not in _FIGURES:
        raise ConfigurationError("unknown figure %r (choose 1|2|4|11|endo)" % figure)
    seed = _first(args.seed, cfg.pop("seed", None), 0)
    out = _first(args.out, cfg.pop("out", None), "reports")
    paper_scale = bool(_first(args.paper_scale, cfg.pop("paper_scale", None), False))
    kwargs = dict(cfg)
    for key in ("m_list", "d_list", "k_list"):
        if key in kwargs and not isinstance(kwargs[key], tuple):
            kwargs[key] = (kwargs[key],)
    if figure != "4":
        kwargs["seed"] = seed
    if figure == "2":
        kwargs["paper_scale"] = paper_scale
    rep = _FIGURES[figure](**kwargs)
    os.makedirs(out, exist_ok=True)
    _report_to_disk(rep, out)
    _reproduce_svgs(figure, rep, out)
    problems = _reproduce_sanity(figure, rep)
    if problems:
        for p in problems:
            print("sanity check failed: %s" % p, file=sys.stderr)
        return 3
    for k, v in rep.summary.items():
        print("%s=%s" % (k, v))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hdlab",
        description="Sparse regression, screening, diagnostics and dimension "
                    "reduction for wide datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a sparse linear model to CSV data")
    p_fit.add_argument("--data", required=True, help="input CSV path")
    p_fit.add_argument("--y-col", default="y", help="response column name")
    p_fit.add_argument("--penalty", default="soft",
                       help="soft | hard | scad:GAMMA | mcp:GAMMA")
    p_fit.add_argument("--gamma", type=float, default=None,
                       help="penalty gamma when not given inline")
    p_fit.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="penalty strength")
    p_fit.add_argument("--lambda-grid", default=None,
                       help="comma-separated grid for cross-validation")
    p_fit.add_argument("--cv-folds", type=int, default=5)
    p_fit.add_argument("--solver", default="cd",
                       choices=["cd", "ista", "lla", "dantzig", "l0"])
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--tol", type=float, default=None,
                       help="solver tolerance (solver default when omitted)")
    p_fit.add_argument("--step", type=float, default=None,
                       help="ista step size (1/L when omitted)")
    p_fit.add_argument("--gamma-n", type=float, default=None,
                       help="dantzig constraint radius")
    p_fit.add_argument("--gamma-n-scale", type=float, default=1.0,
                       help="scale on the default dantzig radius")
    p_fit.add_argument("--standardize", action="store_true",
                       help="standardize columns before fitting")
    p_fit.add_argument("--out", default="hdlab_out")
    p_fit.set_defaults(func=cmd_fit)

    p_scr = sub.add_parser("screen", help="rank features by marginal strength")
    p_scr.add_argument("--data", required=True)
    p_scr.add_argument("--y-col", default="y")
    p_scr.add_argument("--delta", type=float, default=None,
                       help="keep |marginal| >= delta")
    p_scr.add_argument("--top-k", type=int, default=None,
                       help="keep the k largest magnitudes")
    p_scr.add_argument("--standardize", action="store_true")
    p_scr.add_argument("--out", default="hdlab_out")
    p_scr.set_defaults(func=cmd_screen)

    p_dia = sub.add_parser("diagnose", help="run a diagnostic experiment")
    p_dia.add_argument("kind", choices=["spurious", "variance", "endogeneity", "overid"])
    p_dia.add_argument("--n", type=int, default=60)
    p_dia.add_argument("--d", type=lambda s: [int(v) for v in s.split(",")],
                       default=[800, 6400], help="comma-separated widths (spurious)")
    p_dia.add_argument("--d-single", type=int, default=800,
                       help="width for variance/endogeneity/overid")
    p_dia.add_argument("--reps", type=int, default=200)
    p_dia.add_argument("--subset-size", type=int, default=4)
    p_dia.add_argument("--support-size", type=int, default=4)
    p_dia.add_argument("--method", default="greedy", choices=["greedy", "exact"])
    p_dia.add_argument("--noise-sd", type=float, default=1.0)
    p_dia.add_argument("--coupled-count", type=int, default=30)
    p_dia.add_argument("--coupling", type=float, default=0.8)
    p_dia.add_argument("--mode", default="direct", choices=["direct", "quadratic"])
    p_dia.add_argument("--permutations", type=int, default=100)
    p_dia.add_argument("--seed", type=int, default=0)
    p_dia.add_argument("--out", default="hdlab_out")
    p_dia.set_defaults(func=cmd_diagnose)

    p_red = sub.add_parser("reduce", help="project CSV data to k dimensions")
    p_red.add_argument("--data", required=True)
    p_red.add_argument("--y-col", default="y")
    p_red.add_argument("--method", required=True, choices=["pca", "rp"])
    p_red.add_argument("--k", type=int, required=True)
    p_red.add_argument("--seed", type=int, default=0)
    p_red.add_argument("--orthonormalize", action="store_true",
                       help="orthonormalize the random basis")
    p_red.add_argument("--out", default="hdlab_out")
    p_red.set_defaults(func=cmd_reduce)

    p_rep = sub.add_parser("reproduce", help="run a canned experiment")
    p_rep.add_argument("--figure", default=None,
                       help="experiment id: 1 | 2 | 4 | 11 | endo")
    p_rep.add_argument("--seed", type=int, default=None)
    p_rep.add_argument("--paper-scale", action="store_true", default=None,
                       help="full-size replicate counts")
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--config", default=None,
                       help="key=value file; keys may replace flags and "
                            "experiment parameters")
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
