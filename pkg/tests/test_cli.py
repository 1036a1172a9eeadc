import csv
import os
import shutil
import subprocess

import numpy as np
import pytest

from hdlab import (
    LinearModelSpec,
    best_subset_l0,
    coord_descent_l1,
    gen_linear,
    sis_select,
    standardize,
    write_csv,
)
from hdlab.cli import main, read_config


@pytest.fixture()
def csv_data(tmp_path):
    spec = LinearModelSpec(n=50, d=6, beta={0: 2.0, 2: -1.0}, noise_sd=0.5)
    data = standardize(gen_linear(spec, 7))
    path = tmp_path / "train.csv"
    write_csv(data, path)
    return str(path), data


def read_kv(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            key, value = line.rstrip("\n").split("=", 1)
            out[key] = value
    return out


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestParser:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit):
            main([])

    def test_unknown_solver_rejected_by_argparse(self, csv_data):
        path, _ = csv_data
        with pytest.raises(SystemExit):
            main(["fit", "--data", path, "--solver", "sgd"])


class TestFit:
    def test_lasso_fixed_lambda(self, tmp_path, csv_data, capsys):
        path, data = csv_data
        out = str(tmp_path / "out")
        code = main(["fit", "--data", path, "--lambda", "0.1", "--out", out])
        assert code == 0
        header, rows = read_table(os.path.join(out, "fit_coefficients.csv"))
        assert header == ["index", "name", "coefficient"]
        fit = coord_descent_l1(data, 0.1)
        got = np.array([float(r[2]) for r in rows])
        assert np.array_equal(got, fit.beta_hat)
        meta = read_kv(os.path.join(out, "fit_run.txt"))
        assert meta["solver"] == "cd"
        assert meta["n"] == "50" and meta["d"] == "6"
        assert meta["converged"] == "True"
        assert meta["kernel_backend"] in ("cython", "python")
        assert float(meta["kkt_violation"]) < 1e-8
        assert "wall_clock" in meta
        assert "fit:" in capsys.readouterr().out

    def test_cross_validated_lambda(self, tmp_path, csv_data):
        path, data = csv_data
        out = str(tmp_path / "out")
        code = main(["fit", "--data", path, "--lambda-grid", "0.5,0.1,0.02",
                     "--cv-folds", "5", "--seed", "3", "--out", out])
        assert code == 0
        header, rows = read_table(os.path.join(out, "fit_cv.csv"))
        assert header == ["lambda", "cv_mse"]
        assert [float(r[0]) for r in rows] == [0.5, 0.1, 0.02]
        meta = read_kv(os.path.join(out, "fit_run.txt"))
        assert float(meta["lambda_star"]) in (0.5, 0.1, 0.02)
        assert meta["lambda"] == meta["lambda_star"]

    def test_folded_penalty_via_reweighting(self, tmp_path, csv_data):
        path, _ = csv_data
        out = str(tmp_path / "out")
        code = main(["fit", "--data", path, "--solver", "lla", "--penalty",
                     "scad:3.7", "--lambda", "0.15", "--out", out])
        assert code == 0
        meta = read_kv(os.path.join(out, "fit_run.txt"))
        assert meta["penalty"] == "scad:3.7"

    def test_cd_rejects_nonconvex_penalty(self, tmp_path, csv_data, capsys):
        path, _ = csv_data
        code = main(["fit", "--data", path, "--penalty", "mcp:3",
                     "--lambda", "0.1", "--out", str(tmp_path / "o")])
        assert code == 2
        assert "lla" in capsys.readouterr().err

    def test_missing_lambda_is_an_error(self, tmp_path, csv_data, capsys):
        path, _ = csv_data
        code = main(["fit", "--data", path, "--out", str(tmp_path / "o")])
        assert code == 2
        assert "--lambda" in capsys.readouterr().err

    def test_ista_rejects_oversized_step(self, tmp_path, csv_data):
        path, _ = csv_data
        code = main(["fit", "--data", path, "--solver", "ista", "--lambda",
                     "0.1", "--step", "100.0", "--out", str(tmp_path / "o")])
        assert code == 2

    def test_exhaustive_solver(self, tmp_path, csv_data):
        path, data = csv_data
        out = str(tmp_path / "out")
        code = main(["fit", "--data", path, "--solver", "l0", "--lambda",
                     "0.05", "--out", out])
        assert code == 0
        _, rows = read_table(os.path.join(out, "fit_coefficients.csv"))
        got = np.array([float(r[2]) for r in rows])
        assert np.array_equal(got, best_subset_l0(data, 0.05).beta_hat)

    def test_constrained_solver_default_radius(self, tmp_path, csv_data):
        path, _ = csv_data
        out = str(tmp_path / "out")
        code = main(["fit", "--data", path, "--solver", "dantzig", "--out", out])
        assert code == 0
        meta = read_kv(os.path.join(out, "fit_run.txt"))
        assert float(meta["gamma_n"]) > 0.0

    def test_standardize_flag(self, tmp_path):
        spec = LinearModelSpec(n=40, d=4, beta={1: 1.0}, noise_sd=0.5)
        raw = gen_linear(spec, 11)
        path = tmp_path / "raw.csv"
        write_csv(raw, path)
        code = main(["fit", "--data", str(path), "--lambda", "0.1",
                     "--standardize", "--out", str(tmp_path / "o")])
        assert code == 0

    def test_unstandardized_input_fails_cleanly(self, tmp_path, capsys):
        spec = LinearModelSpec(n=40, d=4, beta={1: 1.0}, noise_sd=0.5)
        raw = gen_linear(spec, 11)
        path = tmp_path / "raw.csv"
        write_csv(raw, path)
        code = main(["fit", "--data", str(path), "--lambda", "0.1",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "standardize" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        code = main(["fit", "--data", str(tmp_path / "nope.csv"),
                     "--lambda", "0.1", "--out", str(tmp_path / "o")])
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestScreen:
    def test_ranking_table(self, tmp_path, csv_data, capsys):
        path, data = csv_data
        out = str(tmp_path / "out")
        code = main(["screen", "--data", path, "--top-k", "3", "--out", out])
        assert code == 0
        header, rows = read_table(os.path.join(out, "screen_ranking.csv"))
        assert header == ["rank", "index", "name", "marginal_beta", "selected"]
        assert [int(r[0]) for r in rows] == list(range(1, 7))
        selected = [int(r[1]) for r in rows if r[4] == "1"]
        want = sis_select(data, top_k=3).survivors
        assert sorted(selected) == want.tolist()
        mags = [abs(float(r[3])) for r in rows]
        assert mags == sorted(mags, reverse=True)
        assert "top_k=3" in capsys.readouterr().out

    def test_requires_response(self, tmp_path, capsys):
        data = standardize(gen_linear(
            LinearModelSpec(n=30, d=4, beta={}), 3))
        path = tmp_path / "x.csv"
        write_csv(data, path)
        code = main(["screen", "--data", str(path), "--y-col", "target",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "target" in capsys.readouterr().err


class TestDiagnose:
    def test_spurious(self, tmp_path):
        out = str(tmp_path / "out")
        code = main(["diagnose", "spurious", "--n", "12", "--d", "5,8",
                     "--reps", "3", "--subset-size", "2", "--seed", "1",
                     "--out", out])
        assert code == 0
        for name in ("spurious_values.csv", "spurious_quantiles.csv",
                     "spurious_params.txt", "spurious_r_hat.svg",
                     "spurious_R_hat.svg"):
            assert os.path.exists(os.path.join(out, name)), name

    def test_variance(self, tmp_path):
        out = str(tmp_path / "out")
        code = main(["diagnose", "variance", "--n", "30", "--d-single", "40",
                     "--reps", "3", "--support-size", "2", "--out", out])
        assert code == 0
        assert os.path.exists(os.path.join(out, "variance_estimates.csv"))
        assert os.path.exists(os.path.join(out, "variance_estimates.svg"))

    def test_endogeneity(self, tmp_path):
        out = str(tmp_path / "out")
        code = main(["diagnose", "endogeneity", "--n", "60", "--d-single", "30",
                     "--coupled-count", "8", "--permutations", "10",
                     "--out", out])
        assert code == 0
        for name in ("endogeneity_summary.csv", "endogeneity_correlations.csv",
                     "endogeneity_planted.svg", "endogeneity_exogenous.svg"):
            assert os.path.exists(os.path.join(out, name)), name

    def test_overid_forces_quadratic_mode(self, tmp_path):
        out = str(tmp_path / "out")
        code = main(["diagnose", "overid", "--n", "60", "--d-single", "30",
                     "--coupled-count", "8", "--permutations", "10",
                     "--out", out])
        assert code == 0
        kv = read_kv(os.path.join(out, "endogeneity_params.txt"))
        assert kv["mode"] == "quadratic"
        assert os.path.exists(os.path.join(out, "overid_moments.svg"))

    def test_bad_config(self, tmp_path):
        code = main(["diagnose", "spurious", "--n", "2", "--out",
                     str(tmp_path / "o")])
        assert code == 2


class TestReduce:
    def test_pca(self, tmp_path, csv_data):
        path, data = csv_data
        out = str(tmp_path / "out")
        code = main(["reduce", "--data", path, "--method", "pca", "--k", "2",
                     "--out", out])
        assert code == 0
        header, rows = read_table(os.path.join(out, "reduced.csv"))
        assert header == ["z1", "z2", "y"]
        assert len(rows) == data.n
        got_y = np.array([float(r[2]) for r in rows])
        assert np.array_equal(got_y, data.y)
        dheader, drows = read_table(os.path.join(out, "distortion.csv"))
        assert dheader == ["method", "k", "median_relative_error"]
        assert drows[0][0] == "pca" and drows[0][1] == "2"

    def test_random_projection(self, tmp_path, csv_data):
        path, _ = csv_data
        out = str(tmp_path / "out")
        code = main(["reduce", "--data", path, "--method", "rp", "--k", "3",
                     "--seed", "4", "--orthonormalize", "--out", out])
        assert code == 0
        _, drows = read_table(os.path.join(out, "distortion.csv"))
        assert drows[0][0] == "rp"

    def test_k_out_of_range(self, tmp_path, csv_data):
        path, _ = csv_data
        code = main(["reduce", "--data", path, "--method", "pca", "--k", "9",
                     "--out", str(tmp_path / "o")])
        assert code == 2


class TestReproduce:
    def test_penalty_figure(self, tmp_path, capsys):
        out = str(tmp_path / "out")
        code = main(["reproduce", "--figure", "4", "--out", out])
        assert code == 0
        for name in ("penalty_curves_curves.csv", "penalty_curves_params.txt",
                     "penalty_curves.svg"):
            assert os.path.exists(os.path.join(out, name)), name
        assert "n_penalties=8" in capsys.readouterr().out

    def test_unknown_figure(self, tmp_path, capsys):
        code = main(["reproduce", "--figure", "3", "--out", str(tmp_path / "o")])
        assert code == 2
        assert "unknown figure" in capsys.readouterr().err

    def test_figure_required(self, tmp_path):
        assert main(["reproduce", "--out", str(tmp_path / "o")]) == 2

    def test_config_file_drives_the_run(self, tmp_path):
        out = tmp_path / "cfg_out"
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# tiny null-data run\n"
            "figure=2\n"
            "n=10\n"
            "d_list=4,6\n"
            "reps=2\n"
            "subset-size=1\n"
            "seed=5\n"
            "out=%s\n" % out
        )
        code = main(["reproduce", "--config", str(cfg)])
        assert code == 0
        _, rows = read_table(os.path.join(str(out), "spurious_values.csv"))
        assert len(rows) == 4
        kv = read_kv(os.path.join(str(out), "spurious_params.txt"))
        assert kv["seed"] == "5" and kv["subset_size"] == "1"

    def test_flag_overrides_config_seed(self, tmp_path):
        base = "figure=2\nn=10\nd_list=4\nreps=2\nsubset-size=1\n"
        cfg5 = tmp_path / "seed5.cfg"
        cfg5.write_text(base + "seed=5\n")
        cfg7 = tmp_path / "seed7.cfg"
        cfg7.write_text(base + "seed=7\n")
        a, b, c = (str(tmp_path / name) for name in "abc")
        assert main(["reproduce", "--config", str(cfg5), "--seed", "7",
                     "--out", a]) == 0
        assert main(["reproduce", "--config", str(cfg5), "--out", b]) == 0
        assert main(["reproduce", "--config", str(cfg7), "--out", c]) == 0

        def values(path):
            with open(os.path.join(path, "spurious_values.csv"), "rb") as fh:
                return fh.read()

        assert values(a) == values(c)  # the flag won
        assert values(a) != values(b)  # and it actually changed the draw

    def test_reruns_are_byte_identical(self, tmp_path):
        args = ["reproduce", "--figure", "1", "--seed", "3"]
        cfg = tmp_path / "small.cfg"
        cfg.write_text("m_list=2,6\nn_per_class=15\nd=8\nsignal_count=2\n")
        a = str(tmp_path / "a")
        b = str(tmp_path / "b")
        assert main(args + ["--config", str(cfg), "--out", a]) == 0
        assert main(args + ["--config", str(cfg), "--out", b]) == 0
        for name in ("noise_accumulation_separation.csv",
                     "noise_accumulation_projections.csv"):
            with open(os.path.join(a, name), "rb") as fa, \
                    open(os.path.join(b, name), "rb") as fb:
                assert fa.read() == fb.read()


class TestConfigParsing:
    def test_read_config(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# comment\nalpha=1\nbeta=2.5\nflag=true\n"
                       "name=endo\npair=3,4\nwith-dash=7\n")
        out = read_config(str(cfg))
        assert out == {"alpha": 1, "beta": 2.5, "flag": True, "name": "endo",
                       "pair": (3, 4), "with_dash": 7}

    def test_bad_line(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("just a line\n")
        from hdlab import ConfigurationError
        with pytest.raises(ConfigurationError):
            read_config(str(cfg))


@pytest.mark.skipif(shutil.which("hdlab") is None,
                    reason="console script not on PATH")
def test_console_entry_point(tmp_path):
    out = str(tmp_path / "out")
    proc = subprocess.run(["hdlab", "reproduce", "--figure", "4", "--out", out],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert os.path.exists(os.path.join(out, "penalty_curves.svg"))
