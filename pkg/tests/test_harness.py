"""Config validation, report emission, determinism, and the CLI contract."""

import json

import pytest

from robinlab import cli, harness


def _minimal_config(**over):
    d = {
        "name": "mini",
        "spec": {"domain": {"type": "disk", "radius": 1.0},
                 "hole": {"type": "disk", "r1": 0.5},
                 "hole_center": [0.0, 0.0], "alpha": 1.0},
        "route": "oracle",
        "mode": {"family": "disk", "m": 0, "jrad": 1, "parity": "cos"},
        "eps_list": [0.1, 0.05, 0.025],
        "checks": [{"id": "T2.2-coefficient", "tol": 0.05}],
    }
    d.update(over)
    return d


class TestConfigValidation:
    def test_empty_eps_list(self):
        with pytest.raises(harness.ConfigError):
            harness.config_from_dict(_minimal_config(eps_list=[])).validate()

    def test_unsorted_eps_list(self):
        cfg = harness.config_from_dict(_minimal_config(eps_list=[0.05, 0.1]))
        with pytest.raises(harness.ConfigError):
            cfg.validate()

    def test_bad_route(self):
        cfg = harness.config_from_dict(_minimal_config(route="magic"))
        with pytest.raises(harness.ConfigError):
            cfg.validate()

    def test_nonpositive_tolerance(self):
        cfg = harness.config_from_dict(_minimal_config(
            checks=[{"id": "T2.2-coefficient", "tol": 0.0}]))
        with pytest.raises(harness.ConfigError):
            cfg.validate()

    def test_offcenter_disk_oracle_rejected(self):
        d = _minimal_config()
        d["spec"]["hole_center"] = [0.2, 0.0]
        with pytest.raises(harness.ConfigError):
            harness.config_from_dict(d).validate()

    def test_unknown_check(self):
        cfg = harness.config_from_dict(_minimal_config(
            checks=[{"id": "T99-coefficient", "tol": 0.1}]))
        with pytest.raises(harness.ConfigError):
            harness.run(cfg)

    def test_oversized_hole_is_config_error(self):
        d = _minimal_config(eps_list=[0.9])
        d["spec"]["hole"] = {"type": "disk", "r1": 0.6}
        with pytest.raises(harness.ConfigError):
            harness.config_from_dict(d).validate()

    def test_spec_eps_pinned_to_largest(self):
        cfg = harness.config_from_dict(_minimal_config())
        assert cfg.spec.eps == 0.1

    def test_bundled_configs_all_valid(self):
        for name in harness.bundled_config_names():
            harness.load_bundled_config(name).validate()


class TestRunAndEmit:
    def test_csv_columns_and_determinism(self, tmp_path):
        config = harness.load_bundled_config("disk_m0_expansion")
        r1 = harness.run(config)
        r2 = harness.run(config)
        p1 = harness.emit(r1, tmp_path / "a")
        p2 = harness.emit(r2, tmp_path / "b")
        csv1 = (tmp_path / "a" / "disk_m0_expansion.csv").read_bytes()
        csv2 = (tmp_path / "b" / "disk_m0_expansion.csv").read_bytes()
        assert csv1 == csv2
        header = csv1.decode().splitlines()[0]
        assert header == "name,eps,h,lambda0,lambdaEps,delta,Teps,prediction,residualRatio"
        assert len(csv1.decode().splitlines()) == 1 + len(config.eps_list)

    def test_threads_agree_with_serial(self):
        config = harness.load_bundled_config("disk_m0_expansion")
        serial = harness.run(config, threads=1)
        threaded = harness.run(config, threads=2)
        for a, b in zip(serial.rows, threaded.rows):
            assert a.lambda_eps == pytest.approx(b.lambda_eps, abs=1e-12)
            assert a.residual_ratio == pytest.approx(b.residual_ratio, rel=1e-9)

    def test_zero_row_report(self, tmp_path):
        report = harness.Report(name="empty", rows=[], checks=[], plots={})
        harness.emit(report, tmp_path)
        lines = (tmp_path / "empty.csv").read_text().splitlines()
        assert len(lines) == 1 and lines[0].startswith("name,")

    def test_plot_ratio_approaches_one(self, tmp_path, bundled_report):
        report = bundled_report("disk_m0_alpha1")
        plot = report.plots["T2.2-coefficient"]
        ys = [y for _, y in plot]
        assert abs(ys[-1] - 1.0) < abs(ys[0] - 1.0)
        assert ys[-1] == pytest.approx(1.0, abs=0.05)

    def test_route_mismatch_is_numerical_error(self):
        config = harness.load_bundled_config("disk_m1_route_xval")
        config.route_tol = 1e-12
        config.eps_list = (0.1,)
        with pytest.raises(harness.NumericalError):
            harness.run(config)

    def test_fem_only_disk_differs_fem_spectra(self):
        # on the fem route both spectra come from finite elements, so the
        # discretization error cancels in delta
        d = _minimal_config(route="fem",
                            mode={"family": "disk", "m": 1, "jrad": 1,
                                  "parity": "cos"},
                            eps_list=[0.1, 0.05, 0.025],
                            checks=[{"id": "T2.9-coefficient", "tol": 0.05,
                                     "exp_tol": 0.15}])
        d["mesh"] = {"n_theta": 64, "levels": 2}
        report = harness.run(harness.config_from_dict(d))
        assert report.checks[0].passed

    def test_rect_both_cross_validates_lambda0(self):
        d = {
            "name": "rb",
            "spec": {"domain": {"type": "rect", "ax": 1.0, "ay": 1.0},
                     "hole": {"type": "rect", "half_width": 0.5},
                     "hole_center": [0.0, 0.0], "alpha": 1.0},
            "route": "both",
            "mode": {"family": "rect", "p": 1, "q": 1},
            "eigen_index": 1,
            "eps_list": [0.2, 0.1, 0.05],
            "mesh": {"n_cell": 16, "levels": 2},
            "checks": [{"id": "T2.2-coefficient", "tol": 0.1, "exp_tol": 0.15}],
            "route_tol": 1e-13,
        }
        with pytest.raises(harness.NumericalError):
            harness.run(harness.config_from_dict(d))

    def test_summary_mentions_every_check(self, tmp_path, bundled_report):
        report = bundled_report("disk_m0_alpha1")
        harness.emit(report, tmp_path)
        text = (tmp_path / "disk_m0_alpha1__summary.txt").read_text()
        for c in report.checks:
            assert c.check_id in text
        assert "verdict" in text


class TestCli:
    def _write(self, tmp_path, d):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(d))
        return str(path)

    def test_sweep_pass_exit_zero(self, tmp_path):
        path = self._write(tmp_path, _minimal_config())
        rc = cli.main(["sweep", "--config", path, "--out", str(tmp_path / "o")])
        assert rc == 0

    def test_config_error_exit_two(self, tmp_path):
        path = self._write(tmp_path, _minimal_config(eps_list=[]))
        rc = cli.main(["sweep", "--config", path, "--out", str(tmp_path / "o")])
        assert rc == 2

    def test_route_mismatch_exit_three(self, tmp_path):
        d = _minimal_config(route="both", route_tol=1e-13,
                            mode={"family": "disk", "m": 1, "jrad": 1,
                                  "parity": "cos"},
                            eps_list=[0.1],
                            checks=[{"id": "T2.9-coefficient", "tol": 0.03}])
        path = self._write(tmp_path, d)
        rc = cli.main(["sweep", "--config", path, "--out", str(tmp_path / "o")])
        assert rc == 3

    def test_mesh_eig_torsion_predict(self, tmp_path):
        path = self._write(tmp_path, _minimal_config())
        out = str(tmp_path / "o")
        assert cli.main(["mesh", "--config", path, "--out", out]) == 0
        assert (tmp_path / "o" / "mini_mesh.txt").exists()
        assert cli.main(["eig", "--config", path, "--out", out]) == 0
        assert cli.main(["torsion", "--config", path, "--out", out]) == 0
        assert cli.main(["predict", "--config", path, "--out", out]) == 0
