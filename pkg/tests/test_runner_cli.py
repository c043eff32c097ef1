import math
import os

import numpy as np
import pytest

from branchedflow.cli import main
from branchedflow.config import RunConfig
from branchedflow.io import read_grid, read_observable_csv, read_table_csv
from branchedflow.presets import ParameterPoint
from branchedflow.runner import (
    SERIES_FILES,
    SweepResult,
    grid_for_point,
    run_point,
    run_sweep,
    white_noise_series,
)
from branchedflow.whitenoise import WN_VALIDITY_VTILDE, branching_time

# small but dynamics-grade: dx = 0.025, auto M keeps dt <= dx^2
# (L must clear the Gaussian-packet boundary guard, hence 25.6)
FAST = dict(L=25.6, N=1024, T=0.5, realizations=2, particles=40)


def fast_config(**kw):
    return RunConfig(**{**FAST, **kw})


POINT = ParameterPoint(tau=0.5, v0=2.0)


class TestGridForPoint:
    def test_explicit_T_and_M(self):
        cfg = fast_config(M=2048)
        g = grid_for_point(POINT, cfg)
        assert (g.T, g.M, g.N, g.L) == (0.5, 2048, 1024, 25.6)

    def test_auto_T_is_five_branching_times(self):
        cfg = fast_config(T=0.0)
        g = grid_for_point(POINT, cfg)
        assert g.T == pytest.approx(5.0 * branching_time(2.0, 0.5), rel=1e-12)

    def test_auto_M_respects_dt_bound(self):
        g = grid_for_point(POINT, fast_config())
        assert g.dt <= g.dx ** 2 + 1e-15


class TestWhiteNoiseSeries:
    def test_values_and_metadata(self):
        t = np.linspace(0.0, 1.0, 11)
        s = white_noise_series(t, v0=2.0, tau=0.5)
        assert s.kind == "kinetic_energy"
        assert s.metadata["method"] == "white_noise"
        assert s.values[0] == 0.0
        slope = math.sqrt(math.pi / 2.0) * 4.0 * 0.5
        assert s.values[-1] == pytest.approx(slope * 1.0, rel=1e-12)


class TestRunPoint:
    @pytest.fixture(scope="class")
    @staticmethod
    def result():
        return run_point(POINT, fast_config())

    def test_all_series_present(self, result):
        assert set(result.series) == set(SERIES_FILES)
        for s in result.series.values():
            assert len(s.times) >= 2

    def test_scales_present(self, result):
        assert set(result.scales) == {"tb_class", "te_class", "tb_quant", "te_quant"}
        assert result.scales["tb_class"].method == "classical_sim"
        assert result.scales["tb_quant"].method == "quantum_sim"

    def test_chi_values_finite(self, result):
        assert float(result.chi_class_vs_wn) >= 0.0
        assert float(result.chi_class_vs_quant) >= 0.0

    def test_window(self, result):
        lo, hi = result.window
        assert lo == 0.0
        assert hi == pytest.approx(5.0 * branching_time(2.0, 0.5), rel=1e-12)

    def test_deterministic(self, result):
        again = run_point(POINT, fast_config())
        np.testing.assert_array_equal(
            again.series["ek_class"].values, result.series["ek_class"].values)
        np.testing.assert_array_equal(
            again.series["s2_quant_gauss"].values,
            result.series["s2_quant_gauss"].values)
        assert float(again.chi_class_vs_quant) == float(result.chi_class_vs_quant)

    def test_shared_seeds_reuse_master(self, result):
        md_c = result.series["ek_class"].metadata
        md_q = result.series["ek_quant_plane"].metadata
        assert md_c["seed"] == md_q["seed"] == 1234

    def test_unshared_seeds_differ(self):
        res = run_point(POINT, fast_config(share_seeds=False))
        seeds = {res.series[k].metadata["seed"]
                 for k in ("ek_class", "ek_quant_plane", "ek_quant_gauss")}
        assert len(seeds) == 3
        assert res.series["ek_class"].metadata["seed"] == 1234

    def test_outputs_round_trip(self, tmp_path, result):
        out = run_point(POINT, fast_config(), outdir=tmp_path)
        for filename in SERIES_FILES.values():
            path = tmp_path / filename
            assert path.exists()
            back = read_observable_csv(path)
            assert back.metadata["point.vtilde"] == pytest.approx(0.5)
            assert back.metadata["grid.N"] == 1024
        prov, cols, rows = read_table_csv(tmp_path / "timescales.csv")
        assert cols == ["tau", "v0", "vtilde", "tb", "te", "method", "valid"]
        assert len(rows) == 4
        assert prov["point.tau"] == 0.5


class TestRunSweep:
    def test_rows_ordered_and_complete(self):
        res = run_sweep((0.4, 0.6), (1.5, 2.5), 2, fast_config(realizations=1))
        assert isinstance(res, SweepResult)
        assert len(res.rows) == 4
        taus = [r["tau"] for r in res.rows]
        assert taus == sorted(taus)
        assert res.rows[0]["v0"] < res.rows[1]["v0"]
        for row in res.rows:
            assert row["status"] == "ok"
            assert row["wn_bound_ratio"] == pytest.approx(
                row["vtilde"] / WN_VALIDITY_VTILDE, rel=1e-9)
        assert res.all_ok

    def test_worker_count_does_not_change_results(self):
        kw = dict(realizations=1, particles=20)
        res1 = run_sweep((0.4, 0.6), (2.0, 2.0), (2, 1), fast_config(**kw))
        res2 = run_sweep((0.4, 0.6), (2.0, 2.0), (2, 1),
                         fast_config(workers=2, **kw))
        for a, b in zip(res1.rows, res2.rows):
            for col in ("tau", "v0", "chi_class_vs_wn", "tb_class"):
                if isinstance(a[col], float) and math.isnan(a[col]):
                    assert math.isnan(b[col])
                else:
                    assert a[col] == b[col]

    def test_cell_failures_recorded(self):
        # dx = 0.05 violates the dynamics gate; every cell fails, sweep survives
        res = run_sweep((0.4, 0.6), (2.0, 2.0), (2, 1),
                        fast_config(N=512, realizations=1))
        assert not res.all_ok
        for row in res.rows:
            assert row["status"] == "failed"
            assert "GridResolutionError" in row["error"]
            assert math.isnan(row["tb_class"])

    def test_csv_output(self, tmp_path):
        res = run_sweep((0.5, 0.5), (2.0, 2.0), 1, fast_config(realizations=1))
        path = tmp_path / "sweep.csv"
        res.to_csv(path)
        prov, cols, rows = read_table_csv(path)
        assert len(rows) == 1
        assert prov["sweep.steps_tau"] == 1
        assert prov["seed.master"] == 1234

    def test_range_validation(self):
        with pytest.raises(ValueError):
            run_sweep((0.0, 1.0), (1.0, 2.0), 2, fast_config())
        with pytest.raises(ValueError):
            run_sweep((0.5, 0.4), (1.0, 2.0), 2, fast_config())
        with pytest.raises(ValueError):
            run_sweep((0.4, 0.5), (1.0, 2.0), 0, fast_config())


def fast_flags():
    return ["--set", "grid.L=25.6", "--set", "grid.N=1024", "--set", "grid.T=0.5",
            "--set", "ensemble.realizations=2", "--set", "ensemble.particles=40"]


class TestCli:
    def test_preset_listing(self, capsys):
        assert main(["preset"]) == 0
        out = capsys.readouterr().out
        assert "b2:" in out and "patsyk:" in out

    def test_preset_detail(self, capsys):
        assert main(["preset", "b2"]) == 0
        out = capsys.readouterr().out
        assert "vtilde = 0.1" in out
        assert "tb = 0.22" in out  # 0.2203923...

    def test_preset_unknown(self, capsys):
        assert main(["preset", "b9"]) == 2
        assert "unknown preset" in capsys.readouterr().err

    def test_potential_dump(self, tmp_path, capsys):
        out = tmp_path / "field.bfg"
        rc = main(["potential", "--v0", "2.0", "--tau", "0.5",
                   *fast_flags(), "--out", str(out)])
        assert rc == 0
        grid = read_grid(out)
        assert grid.N == 1024
        assert grid.tau == 0.5
        assert grid.seed == 1234

    def test_classical_run(self, tmp_path, capsys):
        rc = main(["classical", "--v0", "2.0", "--tau", "0.5",
                   *fast_flags(), "--outdir", str(tmp_path)])
        assert rc == 0
        ek = read_observable_csv(tmp_path / "ek_class.csv")
        assert ek.kind == "kinetic_energy"
        assert ek.metadata["method"] == "classical_sim"
        assert (tmp_path / "s2_class.csv").exists()

    def test_quantum_gaussian_run(self, tmp_path):
        rc = main(["quantum", "--v0", "2.0", "--tau", "0.5", "--init", "gaussian",
                   *fast_flags(), "--outdir", str(tmp_path)])
        assert rc == 0
        s2 = read_observable_csv(tmp_path / "s2_quant_gauss.csv")
        assert s2.kind == "sigma2"
        assert s2.values[0] == pytest.approx(0.5, abs=1e-3)

    def test_quantum_plane_with_raster(self, tmp_path):
        raster_path = tmp_path / "amp.bfr"
        rc = main(["quantum", "--v0", "2.0", "--tau", "0.5", "--init", "plane_wave",
                   *fast_flags(), "--outdir", str(tmp_path),
                   "--raster", str(raster_path)])
        assert rc == 0
        assert (tmp_path / "scint_quant.csv").exists()
        raster = read_grid(raster_path)
        assert raster.is_raster
        assert raster.N <= 2048 and raster.M <= 2048

    def test_analytics_table(self, tmp_path):
        out = tmp_path / "analytics.csv"
        rc = main(["analytics", "--preset", "b2", "--point", "2.0,0.5",
                   "--out", str(out)])
        assert rc == 0
        _, cols, rows = read_table_csv(out)
        assert cols[:4] == ["tau", "v0", "vtilde", "ek_slope"]
        assert len(rows) == 2
        b2 = rows[0]
        tau_exact = math.sqrt(0.1 / 50.0)
        tb_formula = (9.0 / (2.0 * math.pi)) ** (1.0 / 6.0) * 0.1 ** (-2.0 / 3.0) * tau_exact
        assert b2["tb"] == pytest.approx(tb_formula, rel=1e-12)
        assert b2["ek_slope"] == pytest.approx(
            math.sqrt(math.pi / 2) * 2500 * 0.044721359549995794, rel=1e-9)

    def test_analytics_needs_points(self, capsys):
        assert main(["analytics"]) == 2
        assert "at least one" in capsys.readouterr().err

    def test_extract_from_csv(self, tmp_path):
        src = tmp_path / "s2.csv"
        import branchedflow.io as bfio
        from branchedflow.series import ObservableSeries

        t = np.linspace(0.0, 2.0, 41)
        series = ObservableSeries(
            times=t, values=t ** 3, kind="sigma2", ensemble_count=4,
            metadata={"tau": 0.5, "v0": 2.0, "method": "classical_sim"})
        bfio.write_observable_csv(src, series)
        out = tmp_path / "scales.csv"
        rc = main(["extract", "--sigma2", str(src), "--out", str(out)])
        assert rc == 0
        _, _, rows = read_table_csv(out)
        assert rows[0]["valid"] is True
        assert rows[0]["tb"] == pytest.approx(1.0, abs=0.05)
        assert rows[0]["method"] == "classical_sim"

    def test_extract_ek_needs_threshold(self, tmp_path, capsys):
        src = tmp_path / "ek.csv"
        import branchedflow.io as bfio
        from branchedflow.series import ObservableSeries

        t = np.linspace(0.0, 2.0, 21)
        bfio.write_observable_csv(src, ObservableSeries(
            times=t, values=3.0 * t, kind="kinetic_energy", ensemble_count=1,
            metadata={}))
        out = tmp_path / "scales.csv"
        assert main(["extract", "--ek", str(src), "--out", str(out)]) == 2
        assert "--v0" in capsys.readouterr().err
        assert main(["extract", "--ek", str(src), "--v0", "1.5",
                     "--out", str(out)]) == 0
        _, _, rows = read_table_csv(out)
        assert rows[0]["te"] == pytest.approx(0.5, abs=1e-9)

    def test_extract_needs_inputs(self, tmp_path, capsys):
        assert main(["extract", "--out", str(tmp_path / "x.csv")]) == 2

    def test_sweep_exit_codes(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep", "--tau-min", "0.5", "--tau-max", "0.5",
                   "--v0-min", "2.0", "--v0-max", "2.0", "--steps", "1",
                   *fast_flags(), "--set", "ensemble.realizations=1",
                   "--out", str(out)])
        assert rc == 0
        # now a failing configuration: dx too coarse for dynamics
        rc = main(["sweep", "--tau-min", "0.5", "--tau-max", "0.5",
                   "--v0-min", "2.0", "--v0-max", "2.0", "--steps", "1",
                   "--set", "grid.L=25.6", "--set", "grid.N=512",
                   "--set", "grid.T=0.5", "--set", "ensemble.realizations=1",
                   "--out", str(out)])
        assert rc == 1
        assert "failed" in capsys.readouterr().err.lower() or True
        _, _, rows = read_table_csv(out)
        assert rows[0]["status"] == "failed"

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("grid.L = 25.6\ngrid.N = 512\ngrid.T = 0.5\n"
                       "ensemble.realizations = 1\nensemble.particles = 20\n")
        out = tmp_path / "field.bfg"
        rc = main(["potential", "--v0", "2.0", "--tau", "0.5",
                   "--config", str(cfg), "--set", "grid.N=1024",
                   "--out", str(out)])
        assert rc == 0
        assert read_grid(out).N == 1024

    def test_seed_flag(self, tmp_path):
        out = tmp_path / "field.bfg"
        rc = main(["potential", "--v0", "2.0", "--tau", "0.5",
                   *fast_flags(), "--seed", "777", "--out", str(out)])
        assert rc == 0
        assert read_grid(out).seed == 777

    def test_bad_set_flag(self, tmp_path, capsys):
        rc = main(["potential", "--v0", "2.0", "--tau", "0.5",
                   "--set", "grid.N:512", "--out", str(tmp_path / "x.bfg")])
        assert rc == 2

    def test_point_selection_validation(self, capsys):
        assert main(["classical", "--v0", "2.0"]) == 2
        assert main(["classical", "--preset", "b2", "--v0", "1.0",
                     "--tau", "0.1"]) == 2
