"""Acceptance checks, one test per criterion.

Each test appends a single PASS/FAIL line to the session log (echoed in the
terminal summary) and then asserts.  Ensemble inputs come from the seeded
session fixtures in conftest.py, so every number here is reproducible
bit-for-bit.
"""

from __future__ import annotations

import math
import time

import numpy as np

from branchedflow.analysis import chi_indicator, extract_tb, extract_te, fit_power_law
from branchedflow.potential import (
    CorrelationSpec,
    SimulationGrid,
    empirical_correlation,
    make_grid,
    sample_realization,
)
from branchedflow.quantum import init_gaussian, kinetic_energy, displacement2, split_step
from branchedflow.series import ObservableSeries
from branchedflow.whitenoise import (
    SQRT_HALF_PI,
    WN_VALIDITY_VTILDE,
    branching_time,
    energy_time,
    rf_kinetic_energy,
    wn_kinetic_energy,
)

SEED = 1234


def check(log, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}: {name} ({detail})"
    log.append(line)
    print(line)
    assert ok, line


def test_correlation_recovery(acceptance_log):
    # 100 realizations of a 512 x 512 grid at tau = 1 must reproduce
    # exp(-x^2/2) exp(-t^2/2) to 0.05 (max abs deviation over lags up to 3),
    # in under a minute.
    t0 = time.perf_counter()
    spec = CorrelationSpec(v0=1.0, tau=1.0)
    grid = SimulationGrid(L=51.2, T=51.2, N=512, M=512)
    fields = [sample_realization(spec, grid, seed=SEED, index=i) for i in range(100)]
    emp = empirical_correlation(fields, max_lag_x=3.0, max_lag_t=3.0)
    model = (np.exp(-emp.lag_x[None, :] ** 2 / 2.0)
             * np.exp(-emp.lag_t[:, None] ** 2 / (2.0 * spec.tau ** 2)))
    dev = float(np.abs(emp.values - model).max())
    elapsed = time.perf_counter() - t0
    check(acceptance_log, "correlation recovery",
          dev < 0.05 and elapsed < 60.0,
          f"max dev {dev:.4f} < 0.05, {elapsed:.1f} s < 60 s")


def test_white_noise_slope(acceptance_log, run_vt_1e3, run_vt_1e2):
    # Ensemble kinetic energy in the weak-disorder regime must follow the
    # analytic slope sqrt(pi/2) v0^2 tau within 10% over t in (tau, 5 t_b).
    devs = []
    for spec, _, ek, _ in (run_vt_1e3, run_vt_1e2):
        window_end = 5.0 * branching_time(spec.v0, spec.tau)
        mask = (ek.times > spec.tau) & (ek.times <= window_end)
        slope = float(np.polyfit(ek.times[mask], ek.values[mask], 1)[0])
        theory = SQRT_HALF_PI * spec.v0 ** 2 * spec.tau
        devs.append(abs(slope / theory - 1.0))
    check(acceptance_log, "white-noise heating slope",
          all(d <= 0.10 for d in devs),
          "rel dev " + ", ".join(f"{d:.3f}" for d in devs) + " <= 0.10")


def test_branching_time_anchor(acceptance_log, anchor_pair):
    # At (v0, tau) = (50, sqrt(0.1/50)) the classical branching time must
    # land in [0.19, 0.26] and the Gaussian-packet value within 20% of it.
    tb_c, tb_q = anchor_pair
    ratio = tb_q.t_b / tb_c.t_b
    ok = (tb_c.valid and tb_q.valid
          and 0.19 <= tb_c.t_b <= 0.26
          and abs(1.0 - ratio) <= 0.20)
    check(acceptance_log, "branching-time anchor", ok,
          f"classical {tb_c.t_b:.4f} in [0.19, 0.26], "
          f"quantum/classical {ratio:.3f} within 20%")


def test_scaling_exponents(acceptance_log, run_vt_1e3, run_vt_1e2, run_vt_1e1,
                           transient_tb_cells, te_scan_cells):
    # Four fits on rescaled time scales:
    #   t_b/tau ~ vtilde^(-2/3) over {1e-3, 1e-2, 1e-1}   (+- 0.1)
    #   t_b/tau ~ vtilde^(-1/2) over {10, 100, 1000}      (+- 0.15)
    #   t_e/tau ~ vtilde^(-1)   over {1e-3, 1e-2, 1e-1}   (+- 0.1)
    #   t_e/tau minimum cell within one log step of vtilde = 1
    tb_pts, te_pts = [], []
    for spec, _, ek, s2 in (run_vt_1e3, run_vt_1e2, run_vt_1e1):
        tb = extract_tb(s2)
        te = extract_te(ek, spec.v0)
        assert tb.valid and te.valid
        tb_pts.append((spec.vtilde, tb.t_b / spec.tau))
        te_pts.append((spec.vtilde, te.t_e / spec.tau))
    tb_exp = fit_power_law(tb_pts)[0]
    te_exp = fit_power_law(te_pts)[0]

    assert all(valid for _, _, valid in transient_tb_cells)
    frozen_exp = fit_power_law([(vt, tb) for vt, tb, _ in transient_tb_cells])[0]

    cells, te_scan = te_scan_cells
    assert not np.isnan(te_scan).any()
    min_cell = float(cells[int(np.argmin(te_scan))])
    # one log step of the 7-cell scan is a factor 10^(1/3) ~ 2.154
    near_one = 10.0 ** (-1.0 / 3.0) - 1e-9 <= min_cell <= 10.0 ** (1.0 / 3.0) + 1e-9

    ok = (abs(tb_exp + 2.0 / 3.0) <= 0.10
          and abs(frozen_exp + 0.5) <= 0.15
          and abs(te_exp + 1.0) <= 0.10
          and near_one)
    check(acceptance_log, "scaling exponents", ok,
          f"t_b {tb_exp:.3f} (-2/3 +- 0.1), frozen {frozen_exp:.3f} "
          f"(-1/2 +- 0.15), t_e {te_exp:.3f} (-1 +- 0.1), "
          f"t_e minimum cell at vtilde {min_cell:.3f}")


def test_single_parameter_collapse(acceptance_log, run_vt_1e1, run_vt_1e1_low_v0):
    # Two points sharing vtilde = 0.1 must collapse onto one rescaled
    # heating curve: chi of e_k(t/tau)/v0 below 0.05.
    rescaled = []
    for spec, _, ek, _ in (run_vt_1e1, run_vt_1e1_low_v0):
        rescaled.append(ObservableSeries(
            kind="kinetic_energy",
            times=ek.times / spec.tau,
            values=ek.values / spec.v0,
            ensemble_count=ek.ensemble_count,
        ))
    v0, tau = 50.0, math.sqrt(0.1 / 50.0)
    window = (0.0, 5.0 * branching_time(v0, tau) / tau)
    chi = chi_indicator(rescaled[0], rescaled[1], window=window)
    check(acceptance_log, "single-parameter collapse",
          float(chi) < 0.05,
          f"chi {float(chi):.4f} < 0.05 over {chi.n_compared} points")


def test_quantum_free_limit(acceptance_log):
    # With the potential off, a Gaussian packet on L=100 / N=4096 must track
    # sigma_x(t) = sqrt((1 + t^2)/2) to 0.5% up to t = 5, keep its norm to
    # 1e-10 and its kinetic energy constant to 1e-8.
    spec = CorrelationSpec(v0=0.0, tau=1.0)
    grid = make_grid(spec, 5.0, L=100.0, N=4096)
    state = init_gaussian(grid)
    times = [0.0]
    s2 = [displacement2(state)]
    ek = [kinetic_energy(state)]
    drift = [abs(state.norm - 1.0)]
    for _ in range(grid.M):
        split_step(state, None, spec, grid.dt)
        times.append(state.time)
        s2.append(displacement2(state))
        ek.append(kinetic_energy(state))
        drift.append(abs(state.norm - 1.0))
    t = np.asarray(times)
    sigma_dev = float(np.abs(np.sqrt(s2) / np.sqrt((1.0 + t ** 2) / 2.0) - 1.0).max())
    norm_drift = max(drift)
    ek_wander = float(np.abs(np.asarray(ek) - ek[0]).max())
    ok = sigma_dev <= 5e-3 and norm_drift < 1e-10 and ek_wander < 1e-8
    check(acceptance_log, "free-packet dispersion", ok,
          f"sigma_x dev {sigma_dev:.1e} <= 5e-3, norm drift {norm_drift:.1e} "
          f"< 1e-10, e_k wander {ek_wander:.1e} < 1e-8")


def test_quantum_classical_divergence(acceptance_log, divergence_runs):
    # At equal vtilde = 10, the weak slow point (v0 = 0.2) must show at
    # least 3x the quantum-classical kinetic-energy mismatch of the strong
    # fast point (v0 = 50).
    chis = {}
    for label, (ek_q, ek_c, window_end) in divergence_runs.items():
        chis[label] = float(chi_indicator(ek_q, ek_c, window=(0.0, window_end)))
    ok = chis["weak_slow"] >= 3.0 * chis["strong_fast"]
    check(acceptance_log, "quantum-classical divergence", ok,
          f"chi {chis['weak_slow']:.4f} vs {chis['strong_fast']:.4f} "
          f"(ratio {chis['weak_slow'] / chis['strong_fast']:.0f} >= 3)")


def test_analytics_self_consistency(acceptance_log):
    # Closed forms against their defining expressions, the finite-tau to
    # white-noise crossover, and the validity boundary constant.
    v0 = 50.0
    tau = math.sqrt(0.1 / v0)
    ratio = rf_kinetic_energy(50.0, v0, tau) / wn_kinetic_energy(50.0, v0, tau)

    form_dev = 0.0
    for v, vt in ((50.0, 0.1), (0.2, 10.0), (12.5, 0.05)):
        tt = math.sqrt(vt / v)
        tb_form = (9.0 / (2.0 * math.pi)) ** (1.0 / 6.0) * vt ** (-2.0 / 3.0) * tt
        te_form = tt / (SQRT_HALF_PI * vt)
        form_dev = max(form_dev,
                       abs(branching_time(v, tt) / tb_form - 1.0),
                       abs(energy_time(v, tt) / te_form - 1.0))

    bound = (9.0 / (2.0 * math.pi)) ** 0.25
    ok = (abs(ratio - 1.0) <= 5e-3
          and form_dev <= 1e-12
          and round(WN_VALIDITY_VTILDE, 3) == 1.094
          and abs(WN_VALIDITY_VTILDE - bound) < 1e-14)
    check(acceptance_log, "analytics self-consistency", ok,
          f"late-time ratio dev {abs(ratio - 1.0):.1e} <= 5e-3, closed forms "
          f"{form_dev:.1e} <= 1e-12, validity bound rounds to 1.094")
