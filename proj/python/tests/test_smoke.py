import math

import numpy as np
import pytest

import floqsim


def test_calibrations():
    chi = floqsim.calibrate_ising_chi()
    assert abs(floqsim.bessel_j0(chi)) < 1e-10
    assert abs(chi - 2.404826) < 1e-6
    xyz = floqsim.calibrate_xyz_chi()
    assert abs(floqsim.bessel_j0(2 * xyz) - 1 / 3) < 1e-9


def test_xi_average_matches_sampled_mean():
    even = (0.7, 0.3, 1.1)
    odd = (1.9, 2.0, 0.4)
    omega = 3.0
    period = 2 * math.pi / omega
    ts = np.linspace(0.0, period, 2001)[:-1]
    sampled = np.mean([floqsim.xi_instantaneous(omega, even, odd, t) for t in ts], axis=0)
    avg = floqsim.xi_averaged(omega, even, odd)
    assert avg.shape == (3, 3)
    assert np.max(np.abs(sampled - avg)) < 1e-10


def test_continuous_anneal():
    s = floqsim.IsingAnnealSetup()
    s.n_sites = 3
    s.t_final = 8.0
    r = floqsim.continuous_ising_anneal(s, 1000)
    assert r.certificate["passed"]
    assert 0.0 < r.infidelity < 0.2
    assert len(r.times) == len(r.fidelity)


def test_digital_anneal_converges_with_steps():
    coarse = floqsim.digital_ising_anneal(3, 20, 8.0)
    fine = floqsim.digital_ising_anneal(3, 200, 8.0)
    s = floqsim.IsingAnnealSetup()
    s.n_sites = 3
    s.t_final = 8.0
    cont = floqsim.continuous_ising_anneal(s, 1000)
    assert abs(fine.final_fidelity - cont.final_fidelity) < abs(
        coarse.final_fidelity - cont.final_fidelity
    )


def test_error_budget():
    assert floqsim.gates_per_step(4) == 16
    assert floqsim.trotter_step_time(4, 0.018) == pytest.approx(0.162)
    assert floqsim.total_fidelity(0.0, 4, 10, 0.05) == pytest.approx(0.95)


def test_scenario_run(tmp_path):
    summary = floqsim.run_scenario(
        "xi_table", {"chi_even_grid": "0,2.404826", "chi_odd_grid": "0"}, out=tmp_path
    )
    assert set(summary) == {"config_echo", "headline_numbers", "convergence"}
    assert (tmp_path / "summary.json").exists()
    first = next(tmp_path.glob("*.csv")).read_text(encoding="utf-8").splitlines()[0]
    assert first.startswith("#schema=")


def test_unknown_key_rejected():
    with pytest.raises(floqsim.ConfigError):
        floqsim.run_scenario("xi_table", {"no_such_key": "1"})
    assert "substeps" in floqsim.config_keys()
