"""Driven spin-chain simulations: Floquet, continuous and digital annealing."""

import json

from ._floqsim import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    IsingAnnealSetup,
    NumericalError,
    RunSummary,
    bessel_j0,
    calibrate_ising_chi,
    calibrate_xyz_chi,
    config_keys,
    continuous_ising_anneal,
    default_config,
    digital_ising_anneal,
    floquet_ising_anneal,
    gates_per_step,
    run_scenario_json,
    scenario_names,
    total_fidelity,
    transmon_ising_anneal,
    trotter_step_time,
    xi_averaged,
    xi_instantaneous,
)


def run_scenario(scenario, overrides=None, workers=1, out=None):
    """Run a scenario with string-valued overrides; returns the summary dict."""
    text = {k: str(v) for k, v in (overrides or {}).items()}
    return json.loads(run_scenario_json(scenario, text, workers, out))


__all__ = [name for name in dir() if not name.startswith("_")]
