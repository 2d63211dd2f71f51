#!/usr/bin/env python3
"""
Tests for the RK4 integrator against closed forms and conservation
"""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from models.base import CompartmentState
from models.integrator import integrate, rk4_step, step_count
from models.params import ModelParams
from models.si import si_closed_form_series
from utils.errors import DomainError, StepTooLarge


def si_error(dt, horizon=30.0, tau=0.3, i0=0.01):
    traj = integrate("si", ModelParams.from_tau(tau), CompartmentState.initial(m=1.0, i0=i0),
                     dt=dt, horizon=horizon)
    exact = si_closed_form_series(i0, tau, traj.times)
    return float(np.max(np.abs(traj.infectious - exact)))


def test_si_matches_closed_form():
    assert si_error(0.01) < 1e-6
    assert si_error(0.01, horizon=10.0) < 1e-8


def test_fourth_order_convergence():
    ratio = si_error(0.2) / si_error(0.1)
    assert 12.0 <= ratio <= 20.0


def test_rk4_step_exponential():
    y = rk4_step(lambda t, y: -y, 0.0, np.array([1.0]), 0.1)
    assert y[0] == pytest.approx(np.exp(-0.1), abs=1e-6)


def test_grid():
    traj = integrate("sir", ModelParams(), CompartmentState.initial(m=1000, i0=10), dt=0.1, horizon=1.0)
    assert len(traj) == 11
    assert traj.times[-1] == pytest.approx(1.0)
    assert step_count(0.3, 1.0) == 4
    with pytest.raises(DomainError):
        step_count(0.0, 1.0)
    with pytest.raises(ValueError):
        traj.values[0, 0] = 1.0


def test_sir_without_infection_is_constant():
    traj = integrate("sir", ModelParams(), CompartmentState.initial(m=1000, i0=0), dt=0.1, horizon=50)
    assert np.all(traj.susceptible == 1000)
    assert np.all(traj.infectious == 0)


def test_sir_conservation():
    rng = np.random.default_rng(42)
    for _ in range(100):
        params = ModelParams.from_tau(float(rng.uniform(0, 1)), alpha2=float(rng.uniform(0, 0.5)))
        init = CompartmentState.initial(m=1000.0, i0=float(rng.uniform(1, 100)))
        traj = integrate("sir", params, init, dt=0.05, horizon=200)
        assert traj.max_drift < 1e-6 * 1000
        totals = traj.values.sum(axis=1)
        assert np.max(np.abs(totals - 1000.0)) < 1e-6 * 1000


@pytest.mark.parametrize("i0", [1.0, 250.0, 900.0])
def test_sis_converges_to_endemic(i0):
    params = ModelParams.from_tau(0.001, alpha_sis=0.5)
    traj = integrate("sis", params, CompartmentState.initial(m=1000, i0=i0), dt=0.1, horizon=100)
    assert traj.final.i == pytest.approx(500.0, abs=1.0)


def test_sis_dies_out_below_threshold():
    params = ModelParams.from_tau(0.0004, alpha_sis=0.5)
    traj = integrate("sis", params, CompartmentState.initial(m=1000, i0=900), dt=0.1, horizon=200)
    assert traj.final.i < 1.0


def test_sis_fixed_point():
    params = ModelParams.from_tau(0.001, alpha_sis=0.5)
    traj = integrate("sis", params, CompartmentState.initial(m=1000, i0=500), dt=0.1, horizon=50)
    assert np.max(np.abs(traj.infectious - 500.0)) < 1e-9 * 1000


def test_unstable_step():
    params = ModelParams.from_tau(1.0, alpha_sis=0.0)
    with pytest.raises(StepTooLarge):
        integrate("sis", params, CompartmentState.initial(m=1000, i0=10), dt=1.0, horizon=10)


def test_peak_and_rows():
    traj = integrate("sir", ModelParams(alpha2=0.1), CompartmentState.initial(m=1000, i0=10),
                     dt=0.1, horizon=100)
    peak_t, peak_i = traj.peak()
    assert 0 < peak_t < 100
    assert peak_i == pytest.approx(traj.infectious.max())
    rows = traj.to_rows()
    assert set(rows[0]) == {"t", "S", "I", "R"}
    assert traj.metadata()["steps"] == 1000


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
