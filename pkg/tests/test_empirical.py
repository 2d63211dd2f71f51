#!/usr/bin/env python3
"""
Tests for the empirical total-infected estimate, sweeps and ramp scenarios
"""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from models.base import CompartmentState
from models.integrator import integrate
from models.params import ModelParams
from utils.empirical import (
    RampedSIRModel,
    Scenario,
    SweepBase,
    SweepParameter,
    SweepSpec,
    empirical_total_infected,
    fatality_recovery_scenarios,
    run_sweep,
)
from utils.errors import DomainError

GRIDS = {
    SweepParameter.SUSCEPTIBLE_PCT: np.linspace(5, 50, 10),
    SweepParameter.INFECTIOUS_PCT: np.linspace(0.1, 1.0, 10),
    SweepParameter.R_C: np.linspace(0.1, 1.0, 10),
    SweepParameter.P_T: np.linspace(0.01, 0.1, 10),
    SweepParameter.POPULATION: np.linspace(1000, 10000, 10),
}


def test_hand_evaluation():
    total = empirical_total_infected(i0=10, r_c=1, i=10, m=1000, s=250, p_t=0.3)
    assert total.value == pytest.approx(85.0)
    assert not total.overflow


def test_no_susceptibles_leaves_initial_cases():
    assert empirical_total_infected(i0=10, r_c=2, i=500, m=1000, s=0, p_t=0.9).value == 10


def test_overflow_is_capped():
    total = empirical_total_infected(i0=10, r_c=1, i=400, m=1000, s=1000, p_t=0.3)
    assert total.raw == pytest.approx(12010.0)
    assert total.value == 1000
    assert total.overflow


@pytest.mark.parametrize("kwargs", [
    dict(i0=10, r_c=1, i=10, m=0, s=250, p_t=0.3),
    dict(i0=10, r_c=1, i=2000, m=1000, s=250, p_t=0.3),
    dict(i0=10, r_c=-1, i=10, m=1000, s=250, p_t=0.3),
    dict(i0=10, r_c=1, i=10, m=1000, s=250, p_t=1.3),
    dict(i0=10, r_c=1, i=10, m=1000, s=-1, p_t=0.3),
])
def test_domain_errors(kwargs):
    with pytest.raises(DomainError):
        empirical_total_infected(**kwargs)


@pytest.mark.parametrize("parameter", list(GRIDS))
def test_sweeps_are_affine(parameter):
    base = SweepBase(params=ModelParams(r_c=1.0, p_t=0.3), population=1000, i0=1, infectious=1,
                     susceptible=100)
    result = run_sweep(SweepSpec(parameter, GRIDS[parameter], base))
    totals = np.array([row.i_total for row in result.rows])
    assert not any(row.overflow for row in result.rows)
    assert np.max(np.abs(np.diff(totals, n=2))) < 1e-9


def test_susceptible_sweep_values():
    base = SweepBase(params=ModelParams(r_c=1.0, p_t=0.3), population=1000, i0=10, infectious=10)
    result = run_sweep(SweepSpec("susceptible_pct", [25, 50], base))
    assert [row.i_total for row in result.rows] == pytest.approx([85.0, 160.0])
    assert result.rows[0].susceptible_count == pytest.approx(75.0)
    assert result.metadata()["sweep"]["parameter"] == "susceptible_pct"


def test_reverse_sweep_preserves_order():
    base = SweepBase(params=ModelParams(r_c=1.0, p_t=0.3))
    result = run_sweep(SweepSpec(SweepParameter.P_T, [0.3, 0.2, 0.1], base))
    assert [row.value for row in result.rows] == [0.3, 0.2, 0.1]
    totals = [row.i_total for row in result.rows]
    assert totals == sorted(totals, reverse=True)


def test_non_monotone_values_rejected():
    base = SweepBase(params=ModelParams())
    with pytest.raises(DomainError):
        SweepSpec(SweepParameter.R_C, [0.1, 0.3, 0.2], base)
    with pytest.raises(DomainError):
        SweepSpec(SweepParameter.R_C, [], base)


def test_offending_value_named():
    base = SweepBase(params=ModelParams())
    with pytest.raises(DomainError, match="p_t = 1.5"):
        run_sweep(SweepSpec(SweepParameter.P_T, [0.5, 1.5], base))


def test_parallel_sweep_keeps_order():
    base = SweepBase(params=ModelParams(r_c=1.0, p_t=0.3), susceptible=100)
    spec = SweepSpec(SweepParameter.R_C, list(np.linspace(0.1, 2.0, 8)), base)
    assert run_sweep(spec, jobs=2).to_rows() == run_sweep(spec, jobs=1).to_rows()


def test_constant_ramps_match_plain_sir():
    params = ModelParams(r_c=1.0, p_t=0.3, alpha2=0.1)
    init = CompartmentState.initial(m=1000, i0=10)
    plain = integrate("sir", params, init, dt=0.1, horizon=60)
    ramped = integrate(RampedSIRModel(params), None, init, dt=0.1, horizon=60)
    assert np.array_equal(plain.values, ramped.values[:, :3])
    assert np.all(ramped.column("d") == 0)


def test_ramps_clamp_at_zero():
    model = RampedSIRModel(ModelParams(alpha2=0.1, gamma=0.01), recovery_slope=-0.01, fatality_slope=-0.01)
    assert model.recovery_rate(20.0) == 0.0
    assert model.fatality_rate(0.5) == pytest.approx(0.005)


def test_scenarios():
    params = ModelParams(r_c=1.0, p_t=0.3, alpha2=0.1, gamma=0.01)
    init = CompartmentState.initial(m=1000, i0=10)
    runs = fatality_recovery_scenarios(params, init, horizon=60, dt=0.1)
    assert list(runs) == list(Scenario)
    assert runs[Scenario.FR_BOTH_UP].recovery_slope > 0
    assert runs[Scenario.F_UP_R_DOWN].recovery_slope < 0
    assert runs[Scenario.BOTH_DOWN].fatality_slope < 0

    up = runs[Scenario.F_UP_R_DOWN].series()
    down = runs[Scenario.F_DOWN_R_UP].series()
    assert down["I"].max() < up["I"].max()
    assert down["I"].iloc[-1] < up["I"].iloc[-1]
    assert down["drawn"].iloc[-1] < up["drawn"].iloc[-1]
    assert list(up.columns) == ["t", "S", "drawn", "I", "R", "D"]

    for run in runs.values():
        frame = run.series()
        assert np.all(np.diff(frame["D"]) >= 0)
        assert np.all(frame["D"] <= frame["R"] + 1e-9)
        assert run.metadata()["peak_infectious"] == pytest.approx(frame["I"].max())


def test_scenario_subset():
    params = ModelParams(r_c=1.0, p_t=0.3, alpha2=0.1, gamma=0.01)
    init = CompartmentState.initial(m=1000, i0=10)
    runs = fatality_recovery_scenarios(params, init, horizon=10, dt=0.1, scenarios=["both_down"])
    assert list(runs) == [Scenario.BOTH_DOWN]


def test_sweep_metadata_echoes_spec():
    spec = SweepSpec(SweepParameter.P_T, [0.1, 0.2], SweepBase(params=ModelParams()))
    assert set(run_sweep(spec).metadata()["sweep"]) == {"parameter", "values", "base"}


def test_negative_slopes_rejected():
    with pytest.raises(DomainError):
        fatality_recovery_scenarios(ModelParams(), CompartmentState.initial(m=1000, i0=10),
                                    recovery_slope=-0.1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
