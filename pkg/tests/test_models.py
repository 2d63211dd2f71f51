#!/usr/bin/env python3
"""
Tests for model parameters, rate functions and the model factory
"""

import math
import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from models.base import CompartmentalModel, CompartmentState
from models.params import FoiScaling, ModelParams, force_of_infection, transmission_rate
from models.registry import AVAILABLE_MODELS, ModelFactory
from models.si import si_closed_form, si_rates
from models.sir import SIRModel, sir_rates, sir_static_estimate
from models.sis import sis_equilibria, sis_rates
from utils.errors import DomainError


@pytest.mark.parametrize("r_c, p_t, tau", [(1.0, 0.3, 0.3), (1.0, 0.0, 0.0), (2.5, 0.4, 1.0)])
def test_transmission_rate(r_c, p_t, tau):
    assert transmission_rate(r_c, p_t) == pytest.approx(tau)


@pytest.mark.parametrize("r_c, p_t", [(-1.0, 0.3), (1.0, 1.5), (1.0, -0.1)])
def test_transmission_rate_domain(r_c, p_t):
    with pytest.raises(DomainError):
        transmission_rate(r_c, p_t)


def test_force_of_infection_modes():
    literal = ModelParams(r_c=1.0, p_t=0.3, foi_scaling=FoiScaling.PAPER_LITERAL)
    fractional = ModelParams(r_c=1.0, p_t=0.3)
    assert force_of_infection(literal, 100, 1000) == pytest.approx(3.0)
    assert force_of_infection(fractional, 100, 1000) == pytest.approx(0.03)
    assert force_of_infection(literal, 0, 1000) == 0.0
    assert force_of_infection(fractional, 0, 1000) == 0.0
    with pytest.raises(DomainError):
        force_of_infection(fractional, 10, 0)
    with pytest.raises(DomainError):
        force_of_infection(fractional, 1001, 1000)


def test_params_from_r0():
    params = ModelParams.from_r0(1.79)
    assert params.tau == pytest.approx(1.79 / 14)
    assert params.r0 == pytest.approx(1.79)
    assert ModelParams(alpha2=0.0).r0 == math.inf
    assert FoiScaling.parse("paper") is FoiScaling.PAPER_LITERAL
    with pytest.raises(DomainError):
        FoiScaling.parse("percent")
    with pytest.raises(DomainError):
        ModelParams(gamma=-0.1)


def test_sir_rates():
    params = ModelParams(r_c=1.0, p_t=0.3, alpha2=0.1)
    ds, di, dr = sir_rates(CompartmentState(s=990, i=10, r=0, m=1000), params)
    assert ds == pytest.approx(-2.97)
    assert di == pytest.approx(1.97)
    assert dr == pytest.approx(1.0)
    assert sir_rates(CompartmentState(s=1000, i=0, r=0, m=1000), params) == (0.0, 0.0, 0.0)


def test_sir_static_estimate():
    params = ModelParams(r_c=1.0, p_t=0.3, alpha2=0.1, gamma=0.02)
    i_est, r_est = sir_static_estimate(CompartmentState(s=990, i=10, r=0, m=1000), params)
    assert i_est == pytest.approx(2.97)
    assert r_est == pytest.approx(2.97 * 0.08)


def test_si_rates():
    params = ModelParams(r_c=1.0, p_t=0.3)
    assert si_rates(CompartmentState(s=1.0, i=0.0, r=0, m=1), params) == (0.0, 0.0)
    assert si_rates(CompartmentState(s=0.5, i=0.5, r=0, m=1), params)[1] == pytest.approx(0.075)
    assert si_rates(CompartmentState(s=0.0, i=1.0, r=0, m=1), params)[1] == 0.0
    with pytest.raises(DomainError):
        si_rates(CompartmentState(s=0.5, i=0.6, r=0, m=1), params)


def test_si_closed_form():
    assert si_closed_form(0.0, 0.3, 5.0) == 0.0
    assert si_closed_form(1.0, 0.3, 5.0) == 1.0
    assert si_closed_form(0.01, 0.3, 10.0) == pytest.approx(0.16866, abs=1e-5)
    assert si_closed_form(0.01, 50.0, 1000.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        si_closed_form(1.5, 0.3, 1.0)


def test_sis_rates():
    params = ModelParams.from_tau(0.001, alpha_sis=0.5)
    ds, di = sis_rates(CompartmentState(s=800, i=200, r=0, m=1000), params)
    assert di == pytest.approx(60.0)
    assert ds == pytest.approx(-60.0)
    assert sis_rates(CompartmentState(s=1000, i=0, r=0, m=1000), params) == (0.0, 0.0)
    assert sis_rates(CompartmentState(s=500, i=500, r=0, m=1000), params)[1] == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        sis_rates(CompartmentState(s=500, i=400, r=0, m=1000), params)


def test_sis_equilibria():
    assert sis_equilibria(1000, 0.001, 0.5).as_set() == {0.0, 500.0}
    assert sis_equilibria(1000, 0.001, 0.5).stable[500.0]
    assert sis_equilibria(1000, 0.0004, 0.5).as_set() == {0.0}
    assert sis_equilibria(1000, 0.001, 0.0).as_set() == {0.0, 1000.0}
    with pytest.raises(DomainError):
        sis_equilibria(1000, 0.0, 0.5)


def test_model_factory():
    assert AVAILABLE_MODELS == ['sir', 'si', 'sis']
    assert set(ModelFactory.get_supported_models()) >= set(AVAILABLE_MODELS)
    assert ModelFactory.is_model_supported("SIR")

    model = ModelFactory.create_model("sir", ModelParams())
    assert isinstance(model, SIRModel)
    assert model.describe()["model"] == "sir"
    with pytest.raises(DomainError):
        ModelFactory.create_model("seir", ModelParams())
    with pytest.raises(ValueError):
        ModelFactory.register_model("broken", dict)


def test_state_validation():
    model = ModelFactory.create_model("sir", ModelParams())
    with pytest.raises(DomainError):
        model.validate_state(CompartmentState(s=900, i=10, r=0, m=1000))
    with pytest.raises(DomainError):
        model.validate_state(CompartmentState(s=-1, i=1001, r=0, m=1000))
    sis = ModelFactory.create_model("sis", ModelParams())
    with pytest.raises(DomainError):
        sis.validate_state(CompartmentState(s=900, i=90, r=10, m=1000))
    assert isinstance(sis, CompartmentalModel)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
