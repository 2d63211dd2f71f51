#!/usr/bin/env python3
"""
SIR Model
Susceptible, Infectious and Recovered dynamics where R holds both the
recovered and the dead.
"""

from typing import Tuple

import numpy as np

from utils.errors import DomainError
from .base import CompartmentalModel, CompartmentState
from .params import ModelParams, foi_value, force_of_infection

CONSERVATION_TOLERANCE = 1e-6


class SIRModel(CompartmentalModel):
    """dS/dt = -a1(I)S, dI/dt = a1(I)S - a2*I, dR/dt = a2*I."""

    name = "sir"
    compartments = ("s", "i", "r")

    def infection_flux(self, y: np.ndarray, m: float) -> float:
        alpha1 = foi_value(self.params.tau, y[1], m, self.params.foi_scaling)
        return alpha1 * y[0]

    def removal_rate(self, t: float) -> float:
        return self.params.alpha2

    def rates(self, t: float, y: np.ndarray, m: float) -> np.ndarray:
        infection = self.infection_flux(y, m)
        removal = self.removal_rate(t) * y[1]
        return np.array([-infection, infection - removal, removal])

    def validate_state(self, state: CompartmentState) -> None:
        self._check_common(state)
        if abs(state.total - state.m) > CONSERVATION_TOLERANCE * state.m:
            raise DomainError(f"SIR state must satisfy s + i + r = m, "
                              f"got {state.total} for m = {state.m}")


def sir_rates(state: CompartmentState, params: ModelParams) -> Tuple[float, float, float]:
    """
    Instantaneous SIR derivatives.

    Args:
        state: Current (S, I, R) occupancy
        params: Model parameters

    Returns:
        (dS/dt, dI/dt, dR/dt) in persons per day
    """
    alpha1 = force_of_infection(params, state.i, state.m)
    infection = alpha1 * state.s
    removal = params.alpha2 * state.i
    return -infection, infection - removal, removal


def sir_static_estimate(state: CompartmentState, params: ModelParams) -> Tuple[float, float]:
    """
    Snapshot relations I = a1*S and R = a2*I - gamma*I.

    These describe a single instant and are reported next to the end-time
    estimate; the integrator never uses them.

    Args:
        state: Supplies S and the infectious share that sets a1
        params: Model parameters (alpha2, gamma, scaling)

    Returns:
        (i, r) estimates in persons
    """
    alpha1 = force_of_infection(params, state.i, state.m)
    i_est = alpha1 * state.s
    r_est = params.alpha2 * i_est - params.gamma * i_est
    return i_est, r_est
