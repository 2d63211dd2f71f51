#!/usr/bin/env python3
"""
SI Model
Susceptible-Infectious dynamics without recovery, plus the logistic
closed form for the infectious fraction.
"""

from typing import Tuple

import numpy as np

from utils.errors import DomainError
from .base import CompartmentalModel, CompartmentState
from .params import ModelParams

FRACTION_TOLERANCE = 1e-9


class SIModel(CompartmentalModel):
    """
    dS/dt = -tau*S*I/M, dI/dt = tau*S*I/M.

    With M = 1 the state holds population fractions and dI/dt reduces to
    tau*I*(1 - I).
    """

    name = "si"
    compartments = ("s", "i", "r")

    def rates(self, t: float, y: np.ndarray, m: float) -> np.ndarray:
        infection = self.params.tau * y[0] * y[1] / m
        return np.array([-infection, infection, 0.0])

    def validate_state(self, state: CompartmentState) -> None:
        self._check_common(state)
        if state.r != 0:
            raise DomainError(f"SI model has no recovered compartment, got r = {state.r}")
        if abs(state.s + state.i - state.m) > FRACTION_TOLERANCE * state.m:
            raise DomainError(f"SI state must satisfy s + i = m, got {state.s + state.i} "
                              f"for m = {state.m}")


def si_rates(state: CompartmentState, params: ModelParams) -> Tuple[float, float]:
    """
    SI derivatives in the fraction convention.

    Args:
        state: s and i as population fractions with s + i = 1
        params: Model parameters (tau)

    Returns:
        (dS/dt, dI/dt) in fractions per day

    Raises:
        DomainError: If s or i is outside [0, 1] or s + i differs from 1
    """
    s, i = state.s, state.i
    if not (0.0 <= s <= 1.0 and 0.0 <= i <= 1.0):
        raise DomainError(f"SI fractions must lie in [0, 1], got s = {s}, i = {i}")
    if abs(s + i - 1.0) > FRACTION_TOLERANCE:
        raise DomainError(f"SI fractions must sum to 1, got {s + i}")
    tau = params.tau
    return -tau * s * i, tau * i * (1.0 - i)


def si_closed_form(i0: float, tau: float, t):
    """
    Infectious fraction at time t: I0*e^(tau*t) / (1 - I0 + I0*e^(tau*t)).

    Evaluated as I0 / (I0 + (1 - I0)*e^(-tau*t)), which is the same value
    and does not overflow for large tau*t. Accepts scalar or array t.
    """
    if not 0.0 <= i0 <= 1.0:
        raise DomainError(f"i0 must lie in [0, 1], got: {i0}")
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be non-negative")
    if i0 == 0.0:
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    value = i0 / (i0 + (1.0 - i0) * np.exp(-tau * np.asarray(t, dtype=float)))
    return value if np.ndim(t) else float(value)


def si_closed_form_series(i0: float, tau: float, times) -> np.ndarray:
    return np.asarray(si_closed_form(i0, tau, np.asarray(times, dtype=float)))
