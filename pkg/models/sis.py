#!/usr/bin/env python3
"""
SIS Model
Recovered persons return to the susceptible pool; population counted in
persons.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from utils.errors import DomainError
from .base import CompartmentalModel, CompartmentState
from .params import ModelParams

CONSERVATION_TOLERANCE = 1e-9


class SISModel(CompartmentalModel):
    """dS/dt = -tau*S*I + alpha*I, dI/dt = tau*S*I - alpha*I."""

    name = "sis"
    compartments = ("s", "i", "r")

    def rates(self, t: float, y: np.ndarray, m: float) -> np.ndarray:
        infection = self.params.tau * y[0] * y[1]
        recovery = self.params.alpha_sis * y[1]
        return np.array([recovery - infection, infection - recovery, 0.0])

    def validate_state(self, state: CompartmentState) -> None:
        self._check_common(state)
        if state.r != 0:
            raise DomainError(f"SIS model has no recovered compartment, got r = {state.r}")
        if abs(state.s + state.i - state.m) > CONSERVATION_TOLERANCE * state.m:
            raise DomainError(f"SIS state must satisfy s + i = m, got {state.s + state.i} "
                              f"for m = {state.m}")


def sis_rates(state: CompartmentState, params: ModelParams) -> Tuple[float, float]:
    """
    SIS derivatives in persons.

    Raises:
        DomainError: If s + i differs from m
    """
    if abs(state.s + state.i - state.m) > CONSERVATION_TOLERANCE * max(state.m, 1.0):
        raise DomainError(f"SIS state must satisfy s + i = m, got {state.s + state.i} "
                          f"for m = {state.m}")
    infection = params.tau * state.s * state.i
    recovery = params.alpha_sis * state.i
    return recovery - infection, infection - recovery


@dataclass(frozen=True)
class SISEquilibria:
    """Equilibrium infectious counts and whether each one attracts."""
    points: Tuple[float, ...]
    stable: Dict[float, bool] = field(default_factory=dict)

    @property
    def endemic(self):
        return self.points[1] if len(self.points) > 1 else None

    def as_set(self) -> set:
        return set(self.points)


def sis_equilibria(m: float, tau: float, alpha: float) -> SISEquilibria:
    """
    Solve dI/dt = (tau*M - alpha)*I - tau*I^2 = 0.

    Returns:
        I = 0 always; I = M - alpha/tau when it is positive. The endemic
        point is stable iff tau*M > alpha, in which case I = 0 is unstable.

    Raises:
        DomainError: If tau = 0 (only the degenerate I = 0 remains) or any
            argument is negative
    """
    if m <= 0:
        raise DomainError(f"Population must be positive, got: {m}")
    if tau < 0 or alpha < 0:
        raise DomainError(f"tau and alpha must be non-negative, got tau = {tau}, alpha = {alpha}")
    if tau == 0:
        raise DomainError("tau = 0 leaves only the degenerate equilibrium I = 0")
    endemic = m - alpha / tau
    if endemic <= 0:
        return SISEquilibria(points=(0.0,), stable={0.0: True})
    return SISEquilibria(points=(0.0, endemic), stable={0.0: False, endemic: True})
