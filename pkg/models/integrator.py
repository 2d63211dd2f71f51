#!/usr/bin/env python3
"""
Fixed-step integrator
Classical fourth-order Runge-Kutta over a uniform time grid, with the
trajectory container the models and the empirical engine share.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from utils.errors import DomainError, StepTooLarge
from .base import CompartmentalModel, CompartmentState
from .params import ModelParams

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.1
BLOWUP_FACTOR = 10.0

RateFunction = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(f: RateFunction, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """
    Single-step the ODE system y' = f(t, y) by classical Runge-Kutta.

    f: callable returning the derivative array at (t, y)
    t: current value of the independent variable
    y: current state array (not modified)
    h: step size

    Returns the state at t + h.
    """
    k1 = f(t, y)
    k2 = f(t + h / 2.0, y + (h / 2.0) * k1)
    k3 = f(t + h / 2.0, y + (h / 2.0) * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_count(dt: float, horizon: float) -> int:
    if not dt > 0:
        raise DomainError(f"dt must be positive, got: {dt}")
    if not horizon > 0:
        raise DomainError(f"horizon must be positive, got: {horizon}")
    return max(1, int(math.ceil(horizon / dt - 1e-9)))


def iterate_states(model: CompartmentalModel, y0: np.ndarray, m: float,
                   dt: float, n_steps: int) -> Iterator[Tuple[int, float, np.ndarray, bool]]:
    """
    Yield (k, t_k, y_k, clamped) for k = 1..n_steps with t_k = k*dt.

    Negative compartments are reset to zero after each step and reported
    through the clamped flag. Raises StepTooLarge when any compartment
    leaves [-10m, 10m] or stops being finite.
    """
    limit = BLOWUP_FACTOR * m
    f = lambda t, y: model.rates(t, y, m)
    y = y0
    for k in range(1, n_steps + 1):
        t_prev = (k - 1) * dt
        y = rk4_step(f, t_prev, y, dt)
        if not np.all(np.isfinite(y)) or np.any(np.abs(y) > limit):
            raise StepTooLarge(f"Integration unstable at t = {k * dt:g} with dt = {dt:g}: "
                               f"state {y.tolist()} exceeds {BLOWUP_FACTOR:g} x population")
        clamped = bool(np.any(y < 0))
        if clamped:
            y = np.where(y < 0, 0.0, y)
        yield k, k * dt, y, clamped


@dataclass(frozen=True)
class Trajectory:
    """
    Time-indexed states on a uniform grid.

    values[k] is the state vector at times[k] = k*dt, ordered as
    compartments. Arrays are read-only.
    """
    model: str
    dt: float
    times: np.ndarray
    values: np.ndarray
    m: float
    compartments: Tuple[str, ...] = ("s", "i", "r")
    clamped_steps: int = 0
    max_drift: float = 0.0
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.times.setflags(write=False)
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.compartments.index(name)]

    @property
    def susceptible(self) -> np.ndarray:
        return self.column("s")

    @property
    def infectious(self) -> np.ndarray:
        return self.column("i")

    @property
    def recovered(self) -> np.ndarray:
        return self.column("r")

    def state_at(self, k: int) -> CompartmentState:
        s, i, r = self.values[k, :3]
        return CompartmentState(s=float(s), i=float(i), r=float(r), m=self.m)

    @property
    def final(self) -> CompartmentState:
        return self.state_at(len(self) - 1)

    @property
    def points(self) -> List[Tuple[float, CompartmentState]]:
        return [(float(t), self.state_at(k)) for k, t in enumerate(self.times)]

    def peak(self) -> Tuple[float, float]:
        """(time, value) of the infectious maximum; first occurrence on ties."""
        k = int(np.argmax(self.infectious))
        return float(self.times[k]), float(self.infectious[k])

    def to_rows(self) -> List[Dict[str, float]]:
        rows = []
        for k, t in enumerate(self.times):
            row = {"t": float(t)}
            row.update({name.upper(): float(v) for name, v in zip(self.compartments, self.values[k])})
            rows.append(row)
        return rows

    def metadata(self) -> Dict:
        return {
            "model": self.model,
            "dt": self.dt,
            "steps": len(self) - 1,
            "population": self.m,
            "clamped_steps": self.clamped_steps,
            "max_conservation_drift": self.max_drift,
            "params": self.params,
        }


def integrate(model: Union[str, CompartmentalModel], params: Optional[ModelParams],
              init: CompartmentState, dt: float = DEFAULT_DT,
              horizon: float = 100.0) -> Trajectory:
    """
    Integrate a compartmental model with fixed-step RK4.

    Args:
        model: Registered model name ('sir', 'si', 'sis') or a model instance
        params: Parameters for a named model; ignored for an instance
        init: Initial state, validated by the model
        dt: Step in days
        horizon: Length of the run in days; the grid ends at the first
            multiple of dt at or beyond it

    Returns:
        Trajectory with n_steps + 1 points

    Raises:
        DomainError: Invalid dt, horizon or initial state
        StepTooLarge: Integration left the physical range
    """
    if isinstance(model, str):
        from .registry import ModelFactory
        if params is None:
            raise DomainError(f"Parameters required to create model '{model}'")
        model = ModelFactory.create_model(model, params)
    n_steps = step_count(dt, horizon)
    model.validate_state(init)

    m = init.m
    y0 = model.to_vector(init)
    values = np.empty((n_steps + 1, len(y0)))
    values[0] = y0
    clamped_steps = 0
    max_drift = abs(model.conserved_total(y0) - m)
    for k, _, y, clamped in iterate_states(model, y0, m, dt, n_steps):
        values[k] = y
        clamped_steps += clamped
        max_drift = max(max_drift, abs(model.conserved_total(y) - m))

    if clamped_steps:
        logger.debug("%s: %d step(s) renormalized negative compartments", model.name, clamped_steps)
    times = np.arange(n_steps + 1) * dt
    return Trajectory(
        model=model.name,
        dt=dt,
        times=times,
        values=values,
        m=m,
        compartments=tuple(model.compartments),
        clamped_steps=clamped_steps,
        max_drift=max_drift,
        params=model.params.as_dict(),
    )
