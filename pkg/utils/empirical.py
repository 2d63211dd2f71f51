#!/usr/bin/env python3
"""
Empirical spread engine
Evaluates the closed-form total-infected estimate, sweeps it over one
parameter at a time and runs the fatality/recovery ramp scenarios on the
SIR model.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from models.base import CompartmentState
from models.integrator import DEFAULT_DT, Trajectory, integrate
from models.params import ModelParams
from models.sir import SIRModel
from .errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_RECOVERY_SLOPE = 0.002
DEFAULT_FATALITY_SLOPE = 0.0005


@dataclass(frozen=True)
class TotalInfected:
    value: float
    raw: float
    overflow: bool


def empirical_total_infected(i0: float, r_c: float, i: float, m: float, s: float,
                             p_t: float) -> TotalInfected:
    """
    I_total = I0 + r_c * (I/M) * 100 * S * p_t.

    Args:
        i0: Initially infected persons
        r_c: Contacts per person per day
        i: Infectious persons, 0 <= i <= m
        m: Population size
        s: Susceptible persons
        p_t: Transmission probability per contact

    Returns:
        TotalInfected; value is capped at m and overflow tells whether the
        cap applied

    Raises:
        DomainError: If an argument is outside its domain
    """
    if not m > 0:
        raise DomainError(f"Population must be positive, got: {m}")
    if not 0.0 <= i <= m:
        raise DomainError(f"Infectious count must lie in [0, {m:g}], got: {i}")
    if s < 0:
        raise DomainError(f"Susceptible count must be non-negative, got: {s}")
    if i0 < 0:
        raise DomainError(f"i0 must be non-negative, got: {i0}")
    if r_c < 0:
        raise DomainError(f"r_c must be non-negative, got: {r_c}")
    if not 0.0 <= p_t <= 1.0:
        raise DomainError(f"p_t must lie in [0, 1], got: {p_t}")
    raw = i0 + r_c * (i / m) * 100.0 * s * p_t
    return TotalInfected(value=min(raw, m), raw=raw, overflow=raw > m)


class SweepParameter(Enum):
    SUSCEPTIBLE_PCT = "susceptible_pct"
    INFECTIOUS_PCT = "infectious_pct"
    R_C = "r_c"
    P_T = "p_t"
    POPULATION = "population"


class Scenario(Enum):
    """Slope directions (fatality, recovery) of the ramp scenarios."""
    FR_BOTH_UP = "fr_both_up"
    F_UP_R_DOWN = "f_up_r_down"
    BOTH_DOWN = "both_down"
    F_DOWN_R_UP = "f_down_r_up"

    @property
    def signs(self) -> tuple:
        return {
            Scenario.FR_BOTH_UP: (1, 1),
            Scenario.F_UP_R_DOWN: (1, -1),
            Scenario.BOTH_DOWN: (-1, -1),
            Scenario.F_DOWN_R_UP: (-1, 1),
        }[self]


@dataclass(frozen=True)
class SweepBase:
    """Fixed quantities of a sweep, in persons."""
    params: ModelParams
    population: float = 1000.0
    i0: float = 10.0
    infectious: float = 10.0
    susceptible: Optional[float] = None

    @property
    def s(self) -> float:
        return self.population if self.susceptible is None else self.susceptible

    def as_dict(self) -> Dict:
        return {
            "params": self.params.as_dict(),
            "population": self.population,
            "i0": self.i0,
            "infectious": self.infectious,
            "susceptible": self.s,
        }


@dataclass(frozen=True)
class SweepSpec:
    parameter: SweepParameter
    values: tuple
    base: SweepBase

    def __post_init__(self):
        object.__setattr__(self, "parameter", SweepParameter(self.parameter))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise DomainError("A sweep needs at least one value")
        steps = np.diff(self.values)
        if len(steps) and not (np.all(steps > 0) or np.all(steps < 0)):
            raise DomainError(f"Sweep values must be strictly monotone, got: {list(self.values)}")

    def as_dict(self) -> Dict:
        return {
            "parameter": self.parameter.value,
            "values": list(self.values),
            "base": self.base.as_dict(),
        }


@dataclass(frozen=True)
class SweepRow:
    value: float
    i_total: float
    raw: float
    overflow: bool
    susceptible_count: float

    def as_dict(self) -> Dict:
        return {
            "value": self.value,
            "i_total": self.i_total,
            "raw": self.raw,
            "overflow": self.overflow,
            "susceptible_count": self.susceptible_count,
        }


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: List[SweepRow] = field(default_factory=list)

    def to_rows(self) -> List[Dict]:
        return [row.as_dict() for row in self.rows]

    def metadata(self) -> Dict:
        return {"sweep": self.spec.as_dict()}


def _inputs_for(parameter: SweepParameter, base: SweepBase, value: float) -> Dict[str, float]:
    m, s, i = base.population, base.s, base.infectious
    r_c, p_t = base.params.r_c, base.params.p_t
    if parameter is SweepParameter.SUSCEPTIBLE_PCT:
        s = value / 100.0 * m
    elif parameter is SweepParameter.INFECTIOUS_PCT:
        i = value / 100.0 * m
    elif parameter is SweepParameter.R_C:
        r_c = value
    elif parameter is SweepParameter.P_T:
        p_t = value
    elif parameter is SweepParameter.POPULATION:
        s, i, m = s / m * value, i / m * value, value
    return {"i0": base.i0, "r_c": r_c, "i": i, "m": m, "s": s, "p_t": p_t}


def evaluate_sweep_value(parameter: SweepParameter, base: SweepBase, value: float) -> SweepRow:
    """One sweep row; DomainError messages name the swept value."""
    inputs = _inputs_for(parameter, base, value)
    try:
        total = empirical_total_infected(**inputs)
    except DomainError as e:
        raise DomainError(f"{parameter.value} = {value:g}: {e}")
    drawn = min(max(total.value - inputs["i0"], 0.0), inputs["s"])
    return SweepRow(value=value, i_total=total.value, raw=total.raw,
                    overflow=total.overflow, susceptible_count=drawn)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """
    Evaluate the total-infected estimate at every swept value.

    Args:
        spec: What to sweep and what to hold fixed
        jobs: Worker processes; rows keep input order either way

    Returns:
        SweepResult with one row per value

    Raises:
        DomainError: Naming an offending value
    """
    if jobs <= 1 or len(spec.values) == 1:
        rows = [evaluate_sweep_value(spec.parameter, spec.base, v) for v in spec.values]
        return SweepResult(spec=spec, rows=rows)

    rows: List[Optional[SweepRow]] = [None] * len(spec.values)
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(evaluate_sweep_value, spec.parameter, spec.base, v): k
                   for k, v in enumerate(spec.values)}
        for future in concurrent.futures.as_completed(futures):
            rows[futures[future]] = future.result()
    return SweepResult(spec=spec, rows=rows)


class RampedSIRModel(SIRModel):
    """
    SIR with linearly ramped recovery and fatality rates:
    alpha2(t) = max(alpha2 + recovery_slope*t, 0),
    gamma(t) = max(gamma + fatality_slope*t, 0),
    dR/dt = (alpha2(t) + gamma(t))*I with cumulative deaths D tracked
    inside R.
    """

    name = "ramped_sir"
    compartments = ("s", "i", "r", "d")

    def __init__(self, params: ModelParams, recovery_slope: float = 0.0,
                 fatality_slope: float = 0.0):
        super().__init__(params)
        self.recovery_slope = recovery_slope
        self.fatality_slope = fatality_slope

    def recovery_rate(self, t: float) -> float:
        return max(self.params.alpha2 + self.recovery_slope * t, 0.0)

    def fatality_rate(self, t: float) -> float:
        return max(self.params.gamma + self.fatality_slope * t, 0.0)

    def rates(self, t: float, y: np.ndarray, m: float) -> np.ndarray:
        infection = self.infection_flux(y, m)
        gamma_t = self.fatality_rate(t)
        removal = (self.recovery_rate(t) + gamma_t) * y[1]
        return np.array([-infection, infection - removal, removal, gamma_t * y[1]])

    def describe(self) -> dict:
        info = super().describe()
        info.update(recovery_slope=self.recovery_slope, fatality_slope=self.fatality_slope)
        return info


@dataclass(frozen=True)
class ScenarioRun:
    scenario: Scenario
    recovery_slope: float
    fatality_slope: float
    trajectory: Trajectory

    def series(self) -> pd.DataFrame:
        """t, S, drawn (S0 - S), I, R and cumulative deaths D."""
        traj = self.trajectory
        s = traj.susceptible
        return pd.DataFrame({
            "t": traj.times,
            "S": s,
            "drawn": s[0] - s,
            "I": traj.infectious,
            "R": traj.recovered,
            "D": traj.column("d"),
        })

    def metadata(self) -> Dict:
        peak_t, peak_i = self.trajectory.peak()
        return {
            "scenario": self.scenario.value,
            "recovery_slope": self.recovery_slope,
            "fatality_slope": self.fatality_slope,
            "peak_time": peak_t,
            "peak_infectious": peak_i,
            **self.trajectory.metadata(),
        }


def fatality_recovery_scenarios(params: ModelParams, init: CompartmentState,
                                horizon: float = 60.0, dt: float = DEFAULT_DT,
                                recovery_slope: float = DEFAULT_RECOVERY_SLOPE,
                                fatality_slope: float = DEFAULT_FATALITY_SLOPE,
                                scenarios: Optional[Iterable[Scenario]] = None) -> Dict[Scenario, ScenarioRun]:
    """
    Integrate SIR under each fatality/recovery ramp scenario.

    Args:
        params: Base rates; alpha2 and gamma are the values at t = 0
        init: Initial state
        horizon: Days to integrate
        dt: RK4 step
        recovery_slope: Magnitude of the alpha2 ramp per day
        fatality_slope: Magnitude of the gamma ramp per day
        scenarios: Subset to run; all four by default

    Returns:
        Dictionary of ScenarioRun keyed by scenario, in scenario order

    Raises:
        StepTooLarge: If an integration becomes unstable
    """
    if recovery_slope < 0 or fatality_slope < 0:
        raise DomainError("Slope magnitudes must be non-negative; scenarios set the sign")
    runs = {}
    for scenario in (scenarios or list(Scenario)):
        scenario = Scenario(scenario)
        fatality_sign, recovery_sign = scenario.signs
        model = RampedSIRModel(params, recovery_slope=recovery_sign * recovery_slope,
                               fatality_slope=fatality_sign * fatality_slope)
        trajectory = integrate(model, None, init, dt=dt, horizon=horizon)
        runs[scenario] = ScenarioRun(scenario, model.recovery_slope, model.fatality_slope, trajectory)
        logger.debug("Scenario %s: peak I = %.2f", scenario.value, trajectory.peak()[1])
    return runs
