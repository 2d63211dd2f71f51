#!/usr/bin/env python3
"""
SIR end-time estimation
Steps the SIR model forward until the epidemic settles into the
disease-free state or an endemic equilibrium.

The published loop guard ("while R0 < 1 or all derivatives are zero")
cannot run as written; the loop here continues while the epidemic
persists and stops at the first equilibrium.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from utils.errors import DomainError
from .anchors import load_reference_anchors
from .base import CompartmentState
from .integrator import DEFAULT_DT, iterate_states, step_count
from .params import FoiScaling, ModelParams
from .sir import SIRModel, sir_static_estimate

logger = logging.getLogger(__name__)


class TerminationReason(Enum):
    DISEASE_FREE = "disease_free"
    ENDEMIC_EQUILIBRIUM = "endemic_equilibrium"
    HORIZON_EXHAUSTED = "horizon_exhausted"


class EquilibriumType(Enum):
    DISEASE_FREE = "disease_free_equilibrium"
    ENDEMIC = "endemic_equilibrium"
    NONE = "none"


_EQUILIBRIUM_FOR = {
    TerminationReason.DISEASE_FREE: EquilibriumType.DISEASE_FREE,
    TerminationReason.ENDEMIC_EQUILIBRIUM: EquilibriumType.ENDEMIC,
    TerminationReason.HORIZON_EXHAUSTED: EquilibriumType.NONE,
}


@dataclass(frozen=True)
class EndTimeReport:
    t_end: float
    termination_reason: TerminationReason
    equilibrium_type: EquilibriumType
    final_state: CompartmentState
    static_estimate: Tuple[float, float]
    r0: float
    dt: float
    eps_i: float
    eps_deriv: float
    horizon: float

    @property
    def message(self) -> str:
        if self.termination_reason is TerminationReason.HORIZON_EXHAUSTED:
            return f"No equilibrium reached within {self.horizon:g} days"
        return f"The epidemic will be ended after {self.t_end:.2f} days"

    def as_dict(self) -> Dict[str, Any]:
        i_est, r_est = self.static_estimate
        return {
            "t_end": self.t_end,
            "termination_reason": self.termination_reason.value,
            "equilibrium_type": self.equilibrium_type.value,
            "final_state": self.final_state.as_dict(),
            "static_estimate": {"i": i_est, "r": r_est},
            "r0": self.r0,
            "dt": self.dt,
            "eps_i": self.eps_i,
            "eps_deriv": self.eps_deriv,
            "horizon": self.horizon,
            "message": self.message,
        }


def _settled(model: SIRModel, t: float, y: np.ndarray, m: float,
             eps_i: float, eps_deriv: float) -> Optional[TerminationReason]:
    if y[1] < eps_i:
        return TerminationReason.DISEASE_FREE
    if np.max(np.abs(model.rates(t, y, m))) < eps_deriv:
        return TerminationReason.ENDEMIC_EQUILIBRIUM
    return None


def sir_end_time(params: ModelParams, init: CompartmentState, eps_i: float = 1.0,
                 eps_deriv: float = 1e-3, horizon: float = 365.0,
                 dt: float = DEFAULT_DT) -> EndTimeReport:
    """
    Estimate how long the epidemic persists under the SIR model.

    Args:
        params: SIR parameters
        init: Initial state (s + i + r = m)
        eps_i: Infectious count, in persons, below which the area is disease free
        eps_deriv: Largest |dS/dt|, |dI/dt|, |dR/dt| accepted as an endemic equilibrium
        horizon: Give up after this many days
        dt: RK4 step in days

    Returns:
        EndTimeReport with t_end and the reason the loop stopped

    Raises:
        DomainError: Invalid thresholds or initial state
        StepTooLarge: Integration left the physical range
    """
    if not eps_i > 0:
        raise DomainError(f"eps_i must be positive, got: {eps_i}")
    if not eps_deriv > 0:
        raise DomainError(f"eps_deriv must be positive, got: {eps_deriv}")
    model = SIRModel(params)
    model.validate_state(init)
    n_steps = step_count(dt, horizon)
    m = init.m

    t_end, y = 0.0, model.to_vector(init)
    reason = _settled(model, 0.0, y, m, eps_i, eps_deriv)
    if reason is None:
        for _, t, y, _ in iterate_states(model, y, m, dt, n_steps):
            t_end = t
            reason = _settled(model, t, y, m, eps_i, eps_deriv)
            if reason is not None:
                break
        else:
            reason = TerminationReason.HORIZON_EXHAUSTED

    final_state = model.from_vector(y, m)
    logger.info("SIR end time: %s at t = %.2f days", reason.value, t_end)
    return EndTimeReport(
        t_end=t_end,
        termination_reason=reason,
        equilibrium_type=_EQUILIBRIUM_FOR[reason],
        final_state=final_state,
        static_estimate=sir_static_estimate(final_state, params),
        r0=params.r0,
        dt=dt,
        eps_i=eps_i,
        eps_deriv=eps_deriv,
        horizon=horizon,
    )


@dataclass(frozen=True)
class CalibrationSetup:
    params: ModelParams
    init: CompartmentState
    eps_i: float
    eps_deriv: float
    horizon: float
    dt: float
    reference_end_days: float


def india_calibration_setup(dt: Optional[float] = None,
                            foi_scaling: FoiScaling = FoiScaling.FRACTIONAL) -> CalibrationSetup:
    """
    Inputs of the India calibration: tau = R0 * alpha2 with the shipped R0,
    active-case count, population and threshold.
    """
    ref = load_reference_anchors("india_calibration")
    return CalibrationSetup(
        params=ModelParams.from_r0(ref["r0"], alpha2=ref["alpha2"], foi_scaling=foi_scaling),
        init=CompartmentState.initial(m=float(ref["population"]), i0=float(ref["active_cases"])),
        eps_i=float(ref["eps_i"]),
        eps_deriv=float(ref["eps_deriv"]),
        horizon=float(ref["horizon"]),
        dt=dt if dt is not None else float(ref["dt"]),
        reference_end_days=float(ref["reference_end_days"]),
    )


def india_calibration(dt: Optional[float] = None,
                      foi_scaling: FoiScaling = FoiScaling.FRACTIONAL) -> EndTimeReport:
    """Run sir_end_time on the India calibration inputs."""
    setup = india_calibration_setup(dt, foi_scaling)
    return sir_end_time(setup.params, setup.init, eps_i=setup.eps_i, eps_deriv=setup.eps_deriv,
                        horizon=setup.horizon, dt=setup.dt)
