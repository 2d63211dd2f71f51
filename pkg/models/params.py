#!/usr/bin/env python3
"""
Model Parameters
Transmission rate, force of infection and the parameter bundle shared by
the SIR, SI and SIS models.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict

from utils.errors import DomainError

DEFAULT_RECOVERY_RATE = 1.0 / 14.0


class FoiScaling(Enum):
    """How the infectious share enters the force of infection."""
    PAPER_LITERAL = "paper"       # tau * (I/M) * 100, percentage of population
    FRACTIONAL = "fractional"     # tau * (I/M)

    @classmethod
    def parse(cls, value) -> "FoiScaling":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text in ("paper", "paper_literal", "literal"):
            return cls.PAPER_LITERAL
        if text in ("fractional", "fraction"):
            return cls.FRACTIONAL
        raise DomainError(f"Unsupported force-of-infection scaling: {value}. "
                          f"Supported: ['paper', 'fractional']")

    @property
    def factor(self) -> float:
        return 100.0 if self is FoiScaling.PAPER_LITERAL else 1.0


def _require_non_negative(name: str, value: float) -> None:
    if value < 0 or value != value:
        raise DomainError(f"{name} must be non-negative, got: {value}")


def transmission_rate(r_c: float, p_t: float) -> float:
    """
    Transmission rate as the product of contact rate and per-contact
    transmission probability.

    Args:
        r_c: Contacts per person per day
        p_t: Probability of transmission per contact, in [0, 1]

    Returns:
        tau, transmissions per person per day

    Raises:
        DomainError: If r_c is negative or p_t lies outside [0, 1]
    """
    _require_non_negative("r_c", r_c)
    if not 0.0 <= p_t <= 1.0:
        raise DomainError(f"p_t must lie in [0, 1], got: {p_t}")
    return r_c * p_t


def foi_value(tau: float, i: float, m: float, scaling: FoiScaling) -> float:
    """Unchecked force of infection, used inside the integrators."""
    return tau * (i / m) * scaling.factor


@dataclass(frozen=True)
class ModelParams:
    """
    Rates shared by the compartmental models.

    tau is derived from r_c and p_t and cannot be set directly; use
    from_tau() or from_r0() when only the product is known.
    """
    r_c: float = 1.0
    p_t: float = 0.3
    alpha2: float = DEFAULT_RECOVERY_RATE
    gamma: float = 0.0
    foi_scaling: FoiScaling = FoiScaling.FRACTIONAL
    alpha_sis: float = 0.0
    tau: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "foi_scaling", FoiScaling.parse(self.foi_scaling))
        object.__setattr__(self, "tau", transmission_rate(self.r_c, self.p_t))
        _require_non_negative("alpha2", self.alpha2)
        _require_non_negative("gamma", self.gamma)
        _require_non_negative("alpha_sis", self.alpha_sis)

    @classmethod
    def from_tau(cls, tau: float, **kwargs) -> "ModelParams":
        """Build parameters from a known transmission rate (r_c = tau, p_t = 1)."""
        _require_non_negative("tau", tau)
        return cls(r_c=tau, p_t=1.0, **kwargs)

    @classmethod
    def from_r0(cls, r0: float, alpha2: float = DEFAULT_RECOVERY_RATE, **kwargs) -> "ModelParams":
        """Calibrate tau = R0 * alpha2."""
        _require_non_negative("r0", r0)
        _require_non_negative("alpha2", alpha2)
        return cls.from_tau(r0 * alpha2, alpha2=alpha2, **kwargs)

    @property
    def r0(self) -> float:
        """tau / alpha2; infinite without recovery."""
        if self.alpha2 == 0:
            return float("inf") if self.tau > 0 else 0.0
        return self.tau / self.alpha2

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["foi_scaling"] = self.foi_scaling.value
        return data


def force_of_infection(params: ModelParams, i: float, m: float) -> float:
    """
    Force of infection alpha1(I) for the current infectious count.

    Args:
        params: Model parameters (tau and scaling mode)
        i: Infectious persons, 0 <= i <= m
        m: Population size, m > 0

    Returns:
        alpha1 in the unit selected by params.foi_scaling

    Raises:
        DomainError: If m <= 0 or i is outside [0, m]
    """
    if not m > 0:
        raise DomainError(f"Population must be positive, got: {m}")
    if not 0.0 <= i <= m:
        raise DomainError(f"Infectious count must lie in [0, {m}], got: {i}")
    return foi_value(params.tau, i, m, params.foi_scaling)
