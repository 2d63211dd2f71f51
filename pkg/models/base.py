#!/usr/bin/env python3
"""
Base Compartmental Model Interface
Defines the common interface that all compartmental models must implement.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from utils.errors import DomainError
from .params import ModelParams


@dataclass(frozen=True)
class CompartmentState:
    """(S, I, R) occupancy of a population of size m at one instant."""
    s: float
    i: float
    r: float
    m: float

    @classmethod
    def initial(cls, m: float, i0: float, r0: float = 0.0) -> "CompartmentState":
        """Everyone not infectious or removed starts susceptible."""
        return cls(s=m - i0 - r0, i=i0, r=r0, m=m)

    @property
    def total(self) -> float:
        return self.s + self.i + self.r

    def as_dict(self) -> dict:
        return {"s": self.s, "i": self.i, "r": self.r, "m": self.m}


class CompartmentalModel(ABC):
    """Abstract base class for compartmental models."""

    name: str = ""
    compartments: Tuple[str, ...] = ("s", "i", "r")

    def __init__(self, params: ModelParams):
        self.params = params

    @abstractmethod
    def rates(self, t: float, y: np.ndarray, m: float) -> np.ndarray:
        """
        Time derivatives of the state vector.

        Args:
            t: Time in days
            y: State vector ordered as self.compartments
            m: Population size

        Returns:
            Array of derivatives, same shape as y
        """
        pass

    @abstractmethod
    def validate_state(self, state: CompartmentState) -> None:
        """
        Check that a state is admissible for this model.

        Raises:
            DomainError: If the state violates the model's conventions
        """
        pass

    def to_vector(self, state: CompartmentState) -> np.ndarray:
        y = np.zeros(len(self.compartments))
        y[:3] = (state.s, state.i, state.r)
        return y

    def from_vector(self, y: np.ndarray, m: float) -> CompartmentState:
        return CompartmentState(s=float(y[0]), i=float(y[1]), r=float(y[2]), m=m)

    @staticmethod
    def conserved_total(y: np.ndarray) -> float:
        """S + I + R; extra accumulators past R are already counted inside R."""
        return float(y[0] + y[1] + y[2])

    def _check_common(self, state: CompartmentState) -> None:
        if not state.m > 0:
            raise DomainError(f"Population must be positive, got: {state.m}")
        for label, value in (("s", state.s), ("i", state.i), ("r", state.r)):
            if value < 0 or value != value:
                raise DomainError(f"Compartment {label} must be non-negative, got: {value}")

    def describe(self) -> dict:
        return {
            "model": self.name,
            "compartments": list(self.compartments),
            "params": self.params.as_dict(),
        }
