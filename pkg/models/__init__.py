#!/usr/bin/env python3
"""
Compartmental Models Package
SIR, SI and SIS dynamics behind a common interface, the RK4 integrator
and SIR end-time estimation.
"""

from .base import CompartmentalModel, CompartmentState
from .params import FoiScaling, ModelParams, force_of_infection, transmission_rate
from .registry import AVAILABLE_MODELS, ModelFactory
from .integrator import Trajectory, integrate
from .end_time import EndTimeReport, sir_end_time

__all__ = [
    'CompartmentalModel', 'CompartmentState', 'FoiScaling', 'ModelParams',
    'force_of_infection', 'transmission_rate', 'AVAILABLE_MODELS', 'ModelFactory',
    'Trajectory', 'integrate', 'EndTimeReport', 'sir_end_time',
]
