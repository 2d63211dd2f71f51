#!/usr/bin/env python3
"""
Model Registry
Imports and registers all available compartmental models.
"""

from .factory import ModelFactory
from .sir import SIRModel
from .si import SIModel
from .sis import SISModel

ModelFactory.register_model('sir', SIRModel)
ModelFactory.register_model('si', SIModel)
ModelFactory.register_model('sis', SISModel)

AVAILABLE_MODELS = ['sir', 'si', 'sis']
