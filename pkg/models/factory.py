#!/usr/bin/env python3
"""
Model Factory
Creates and manages compartmental model instances.
"""

from typing import Dict, Type

from utils.errors import DomainError
from .base import CompartmentalModel
from .params import ModelParams


class ModelFactory:
    """Factory class for creating compartmental models."""

    _models: Dict[str, Type[CompartmentalModel]] = {}

    @classmethod
    def register_model(cls, name: str, model_class: Type[CompartmentalModel]):
        """
        Register a new compartmental model.

        Args:
            name: Model name (e.g., 'sir', 'sis')
            model_class: Model class that inherits from CompartmentalModel
        """
        if not issubclass(model_class, CompartmentalModel):
            raise ValueError("Model class must inherit from CompartmentalModel")
        cls._models[name] = model_class

    @classmethod
    def create_model(cls, model_name: str, params: ModelParams, **kwargs) -> CompartmentalModel:
        """
        Create a model instance.

        Args:
            model_name: Name of the model to create
            params: Model parameters
            **kwargs: Additional model-specific arguments

        Returns:
            Configured model instance

        Raises:
            DomainError: If model name is not supported
        """
        key = model_name.strip().lower()
        if key not in cls._models:
            raise DomainError(f"Unsupported model: {model_name}. "
                              f"Supported models: {list(cls._models.keys())}")
        return cls._models[key](params, **kwargs)

    @classmethod
    def get_supported_models(cls) -> list:
        return list(cls._models.keys())

    @classmethod
    def is_model_supported(cls, model_name: str) -> bool:
        return model_name.strip().lower() in cls._models
