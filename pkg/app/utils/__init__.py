"""Utility modules for the application."""

from app.utils.projection import CapacityProjector, FloorProjector
from app.utils.security import validate_api_key
from app.utils.singleton import SingletonMeta

__all__ = ["CapacityProjector", "FloorProjector", "SingletonMeta", "validate_api_key"]
