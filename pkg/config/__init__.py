"""
Configuration module for framekit
"""

from .settings import get_settings

__all__ = ["get_settings"]
