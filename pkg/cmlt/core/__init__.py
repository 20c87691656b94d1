"""Core configuration, errors and arithmetic."""
from cmlt.core.config import Settings, get_settings
from cmlt.core.errors import CMLTError, ErrorCode

__all__ = ["Settings", "get_settings", "CMLTError", "ErrorCode"]
