"""CM Lang-Trotter lab: exact trace counts and explicit constants for CM elliptic curves."""

__version__ = "0.1.0"

__all__ = ["__version__"]
