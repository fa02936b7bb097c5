"""Exact computations with finite linearly reductive group schemes and their quotient singularities."""

from .errors import LrqError

__version__ = "0.1.0"

__all__ = ["LrqError", "__version__"]
