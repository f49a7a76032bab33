"""Finite-group workbench for higher central extensions, torsors and cohomology."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
