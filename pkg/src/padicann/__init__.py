"""Exact p-adic machinery for counting points on curves via disks and annuli."""

from .padic import DEFAULT_PRECISION, FieldParams, PAdic

__version__ = "0.1.0"

__all__ = ["PAdic", "FieldParams", "DEFAULT_PRECISION", "__version__"]
