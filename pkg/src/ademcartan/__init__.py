"""Computational workbench for the Adem-Cartan operad over F2."""

from .gf2 import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
