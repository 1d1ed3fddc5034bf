"""Exact p-adic kernels for Lubin-Tate formal groups, their period rings and monodromy descent."""

from .kernels import BACKEND
from .padic import BaseFieldSpec, FElement

__version__ = "0.1.0"

__all__ = ["BACKEND", "BaseFieldSpec", "FElement", "__version__"]
