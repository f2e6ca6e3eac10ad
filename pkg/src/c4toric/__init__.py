"""Toric and C4-toric code construction, noisy syndrome extraction,
matching decoders and threshold campaigns."""

from .codes import CodeSpec, Family, build_code, verify_code
from .kernels import BACKEND
from .pauli import PauliOperator

__version__ = "0.1.0"

__all__ = ["BACKEND", "CodeSpec", "Family", "PauliOperator", "build_code", "verify_code", "__version__"]
