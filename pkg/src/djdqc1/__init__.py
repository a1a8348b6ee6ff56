"""Deutsch-Jozsa via DQC1 and DQCp: simulation, synthesis and correlations."""

from .errors import ValidationError
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["ValidationError", "KERNEL_BACKEND", "__version__"]
