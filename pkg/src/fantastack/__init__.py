"""Exact combinatorics of fantastacks over affine and global toric varieties."""
from fantastack.kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
