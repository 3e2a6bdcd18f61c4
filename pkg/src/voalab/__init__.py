"""Exact lattice realizations of the N=4 superconformal algebra at c = -9 and of
affine A2 at level -3/2, with finite-cutoff verification of their identities."""

from .report import ENGINE_VERSION, VerificationReport
from .scalar import SQRT2, Scalar
from .core import State, E, vacuum

__version__ = ENGINE_VERSION

__all__ = ["Scalar", "SQRT2", "State", "E", "vacuum", "VerificationReport", "__version__"]
