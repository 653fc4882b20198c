"""Multicast networks whose linear solvability over GF(q) is decided by subgroups and cosets."""

from .errors import CapacityError, InconsistencyError
from .netmodel import NetworkParams

__all__ = ["CapacityError", "InconsistencyError", "NetworkParams"]
__version__ = "0.1.0"
