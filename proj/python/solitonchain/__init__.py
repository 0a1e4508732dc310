"""Entanglement generation and storage in dimerized spin chains."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, Error, ParameterError, CapacityError, NumericalError, DomainError  # noqa: F401
