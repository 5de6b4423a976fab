"""Minimum scan cover: exact solvers, approximations and lower bounds."""

__version__ = "1.0.0"
