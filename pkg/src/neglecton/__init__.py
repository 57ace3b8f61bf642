"""Numerical toolkit for the non-semisimple Ising anyon model built from neglectons."""

__version__ = "0.1.0"
