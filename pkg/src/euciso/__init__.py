"""Discrete groups of Euclidean isometries: structure, duals, Fourier, splittings."""

__version__ = "0.1.0"
