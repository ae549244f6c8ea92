"""Tropical corner loci and their toric Landau-Ginzburg duals."""

__version__ = "0.1.0"
