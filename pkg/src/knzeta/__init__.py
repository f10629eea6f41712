"""Koba-Nielsen hyperplane arrangements, convergence conditions and polar loci."""

__version__ = "0.1.0"
