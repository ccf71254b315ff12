"""Similarity-driven stochastic choice toolkit."""

__version__ = "0.1.0"
