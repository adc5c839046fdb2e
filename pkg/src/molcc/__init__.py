"""Descriptor-driven molecular inference: featurization, Lasso models and MILP generation."""

__version__ = "0.1.0"
