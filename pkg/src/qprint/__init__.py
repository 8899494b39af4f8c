"""Simulators for structured-light printing of topological textures and inverse Faraday responses."""

__version__ = "0.1.0"
