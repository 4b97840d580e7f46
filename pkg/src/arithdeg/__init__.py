"""Dynamical degrees, Lyapunov multipliers and height growth for endomorphisms
of products of projective spaces over Q."""

__version__ = "0.1.0"
