"""Finite open non-deterministic dynamics as lax functors, their interactions and global dynamics."""

__version__ = "0.1.0"
