"""Finitary generalized algebraic theories, an equality-free first-order
language over them, finite-model semantics and invariance checks."""

__version__ = "0.1.0"
