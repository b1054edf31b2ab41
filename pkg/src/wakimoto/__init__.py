"""Symbolic engine for free-field realizations of affine current algebras.

Builds differential-operator and Wakimoto free-field realizations of a
simple Lie algebra from its root data, and verifies screening-current
contracts by exact operator-product-expansion computation.
"""

__version__ = "0.1.0"
