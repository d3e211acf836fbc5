"""Arbitrary-precision Gauss hypergeometric function 2F1: exact reference
evaluation, two-large-parameter asymptotic expansions, and the
lattice-gas-in-traps partition function built on them.
"""

__version__ = "0.1.0"
