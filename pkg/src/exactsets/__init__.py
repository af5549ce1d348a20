"""Exact-arithmetic toolkit for bilevel, complementarity, reverse-convex
and (generalized) mixed-integer-linear set representations.

The core objects are generalized polyhedra (closed and open halfspaces),
finitely generated monoids and lattices, lifted mixed-integer set
representations and their union/intersection/complement algebra, level sets
of Chvatal/Gomory/Jeroslow functions, and the constructive conversions
between bilevel, complementarity, reverse-convex and union-of-polyhedra
representations.  All arithmetic is exact rational.
"""

from .exactnum import (
    rat,
    lp_solve,
    LpProblem,
    LpOutcome,
    LinRow,
    row,
    mat_inverse,
    gram_schmidt_complement,
)

__all__ = [name for name in dir() if not name.startswith("_")]
