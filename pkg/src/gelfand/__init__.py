"""Desk-scale verification of the scalar identities behind direct systems of
commutative homogeneous spaces: root-system dimensions, character-ring
decompositions, symmetric-pair zonal constants, truncated Bargmann-space
operators, exact Pfaffians, and the rescaled degree-ladder algebra."""

__version__ = "0.1.0"
