"""Computational topology of real plane curve singularities.

The package models topological types of real plane curve singularities
(Puiseux data, conjugate branch pairs, intersection tables), generates
explicit real morsification families and traces their zero sets into
combinatorial divides, builds and analyzes the associated 3-colored
diagrams, and converts between conjugate-pair types and reduced Alexander
polynomials with exact cyclotomic arithmetic.
"""

__version__ = "0.1.0"
