"""Verification toolkit for spinorial stability of Ricci-flat geometries.

Subpackages cover exact Clifford/G2 algebra, pointwise algebraic curvature
with kernel spinors, spectral tensor calculus on flat tori, the conformal
Laplacian eigenvalue and its variations, and warped-product metrics on
R^3 x M with their mass profiles.
"""

__version__ = "0.1.0"
