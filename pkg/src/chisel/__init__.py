"""Smooth lattice polytopes built by iterated chiseling, and their Ehrhart polynomials."""
