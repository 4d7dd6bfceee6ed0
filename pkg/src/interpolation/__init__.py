"""Affine-invariant WENO-Z point-value interpolation."""
