"""Twisted characters, affine numerators, loop-group orbits and Wiener checks."""
__version__ = "0.1.0"
