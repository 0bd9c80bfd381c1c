"""
Tests package for the CAT(kappa) Lab.
"""
