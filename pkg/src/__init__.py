"""
CAT(kappa) Lab

A numerical laboratory for the metric inequalities of CAT(kappa) spaces:
barycenters of finitely supported measures, quantitative convexity and
variance estimates, Wasserstein contraction, Markov cotype and Lipschitz
extension, evaluated on model spaces under seeded, reproducible sweeps.
"""

__version__ = '0.1.0'
