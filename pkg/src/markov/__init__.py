"""
Markov Package

Reversible finite Markov chains, Markov type 2 ratios and barycentric witnesses
for metric Markov cotype 2.
"""

from src.markov.chains import (
    ReversibleChain,
    cesaro_average,
    matrix_power,
    random_reversible_chain,
    validate_chain,
)
from src.markov.cotype import (
    PointConfiguration,
    TypeRatio,
    cotype_check,
    cotype_witness,
    markov_type_ratio,
)

__all__ = [
    'ReversibleChain',
    'cesaro_average',
    'matrix_power',
    'random_reversible_chain',
    'validate_chain',
    'PointConfiguration',
    'TypeRatio',
    'cotype_check',
    'cotype_witness',
    'markov_type_ratio',
]
