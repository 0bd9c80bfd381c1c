"""
Transport Package

Discrete probability measures, couplings and exact Wasserstein distances.
"""

from src.transport.measures import DiscreteMeasure, pushforward
from src.transport.wasserstein import Coupling, validate_coupling, wasserstein

__all__ = [
    'DiscreteMeasure',
    'pushforward',
    'Coupling',
    'validate_coupling',
    'wasserstein',
]
