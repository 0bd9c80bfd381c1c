"""
Extension Package

Finite-scale Lipschitz extension into balls of CAT(kappa) spaces.
"""

from src.extension.lipschitz import (
    ExtensionInstance,
    ExtensionResult,
    LipschitzExtender,
    extend,
    lipschitz_constant,
)

__all__ = [
    'ExtensionInstance',
    'ExtensionResult',
    'LipschitzExtender',
    'extend',
    'lipschitz_constant',
]
