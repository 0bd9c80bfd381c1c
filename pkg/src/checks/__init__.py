"""
Inequality Checks Package

This package contains one module per family of inequalities verified by the
lab, together with the registry through which sweeps look checks up by name.
"""

import structlog

from src.checks.base import CSV_COLUMNS, BaseCheck, CheckRegistry, CheckReport
from src.checks.convexity import ComparisonCheck, UniformConvexityCheck, check_comparison, check_uniform_convexity
from src.checks.functions import (
    AffineFunction,
    ConvexFunctionRegistry,
    DistanceToSetFunction,
    SquaredDistanceFunction,
)
from src.checks.lipschitz import LipschitzCheck, check_barycenter_lipschitz
from src.checks.markov import CotypeCheck, MarkovTypeCheck
from src.checks.phi import (
    GeodesicQuadruple,
    PhiConvexityCheck,
    SpCalcCheck,
    check_phi_convexity,
    check_spcalc_psi,
    kendall_phi,
)
from src.checks.pisier import MartingaleInstance, PisierCheck, build_martingale, check_pisier, verify_martingale
from src.checks.variance import JensenCheck, VarianceCheck, check_jensen, check_variance

logger = structlog.get_logger(__name__)

CHECK_CLASSES = (
    UniformConvexityCheck,
    ComparisonCheck,
    PhiConvexityCheck,
    SpCalcCheck,
    VarianceCheck,
    JensenCheck,
    LipschitzCheck,
    PisierCheck,
    MarkovTypeCheck,
    CotypeCheck,
)


def register_checks(config=None):
    """
    Register every check enabled in the configuration.

    Args:
        config (dict): Application configuration; checks are enabled unless
            ``checks.<name>.enabled`` is false

    Returns:
        list: Names of the registered checks
    """
    check_configs = (config or {}).get('checks', {}) or {}
    CheckRegistry.clear()
    for check_class in CHECK_CLASSES:
        if not check_configs.get(check_class.name, {}).get('enabled', True):
            logger.info("check_disabled", check=check_class.name)
            continue
        CheckRegistry.register(check_class.name, check_class)
    return CheckRegistry.names()


__all__ = [
    'CSV_COLUMNS',
    'BaseCheck',
    'CheckRegistry',
    'CheckReport',
    'register_checks',
    'check_uniform_convexity',
    'check_comparison',
    'kendall_phi',
    'check_phi_convexity',
    'GeodesicQuadruple',
    'check_spcalc_psi',
    'check_variance',
    'check_jensen',
    'check_barycenter_lipschitz',
    'MartingaleInstance',
    'build_martingale',
    'verify_martingale',
    'check_pisier',
    'ConvexFunctionRegistry',
    'SquaredDistanceFunction',
    'DistanceToSetFunction',
    'AffineFunction',
]
