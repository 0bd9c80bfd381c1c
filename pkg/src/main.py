#!/usr/bin/env python3
"""
CAT(kappa) Lab - Entry Point

This module serves as the main entry point of the ``catlab`` command.
It loads the configuration, sets up the logging system and dispatches the
subcommands, mapping their outcome onto the exit code.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

import structlog
import yaml

# Add the parent directory to sys.path to allow for imports from src
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.checks import CHECK_CLASSES
from src.cli import commands
from src.errors import LabError, SolverError, SweepError
from src.logging.elasticsearch import setup_elasticsearch_logging
from src.sweep.report import FORMATS

DEFAULT_CONFIG_PATH = 'config/config.yaml'

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2

logger = structlog.get_logger(__name__)


def load_config(config_path=None):
    """
    Load configuration from a YAML file.

    Args:
        config_path (str): Explicit path, or None for the default location

    Returns:
        dict: Configuration; empty when no path is given and the default file is missing
    """
    if config_path is None:
        if not os.path.exists(DEFAULT_CONFIG_PATH):
            return {}
        config_path = DEFAULT_CONFIG_PATH
    with open(config_path, 'r') as f:
        config = yaml.safe_load(f) or {}
    if not isinstance(config, dict):
        raise ValueError(f"configuration {config_path} must be a mapping")
    return config


def setup_logging(config):
    """Set up the logging system based on the configuration."""
    logging_config = config.get('logging', {}) or {}

    # Set up file logging
    file_config = logging_config.get('file', {}) or {}
    level = getattr(logging, str(file_config.get('level', 'INFO')).upper(), logging.INFO)
    if file_config.get('enabled', False):
        log_path = file_config.get('path', 'logs/catlab.log')
        directory = os.path.dirname(log_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        logging.basicConfig(
            filename=log_path,
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
    else:
        logging.basicConfig(
            stream=sys.stderr,
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(key_order=['event'], sort_keys=True),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    # Set up Elasticsearch report shipping
    es_config = logging_config.get('elasticsearch', {}) or {}
    if es_config.get('enabled', False):
        setup_elasticsearch_logging(es_config)

    logger.debug("logging_initialized", level=logging.getLevelName(level))


def _add_curvature_args(parser, kappa=1.0):
    parser.add_argument('--kappa', type=float, default=kappa, help='Curvature upper bound')
    parser.add_argument('--epsilon', type=float, default=0.5, help='Diameter margin in (0, 1)')


def build_parser():
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(prog='catlab', description='Numerical lab for CAT(kappa) inequalities')
    parser.add_argument(
        '-c', '--config',
        default=None,
        help=f'Path to the configuration file (default: {DEFAULT_CONFIG_PATH} if present)'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    pc = sub.add_parser('constants', help='Print k, Gamma, N and C_epsilon')
    _add_curvature_args(pc)
    pc.add_argument('--out', default=None)
    pc.set_defaults(func=commands.cmd_constants)

    pb = sub.add_parser('barycenter', help='Barycenter of a measure')
    pb.add_argument('--mu', required=True, help='Measure JSON file')
    pb.add_argument('--epsilon', type=float, default=None, help='Diameter margin for the regime check')
    pb.add_argument('--out', default=None)
    pb.set_defaults(func=commands.cmd_barycenter)

    pw = sub.add_parser('wasserstein', help='Exact Wasserstein distance of two measures')
    pw.add_argument('--p', type=float, default=2.0)
    pw.add_argument('--mu', required=True, help='First measure JSON file')
    pw.add_argument('--nu', required=True, help='Second measure JSON file')
    pw.add_argument('--out', default=None)
    pw.set_defaults(func=commands.cmd_wasserstein)

    pp = sub.add_parser('project', help='Orthogonal projection onto a convex set')
    pp.add_argument('--set', required=True, help='Convex set JSON file')
    pp.add_argument('--point', required=True, help='JSON coordinate list or JSON file')
    pp.add_argument('--out', default=None)
    pp.set_defaults(func=commands.cmd_project)

    pv = sub.add_parser('verify', help='Seeded sweep of one inequality check')
    pv.add_argument('check', choices=[check_class.name for check_class in CHECK_CLASSES])
    pv.add_argument('--space', default='sphere2', help='euclidean<n>, sphere<n>, hyperbolic<n> or product:<a>,<b>')
    _add_curvature_args(pv)
    pv.add_argument('--radius', type=float, default=None, help='Sampling radius around the origin')
    pv.add_argument('--trials', type=int, default=1000)
    pv.add_argument('--seed', type=int, required=True)
    pv.add_argument('--tol', type=float, default=None)
    pv.add_argument('--out', default=None, help='Report file')
    pv.add_argument('--format', choices=FORMATS, default='csv')
    pv.add_argument('--z-at-center', action='store_true', help='Variance inequality at the ball center')
    pv.add_argument('--workers', type=int, default=None)
    pv.add_argument('--param', action='append', default=[], metavar='KEY=VALUE', help='Check parameter')
    pv.set_defaults(func=commands.cmd_verify)

    ps = sub.add_parser('sweep', help='Run the sweeps listed in a manifest')
    ps.add_argument('--manifest', required=True, help='YAML file with a sweeps list')
    ps.add_argument('--out-dir', default=None, help='Directory for one report file per sweep')
    ps.add_argument('--format', choices=FORMATS, default='csv')
    ps.add_argument('--workers', type=int, default=None)
    ps.set_defaults(func=commands.cmd_sweep)

    pe = sub.add_parser('extend', help='Lipschitz extension of an instance')
    pe.add_argument('--instance', required=True, help='Extension instance JSON file')
    _add_curvature_args(pe)
    pe.add_argument('--neighbors', type=int, default=None)
    pe.add_argument('--weighting', choices=('inverse', 'uniform'), default=None)
    pe.add_argument('--max-sweeps', type=int, default=None)
    pe.add_argument('--out', default=None)
    pe.set_defaults(func=commands.cmd_extend)

    return parser


def parse_args(argv=None):
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def run_command(argv):
    """
    Run one command.

    Args:
        argv (list): Arguments without the program name

    Returns:
        int: 0 on success, 1 on failed trials or solver failures, 2 on malformed input
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_MALFORMED

    try:
        config = load_config(args.config)
    except (OSError, ValueError, yaml.YAMLError) as e:
        sys.stderr.write(f"error: cannot load configuration: {e}\n")
        return EXIT_MALFORMED
    setup_logging(config)

    try:
        return args.func(args, config)
    except SweepError as e:
        sys.stderr.write(f"error: {e}\nFAILED {e.fingerprint}\n")
        return EXIT_FAILED
    except SolverError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILED
    except (LabError, ValueError, KeyError, TypeError, OSError, yaml.YAMLError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_MALFORMED


def main():
    """Main entry point for the application."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
