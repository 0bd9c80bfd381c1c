"""
Command Handlers Module

One handler per subcommand. Handlers take the parsed arguments and the loaded
configuration, write their results to standard output or ``--out`` and return
the exit code: 0 when everything passed, 1 when a trial failed or an
extension could not be certified.
"""

import os
import sys

import structlog

from src.barycenter.projection import orthogonal_project
from src.barycenter.solver import BarycenterSolver
from src.checks import register_checks
from src.cli.parsing import (
    dump_json,
    load_convex_set,
    load_extension_instance,
    load_measure,
    load_point,
    parse_params,
    parse_space,
    write_output,
)
from src.extension.lipschitz import LipschitzExtender
from src.geometry.model_space import CurvatureClass, effective_constants
from src.geometry.spaces import distance
from src.sweep.report import format_summary_table, write_reports
from src.sweep.runner import SweepManifest, SweepRunner, load_manifests
from src.transport.wasserstein import wasserstein

logger = structlog.get_logger(__name__)


def _check_tol(config, check_name, override):
    if override is not None:
        return override
    section = ((config or {}).get('checks') or {}).get(check_name) or {}
    return section.get('tol')


def _report_failures(summaries):
    failed = [fp for summary in summaries for fp in (r.fingerprint for r in summary.failures)]
    for fingerprint in failed:
        sys.stderr.write(f"FAILED {fingerprint}\n")
    return 1 if failed else 0


def cmd_constants(args, config):
    """Print k, Gamma, N and C_epsilon of a curvature class."""
    cc = CurvatureClass(args.kappa, args.epsilon)
    data = effective_constants(cc).to_dict()
    data.update(cc.to_dict())
    data['safe_diameter'] = cc.safe_diameter.to_json()
    write_output(dump_json(data), args.out)
    return 0


def cmd_barycenter(args, config):
    """Barycenter of a measure file."""
    mu = load_measure(args.mu)
    result = BarycenterSolver.from_config(config).solve(mu, args.epsilon)
    write_output(dump_json(result.to_dict()), args.out)
    return 0


def cmd_wasserstein(args, config):
    """Exact W_p between two measure files with the optimal plan and its duals."""
    section = ((config or {}).get('solver') or {}).get('transport') or {}
    mu = load_measure(args.mu)
    nu = load_measure(args.nu)
    cost, coupling = wasserstein(
        args.p, mu, nu,
        tol=float(section.get('certificate_tol', 1e-9)),
        max_iterations=int(section.get('max_iterations', 100000)),
    )
    data = {'p': args.p, 'cost': cost}
    data.update(coupling.to_dict())
    write_output(dump_json(data), args.out)
    return 0


def cmd_project(args, config):
    """Orthogonal projection of a point onto a convex set file."""
    convex_set = load_convex_set(args.set)
    x = load_point(args.point, convex_set.space)
    projection = orthogonal_project(convex_set, x)
    write_output(dump_json({'point': projection.to_list(), 'distance': distance(x, projection)}), args.out)
    return 0


def cmd_verify(args, config):
    """Run one seeded sweep of a registered check."""
    register_checks(config)
    params = parse_params(args.param)
    if args.z_at_center:
        params['z_at_center'] = True
    manifest = SweepManifest(
        check=args.check,
        space=parse_space(args.space, args.kappa),
        kappa=args.kappa,
        epsilon=args.epsilon,
        trials=args.trials,
        seed=args.seed,
        radius=args.radius,
        tol=_check_tol(config, args.check, args.tol),
        params=params,
    )
    runner = SweepRunner.from_config(manifest, config)
    if args.workers is not None:
        runner.max_workers = args.workers
    summary = runner.run()
    if args.out is not None:
        write_reports(summary.reports, args.out, args.format)
    sys.stdout.write(format_summary_table([summary]))
    return _report_failures([summary])


def cmd_sweep(args, config):
    """Run every sweep of a manifest file."""
    register_checks(config)
    summaries = []
    for number, manifest in enumerate(load_manifests(args.manifest, config)):
        runner = SweepRunner.from_config(manifest, config)
        if args.workers is not None:
            runner.max_workers = args.workers
        summary = runner.run()
        if args.out_dir is not None:
            path = os.path.join(args.out_dir, f"{number:03d}-{manifest.check}.{args.format}")
            write_reports(summary.reports, path, args.format)
        summaries.append(summary)
    sys.stdout.write(format_summary_table(summaries))
    return _report_failures(summaries)


def cmd_extend(args, config):
    """Extend an instance file and certify it against C_epsilon."""
    instance = load_extension_instance(args.instance)
    cc = CurvatureClass(args.kappa, args.epsilon)
    extender = LipschitzExtender.from_config(config)
    if args.neighbors is not None:
        extender.neighbors = args.neighbors
    if args.weighting is not None:
        extender.weighting = args.weighting
    if args.max_sweeps is not None:
        extender.max_sweeps = args.max_sweeps
    result = extender.extend(instance, cc)
    write_output(dump_json(result.to_dict()), args.out)
    if not result.certified:
        sys.stderr.write(f"UNCERTIFIED ratio={result.ratio!r} c_ext={result.c_ext!r}\n")
        return 1
    return 0
