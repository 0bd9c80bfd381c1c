"""
Sweep Runner Module

Seeded verification sweeps: a manifest names a registered check, a space and a
curvature class, and the runner evaluates its trials on a thread pool and
aggregates the reports in trial order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import structlog
import yaml

from src.checks.base import CheckRegistry
from src.errors import SweepError
from src.geometry.model_space import CurvatureClass
from src.geometry.spaces import space_from_dict, space_from_spec
from src.logging.elasticsearch import flush_reports, log_report_to_elasticsearch

logger = structlog.get_logger(__name__)

DEFAULT_MAX_WORKERS = 4


@dataclass(frozen=True)
class SweepManifest:
    """One sweep: check name, space, curvature class and the seeded trial range."""

    check: str
    space: object
    kappa: float
    epsilon: float
    trials: int
    seed: int
    start: int = 0
    radius: float = None
    tol: float = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if CheckRegistry.get_check(self.check) is None:
            raise ValueError(f"unknown check {self.check!r}; registered: {', '.join(CheckRegistry.names())}")
        if self.trials < 0:
            raise ValueError(f"trial count must be nonnegative, got {self.trials}")
        if self.start < 0:
            raise ValueError(f"first trial index must be nonnegative, got {self.start}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")

    @classmethod
    def from_dict(cls, data, defaults=None):
        """
        Build a manifest from a mapping.

        Args:
            data (dict): Manifest entry; ``check`` and ``seed`` are mandatory
            defaults (dict): Values used for keys missing from data

        Returns:
            SweepManifest: Validated manifest
        """
        merged = dict(defaults or {})
        merged.update(data or {})
        for key in ('check', 'seed'):
            if merged.get(key) is None:
                raise ValueError(f"sweep manifest is missing {key!r}")
        kappa = float(merged.get('kappa', 1.0))
        space = merged.get('space', 'sphere2')
        space = space_from_dict(space) if isinstance(space, dict) else space_from_spec(str(space), kappa)
        return cls(
            check=str(merged['check']),
            space=space,
            kappa=kappa,
            epsilon=float(merged.get('epsilon', 0.5)),
            trials=int(merged.get('trials', 100)),
            seed=int(merged['seed']),
            start=int(merged.get('start', 0)),
            radius=None if merged.get('radius') is None else float(merged['radius']),
            tol=None if merged.get('tol') is None else float(merged['tol']),
            params=dict(merged.get('params') or {}),
        )

    @property
    def curvature_class(self):
        return CurvatureClass(self.kappa, self.epsilon)

    def build_check(self):
        """Instantiate the registered check for this manifest."""
        check_class = CheckRegistry.get_check(self.check)
        return check_class(self.space, self.curvature_class, self.radius, self.tol, self.params)


def load_manifests(path, config=None):
    """
    Load the ``sweeps`` list of a YAML manifest file.

    Args:
        path (str): Manifest path
        config (dict): Application configuration supplying per-check tolerances

    Returns:
        list: SweepManifest per entry
    """
    with open(path, 'r') as f:
        data = yaml.safe_load(f) or {}
    entries = data.get('sweeps') if isinstance(data, dict) else data
    if not isinstance(entries, list) or not entries:
        raise ValueError(f"{path} does not list any sweeps")
    defaults = data.get('defaults', {}) if isinstance(data, dict) else {}
    manifests = []
    for entry in entries:
        merged = dict(entry)
        if merged.get('tol') is None and config:
            tol = ((config.get('checks') or {}).get(merged.get('check'), {}) or {}).get('tol')
            if tol is not None:
                merged['tol'] = tol
        manifests.append(SweepManifest.from_dict(merged, defaults))
    return manifests


@dataclass
class SweepSummary:
    """Aggregate of a sweep, reports in trial order."""

    check: str
    reports: list
    extras_max: dict = field(default_factory=dict)

    @property
    def trials(self):
        return len(self.reports)

    @property
    def failures(self):
        return [report for report in self.reports if not report.passed]

    @property
    def passed(self):
        return not self.failures

    @property
    def min_slack(self):
        return min((report.slack for report in self.reports), default=math.inf)

    def to_dict(self):
        return {
            'check': self.check,
            'trials': self.trials,
            'failures': len(self.failures),
            'min_slack': self.min_slack,
            'extras_max': dict(self.extras_max),
            'failed_fingerprints': [report.fingerprint for report in self.failures],
        }


class SweepRunner:
    """Run the trials of a manifest on a thread pool."""

    def __init__(self, manifest, max_workers=DEFAULT_MAX_WORKERS):
        """
        Initialize the runner.

        Args:
            manifest (SweepManifest): Sweep to run
            max_workers (int): Thread pool size
        """
        if max_workers < 1:
            raise ValueError(f"max_workers must be positive, got {max_workers}")
        self.manifest = manifest
        self.max_workers = int(max_workers)
        self.check = manifest.build_check()

    @classmethod
    def from_config(cls, manifest, config):
        sweep_config = (config or {}).get('sweep', {}) or {}
        return cls(manifest, int(sweep_config.get('max_workers', DEFAULT_MAX_WORKERS)))

    def _run_trial(self, index):
        try:
            return self.check.run_trial(self.manifest.seed, index)
        except Exception as e:
            fingerprint = self.check.fingerprint(self.manifest.seed, index)
            logger.error("trial_raised", fingerprint=fingerprint, error=str(e))
            raise SweepError(fingerprint, e) from e

    def run(self):
        """
        Evaluate every trial and aggregate.

        Returns:
            SweepSummary: Reports sorted by trial index with the maximal extras

        Raises:
            SweepError: If a trial raises instead of reporting
        """
        manifest = self.manifest
        indices = range(manifest.start, manifest.start + manifest.trials)
        logger.info("sweep_started", check=manifest.check, space=manifest.space.label(),
                    kappa=manifest.kappa, epsilon=manifest.epsilon, trials=manifest.trials,
                    seed=manifest.seed, workers=self.max_workers)
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            reports = list(executor.map(self._run_trial, indices))
        reports.sort(key=lambda report: report.fingerprint)

        extras_max = {}
        for report in reports:
            for key, value in report.extras.items():
                extras_max[key] = max(extras_max.get(key, -math.inf), value)
            log_report_to_elasticsearch(report)
        flush_reports()

        summary = SweepSummary(manifest.check, reports, extras_max)
        log = logger.info if summary.passed else logger.warning
        log("sweep_finished", check=manifest.check, trials=summary.trials,
            failures=len(summary.failures), min_slack=summary.min_slack, **extras_max)
        return summary
