"""
Unit tests for seeded sweeps and their reports.
"""

import json
import os
import sys
import tempfile
import unittest
from unittest.mock import MagicMock, patch

import yaml

# Add the parent directory to sys.path to allow for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.checks import register_checks
from src.diagnostics import CSV_COLUMNS
from src.errors import SweepError
from src.geometry.spaces import SphereSpace
from src.sweep.report import format_summary_table, render_reports, write_reports
from src.sweep.runner import SweepManifest, SweepRunner, load_manifests


class TestSweepManifest(unittest.TestCase):
    """Test cases for sweep manifests."""

    def setUp(self):
        """Set up test fixtures."""
        register_checks()

    def test_unknown_check(self):
        """Test rejection of unregistered checks."""
        with self.assertRaises(ValueError):
            SweepManifest('curvature', SphereSpace(2), 1.0, 0.5, 10, 1)

    def test_negative_counts(self):
        """Test rejection of negative trial counts and seeds."""
        with self.assertRaises(ValueError):
            SweepManifest('convexity', SphereSpace(2), 1.0, 0.5, -1, 1)
        with self.assertRaises(ValueError):
            SweepManifest('convexity', SphereSpace(2), 1.0, 0.5, 1, -1)

    def test_from_dict(self):
        """Test defaults and textual space specs."""
        manifest = SweepManifest.from_dict({'check': 'variance', 'space': 'sphere3', 'seed': 4}, {'trials': 12})
        self.assertEqual(manifest.trials, 12)
        self.assertEqual(manifest.space, SphereSpace(3, 1.0))
        self.assertEqual(manifest.epsilon, 0.5)
        with self.assertRaises(ValueError):
            SweepManifest.from_dict({'check': 'variance'})

    def test_load_manifests(self):
        """Test loading a YAML manifest with defaults and configured tolerances."""
        document = {
            'defaults': {'seed': 3, 'trials': 5},
            'sweeps': [
                {'check': 'convexity', 'space': 'hyperbolic2', 'kappa': -1.0},
                {'check': 'lipschitz', 'space': 'sphere2', 'tol': 1e-6},
            ],
        }
        config = {'checks': {'convexity': {'tol': 1e-11}}}
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'sweeps.yaml')
            with open(path, 'w') as f:
                yaml.safe_dump(document, f)
            manifests = load_manifests(path, config)
        self.assertEqual([m.check for m in manifests], ['convexity', 'lipschitz'])
        self.assertEqual(manifests[0].tol, 1e-11)
        self.assertEqual(manifests[1].tol, 1e-6)
        self.assertEqual(manifests[0].space.kappa, -1.0)

    def test_empty_manifest(self):
        """Test that a manifest must list sweeps."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'empty.yaml')
            with open(path, 'w') as f:
                f.write('sweeps: []\n')
            with self.assertRaises(ValueError):
                load_manifests(path)


class TestSweepRunner(unittest.TestCase):
    """Test cases for the sweep runner."""

    def setUp(self):
        """Set up test fixtures."""
        register_checks()
        self.manifest = SweepManifest('lipschitz', SphereSpace(2), 1.0, 0.5, 12, 21)

    def test_reports_in_trial_order(self):
        """Test that reports come back sorted by trial index."""
        summary = SweepRunner(self.manifest, max_workers=4).run()
        self.assertEqual(summary.trials, 12)
        self.assertEqual(
            [r.fingerprint[-8:] for r in summary.reports], [f"{i:08d}" for i in range(12)]
        )
        self.assertTrue(summary.passed)
        self.assertIn('ratio_w2', summary.extras_max)

    def test_reproducible_across_pool_sizes(self):
        """Test that the CSV artifact does not depend on the number of workers."""
        first = render_reports(SweepRunner(self.manifest, max_workers=1).run().reports, 'csv')
        second = render_reports(SweepRunner(self.manifest, max_workers=6).run().reports, 'csv')
        self.assertEqual(first, second)

    def test_trial_range(self):
        """Test that the start index shifts the trial range."""
        manifest = SweepManifest('convexity', SphereSpace(2), 1.0, 0.5, 3, 21, start=10)
        summary = SweepRunner(manifest).run()
        self.assertTrue(summary.reports[0].fingerprint.endswith('trial=00000010'))

    def test_raising_trial(self):
        """Test that a raising trial aborts the sweep with its fingerprint."""
        runner = SweepRunner(self.manifest, max_workers=2)
        runner.check = MagicMock()
        runner.check.run_trial.side_effect = RuntimeError('boom')
        runner.check.fingerprint.return_value = 'lipschitz|trial=00000000'
        with self.assertRaises(SweepError) as context:
            runner.run()
        self.assertEqual(context.exception.fingerprint, 'lipschitz|trial=00000000')

    @patch('src.sweep.runner.flush_reports')
    @patch('src.sweep.runner.log_report_to_elasticsearch')
    def test_reports_are_shipped(self, mock_log, mock_flush):
        """Test that every report is handed to the Elasticsearch shipper."""
        SweepRunner(self.manifest, max_workers=2).run()
        self.assertEqual(mock_log.call_count, 12)
        mock_flush.assert_called_once()

    def test_from_config(self):
        """Test the pool size from the configuration."""
        runner = SweepRunner.from_config(self.manifest, {'sweep': {'max_workers': 2}})
        self.assertEqual(runner.max_workers, 2)
        with self.assertRaises(ValueError):
            SweepRunner(self.manifest, max_workers=0)


class TestReports(unittest.TestCase):
    """Test cases for report writers."""

    def setUp(self):
        """Set up test fixtures."""
        register_checks()
        manifest = SweepManifest('variance', SphereSpace(2), 1.0, 0.5, 4, 8)
        self.summary = SweepRunner(manifest).run()

    def test_csv(self):
        """Test the CSV header and one row per report."""
        lines = render_reports(self.summary.reports, 'csv').splitlines()
        self.assertEqual(lines[0], ','.join(CSV_COLUMNS))
        self.assertEqual(len(lines), 5)

    def test_json_lines(self):
        """Test JSON lines output."""
        lines = render_reports(self.summary.reports, 'json').splitlines()
        self.assertEqual(len(lines), 4)
        self.assertEqual(json.loads(lines[0])['name'], 'variance')

    def test_unknown_format(self):
        """Test rejection of unknown formats."""
        with self.assertRaises(ValueError):
            render_reports(self.summary.reports, 'xml')

    def test_write_reports(self):
        """Test writing into a directory that does not exist yet."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'nested', 'variance.csv')
            write_reports(self.summary.reports, path)
            with open(path) as f:
                self.assertEqual(f.read(), render_reports(self.summary.reports, 'csv'))

    def test_summary_table(self):
        """Test the summary table."""
        table = format_summary_table([self.summary])
        self.assertTrue(table.startswith('check'))
        self.assertIn('variance', table.splitlines()[1])


if __name__ == '__main__':
    unittest.main()
