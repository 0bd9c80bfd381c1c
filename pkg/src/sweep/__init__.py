"""
Sweep Package

Seeded verification sweeps and their report writers.
"""

from src.sweep.report import format_summary_table, render_reports, write_reports
from src.sweep.runner import SweepManifest, SweepRunner, SweepSummary, load_manifests

__all__ = [
    'SweepManifest',
    'SweepRunner',
    'SweepSummary',
    'load_manifests',
    'format_summary_table',
    'render_reports',
    'write_reports',
]
