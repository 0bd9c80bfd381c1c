"""
Logging Package

This package contains the optional Elasticsearch shipping of check reports.
"""

from src.logging.elasticsearch import flush_reports, log_report_to_elasticsearch, setup_elasticsearch_logging

__all__ = [
    'setup_elasticsearch_logging',
    'log_report_to_elasticsearch',
    'flush_reports'
]
