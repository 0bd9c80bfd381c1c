"""
Unit tests for Elasticsearch report shipping.
"""

import datetime
import os
import sys
import unittest
from unittest.mock import MagicMock, patch

# Add the parent directory to sys.path to allow for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import src.logging.elasticsearch as es_logging
from src.diagnostics import CheckReport


class TestElasticsearchShipping(unittest.TestCase):
    """Test cases for report shipping."""

    def setUp(self):
        """Set up test fixtures."""
        self.report = CheckReport.from_sides('variance', 0.5, 1.0, 1e-8, 'variance|euclidean2|trial=00000001')

    def tearDown(self):
        """Tear down test fixtures."""
        es_logging.es_client = None
        es_logging._index_prefix = 'catlab-reports'
        es_logging._pending.clear()
        while not es_logging.report_queue.empty():
            es_logging.report_queue.get_nowait()

    @patch('src.logging.elasticsearch.Elasticsearch')
    def test_unreachable_cluster(self, mock_es):
        """Test that an unreachable cluster disables shipping."""
        mock_es.return_value.ping.return_value = False
        es_logging.setup_elasticsearch_logging({'hosts': ['http://es:9200']})
        mock_es.assert_called_once_with(['http://es:9200'])
        self.assertIsNone(es_logging.es_client)
        es_logging.log_report_to_elasticsearch(self.report)
        self.assertTrue(es_logging.report_queue.empty())

    @patch('src.logging.elasticsearch.threading.Thread')
    @patch('src.logging.elasticsearch.Elasticsearch')
    def test_setup(self, mock_es, mock_thread):
        """Test that a reachable cluster starts the batch thread."""
        mock_es.return_value.ping.return_value = True
        es_logging.setup_elasticsearch_logging({'index_prefix': 'lab', 'batch_size': 10, 'flush_interval': 2})
        self.assertIs(es_logging.es_client, mock_es.return_value)
        self.assertEqual(es_logging._index_prefix, 'lab')
        mock_thread.assert_called_once()
        self.assertEqual(mock_thread.call_args.kwargs['args'], (10, 2))
        mock_thread.return_value.start.assert_called_once()

    @patch('src.logging.elasticsearch.Elasticsearch')
    def test_setup_failure(self, mock_es):
        """Test that a client error disables shipping."""
        mock_es.side_effect = ValueError('bad hosts')
        es_logging.setup_elasticsearch_logging({'hosts': 'nowhere'})
        self.assertIsNone(es_logging.es_client)

    def test_report_to_document(self):
        """Test the daily index name and the document body."""
        timestamp = datetime.datetime(2024, 3, 9, 12, 30)
        action = es_logging._report_to_document(self.report, 'catlab-reports', timestamp)
        self.assertEqual(action['_index'], 'catlab-reports-variance-2024.03.09')
        self.assertEqual(action['_source']['fingerprint'], self.report.fingerprint)
        self.assertEqual(action['_source']['@timestamp'], '2024-03-09T12:30:00')

    @patch('src.logging.elasticsearch.bulk')
    def test_flush_reports(self, mock_bulk):
        """Test that queued reports are indexed in one bulk call."""
        mock_bulk.return_value = (2, 0)
        es_logging.es_client = MagicMock()
        es_logging.log_report_to_elasticsearch(self.report)
        es_logging.log_report_to_elasticsearch(self.report)
        es_logging.flush_reports()
        mock_bulk.assert_called_once()
        args, kwargs = mock_bulk.call_args
        self.assertIs(args[0], es_logging.es_client)
        self.assertEqual(len(args[1]), 2)
        self.assertTrue(kwargs['refresh'])
        self.assertEqual(es_logging._pending, [])

    @patch('src.logging.elasticsearch.bulk')
    def test_flush_errors_are_logged(self, mock_bulk):
        """Test that bulk errors do not propagate."""
        mock_bulk.side_effect = ConnectionError('refused')
        es_logging.es_client = MagicMock()
        es_logging.log_report_to_elasticsearch(self.report)
        es_logging.flush_reports()
        mock_bulk.assert_called_once()

    @patch('src.logging.elasticsearch.bulk')
    def test_disabled_flush(self, mock_bulk):
        """Test that nothing is indexed without a client."""
        es_logging.flush_reports()
        mock_bulk.assert_not_called()


if __name__ == '__main__':
    unittest.main()
