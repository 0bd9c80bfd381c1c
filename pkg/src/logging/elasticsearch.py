"""
Elasticsearch Report Shipping Module

This module ships CheckReports of verification sweeps to Elasticsearch so that
long sweeps can be browsed in Kibana. Shipping is optional and never changes
the artifacts or the exit code of a command.
"""

import datetime
import queue
import threading
import time

import structlog
from elasticsearch import Elasticsearch
from elasticsearch.helpers import bulk

# Global Elasticsearch client
es_client = None

# Reports waiting to be indexed
report_queue = queue.Queue()

_pending = []
_pending_lock = threading.Lock()
_index_prefix = 'catlab-reports'

logger = structlog.get_logger(__name__)


def setup_elasticsearch_logging(config):
    """
    Set up report shipping.

    Args:
        config (dict): Elasticsearch configuration
    """
    global es_client, _index_prefix

    try:
        hosts = config.get('hosts', ['http://localhost:9200'])
        es_client = Elasticsearch(hosts)

        if not es_client.ping():
            logger.warning("elasticsearch_unreachable", hosts=hosts)
            es_client = None
            return

        batch_size = config.get('batch_size', 100)
        flush_interval = config.get('flush_interval', 5)
        _index_prefix = config.get('index_prefix', 'catlab-reports')

        batch_thread = threading.Thread(
            target=_batch_processor,
            args=(batch_size, flush_interval),
            daemon=True
        )
        batch_thread.start()

        logger.info("elasticsearch_shipping_enabled", batch_size=batch_size, flush_interval=flush_interval)

    except Exception as e:
        logger.error("elasticsearch_setup_failed", error=str(e))
        es_client = None


def log_report_to_elasticsearch(report):
    """
    Queue a report for indexing.

    Args:
        report (CheckReport): Report to ship
    """
    if es_client is None:
        return
    report_queue.put(report)


def flush_reports():
    """Index every queued report now."""
    if es_client is None:
        return
    with _pending_lock:
        _drain_queue()
        batch = list(_pending)
        _pending.clear()
    _flush_batch(batch)


def _drain_queue():
    while True:
        try:
            report = report_queue.get_nowait()
        except queue.Empty:
            return
        _pending.append(_report_to_document(report, _index_prefix))
        report_queue.task_done()


def _batch_processor(batch_size, flush_interval):
    """
    Background thread indexing reports in batches.

    Args:
        batch_size (int): Maximum number of reports per batch
        flush_interval (int): Maximum time to wait before flushing in seconds
    """
    last_flush = time.time()

    while True:
        try:
            try:
                report = report_queue.get(timeout=0.1)
                with _pending_lock:
                    _pending.append(_report_to_document(report, _index_prefix))
                report_queue.task_done()
            except queue.Empty:
                pass

            with _pending_lock:
                due = len(_pending) >= batch_size or (time.time() - last_flush > flush_interval and _pending)
                batch = list(_pending) if due else []
                if due:
                    _pending.clear()
            if batch:
                _flush_batch(batch)
                last_flush = time.time()

        except Exception as e:
            logger.error("elasticsearch_batch_error", error=str(e))
            time.sleep(1)


def _report_to_document(report, index_prefix, timestamp=None):
    """
    Convert a report to an Elasticsearch bulk action.

    Args:
        report (CheckReport): Report to convert
        index_prefix (str): Prefix for Elasticsearch indices
        timestamp (datetime.datetime): Indexing time, defaults to now

    Returns:
        dict: Elasticsearch action
    """
    timestamp = timestamp or datetime.datetime.now()
    date_str = timestamp.strftime('%Y.%m.%d')

    source = report.to_dict()
    source['@timestamp'] = timestamp.isoformat()

    return {
        '_index': f"{index_prefix}-{report.name}-{date_str}",
        '_source': source
    }


def _flush_batch(batch):
    """
    Write a batch of actions with the bulk API.

    Args:
        batch (list): List of Elasticsearch actions
    """
    if not batch or es_client is None:
        return

    try:
        success, errors = bulk(es_client, batch, refresh=True, stats_only=True)
        logger.debug("elasticsearch_batch_written", documents=success, errors=errors)

    except Exception as e:
        logger.error("elasticsearch_flush_failed", error=str(e))
