"""
Sweep Report Module

Writers for CheckReports as JSON lines or CSV and the plain-text summary
table printed after a sweep.
"""

import csv
import io
import json
import os

from src.diagnostics import CSV_COLUMNS

FORMATS = ('json', 'csv')


def render_reports(reports, fmt='csv'):
    """
    Serialize reports.

    Args:
        reports (list): CheckReports in output order
        fmt (str): 'json' for JSON lines, 'csv' for CSV with a header row

    Returns:
        str: Serialized reports
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}, expected one of {FORMATS}")
    if fmt == 'json':
        return ''.join(json.dumps(report.to_dict(), sort_keys=True) + '\n' for report in reports)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow(report.csv_row())
    return buffer.getvalue()


def write_reports(reports, path, fmt='csv'):
    """
    Write reports to a file, creating its directory.

    Args:
        reports (list): CheckReports in output order
        path (str): Output path
        fmt (str): 'json' or 'csv'
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as f:
        f.write(render_reports(reports, fmt))


def format_summary_table(summaries):
    """
    Summary table with one row per sweep.

    Args:
        summaries (list): SweepSummary objects

    Returns:
        str: Table with check, trials, failures, minimal slack and maximal extras
    """
    header = ('check', 'trials', 'failures', 'min_slack', 'extras_max')
    rows = [header]
    for summary in summaries:
        extras = ' '.join(f"{key}={value:.6g}" for key, value in sorted(summary.extras_max.items()))
        rows.append((
            summary.check,
            str(summary.trials),
            str(len(summary.failures)),
            f"{summary.min_slack:.6g}",
            extras or '-',
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ['  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    return '\n'.join(lines) + '\n'
