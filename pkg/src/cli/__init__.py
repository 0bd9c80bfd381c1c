"""
Command Line Package

Argument loaders and subcommand handlers of the ``catlab`` command.
"""

from src.cli.commands import (
    cmd_barycenter,
    cmd_constants,
    cmd_extend,
    cmd_project,
    cmd_sweep,
    cmd_verify,
    cmd_wasserstein,
)

__all__ = [
    'cmd_barycenter',
    'cmd_constants',
    'cmd_extend',
    'cmd_project',
    'cmd_sweep',
    'cmd_verify',
    'cmd_wasserstein',
]
