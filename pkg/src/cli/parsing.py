"""
Command Line Parsing Module

Loaders for the JSON instance files read by the subcommands and parsers for
textual space specs and per-check parameters.
"""

import json
import os
import sys

import yaml

from src.barycenter.projection import convex_set_from_dict
from src.extension.lipschitz import ExtensionInstance
from src.geometry.spaces import space_from_spec
from src.transport.measures import DiscreteMeasure


def parse_space(text, kappa=None):
    """Space from a spec such as ``sphere2`` or ``product:sphere2,euclidean1``."""
    return space_from_spec(text, kappa)


def load_json(path):
    """
    Load a JSON document.

    Args:
        path (str): File path

    Returns:
        object: Parsed document
    """
    with open(path, 'r') as f:
        return json.load(f)


def load_measure(path):
    return DiscreteMeasure.from_dict(load_json(path))


def load_convex_set(path):
    return convex_set_from_dict(load_json(path))


def load_extension_instance(path):
    return ExtensionInstance.from_dict(load_json(path))


def load_point(value, space):
    """
    Point given inline as a JSON list or as a path to a JSON file.

    Args:
        value (str): JSON coordinate list or file path
        space (GeodesicSpace): Space of the point

    Returns:
        SpacePoint: Validated point
    """
    coords = load_json(value) if os.path.exists(value) else json.loads(value)
    return space.point(coords)


def parse_params(items):
    """
    Parse ``key=value`` items; values are read as YAML scalars.

    Args:
        items (list): Strings of the form key=value

    Returns:
        dict: Parameters with typed values
    """
    params = {}
    for item in items or ():
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise ValueError(f"expected key=value, got {item!r}")
        params[key.strip()] = yaml.safe_load(value)
    return params


def write_output(text, path=None):
    """Write command output to a file, or to standard output without a path."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as f:
        f.write(text)


def dump_json(data):
    return json.dumps(data, indent=2, sort_keys=True) + '\n'
