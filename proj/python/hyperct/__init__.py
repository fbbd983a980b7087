"""Python access to the hyperct verifier.

Reports are plain dicts with the same fields as the command-line JSON output.
"""

import json

from ._hyperct import HyperctError, format_complex, gamma, parse_complex, sweep_json, verify_json

__all__ = ["HyperctError", "format_complex", "gamma", "parse_complex", "sweep", "verify"]


def verify(point=None, **fields):
    """Runs one verification. Fields use the sweep-config keys, e.g. identity="qct"."""
    merged = dict(point or {}, **fields)
    return json.loads(verify_json(json.dumps(merged)))


def sweep(config):
    """Runs a sweep config ({"defaults": ..., "points": [...]}) and returns the reports in order."""
    return json.loads(sweep_json(json.dumps(config)))
