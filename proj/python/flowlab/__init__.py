"""Python bindings for the flowlab library."""

import json as _json

from ._flowlab import *  # noqa: F401,F403
from ._flowlab import _run_suite_json

__version__ = "0.1.0"


def run_suite(name, seed=42, samples=1_000_000, depth=DEFAULT_DEPTH):  # noqa: F405
    """Run a verification suite and return its report as a dict."""
    return _json.loads(_run_suite_json(name, seed, samples, depth))
