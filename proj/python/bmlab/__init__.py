"""Python front end for the bmlab C++ core.

Rationals are passed as "p/q" strings; results come back as dicts with
rationals kept as strings.
"""

import json as _json

from . import _bmlab
from ._bmlab import BmlabError, __version__, normalize_rational

__all__ = ["BmlabError", "__version__", "normalize_rational", "report_scene", "example", "explore",
           "constant_audit"]


def report_scene(scene, t="", tau="", threshold="1/100"):
    """Stability report for a scene given as a dict or JSON text."""
    text = scene if isinstance(scene, str) else _json.dumps(scene)
    return _json.loads(_bmlab.report_scene(text, t, tau, threshold))


def example(name, n, param, t="1/4", h="1/64", rel_tol="5/100"):
    """Builds a sharpness example and checks it against its closed forms."""
    return _json.loads(_bmlab.example(name, n, param, t, h, rel_tol))


def explore(m, eta0, budget=256, lns_iterations=200, seed=1):
    """Searches for a small cover of the m-dimensional facet by eta0-translates."""
    return _json.loads(_bmlab.explore(m, eta0, budget, lns_iterations, seed))


def constant_audit(n, t, tau):
    return _json.loads(_bmlab.constant_audit(n, t, tau))
