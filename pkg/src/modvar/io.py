"""JSON/CSV serialization helpers shared by the command line front end."""
from __future__ import annotations

import json
import math
import sys

import numpy as np

from .errors import DomainError
from .functions import family_from_dict


def _float(x):
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj, indent=2, _level=0):
    """Deterministic JSON text with floats written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        obj = list(obj)
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    return json.dumps(obj)


def load_json(path, _cache={}):
    """Read a JSON document from ``path`` (``-`` for stdin).

    Malformed input raises :class:`DomainError` with line/column position.
    """
    if path == "-":
        if "-" not in _cache:
            _cache["-"] = sys.stdin.read()
        text, name = _cache["-"], "<stdin>"
    else:
        with open(path, encoding="utf-8") as fh:
            text, name = fh.read(), path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{name}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def load_function(path, name=None):
    """One function of a function-family file: ``name`` or the first one listed."""
    space, grid, funcs = family_from_dict(load_json(path))
    if not funcs:
        raise DomainError(f"{path}: no functions in family")
    if name is None:
        return next(iter(funcs.values()))
    try:
        return funcs[name]
    except KeyError:
        raise DomainError(f"{path}: no function named {name!r}") from None
