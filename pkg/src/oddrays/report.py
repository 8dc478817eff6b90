"""Deterministic JSON/text rendering of run reports.

Rationals become ``"a/b"`` strings, complex numbers ``[re, im]`` pairs, and
keys are sorted, so identical runs produce identical bytes.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from fractions import Fraction
from numbers import Integral

import numpy as np

from .poly import Poly


def _float(x: float):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return 0.0 if x == 0 else x      # drop negative zero


def to_tree(obj):
    """Plain JSON-compatible tree."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (Integral, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, Poly):
        return obj.to_string()
    if isinstance(obj, np.ndarray):
        return [to_tree(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_tree(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_tree(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(to_tree(report), sort_keys=True, indent=2) + "\n"


def _text_lines(node, prefix: str, out: list) -> None:
    if isinstance(node, dict):
        for k in sorted(node):
            _text_lines(node[k], f"{prefix}.{k}" if prefix else k, out)
    elif isinstance(node, list) and any(isinstance(v, dict) for v in node):
        for i, v in enumerate(node):
            _text_lines(v, f"{prefix}[{i}]", out)
    else:
        out.append(f"{prefix}: {node}")


def to_text(report: dict) -> str:
    out: list = []
    _text_lines(to_tree(report), "", out)
    return "\n".join(out) + "\n"
