"""
Result records and their JSON rendering.

Floats are written with 17 significant digits, which round-trips every
double exactly; key order is insertion order, so identical inputs give
byte-identical output.
"""

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np


def format_float(value: float) -> str:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"Cannot serialize non-finite value {value!r}")
    if value == 0.0:
        return '-0.0' if np.signbit(value) else '0.0'
    return format(value, '.17g')


def _make_serializable(value):
    """Convert numpy arrays, numpy scalars, enums and nested structures into JSON-safe types."""
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return _make_serializable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, dict):
        return {str(k): _make_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_make_serializable(v) for v in value]
    return value


def dumps(value, indent: int = 2, _level: int = 0) -> str:
    """json.dumps with 17-significant-digit floats."""
    value = _make_serializable(value)
    pad = ' ' * (indent * (_level + 1))
    closing = ' ' * (indent * _level)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, dict):
        if not value:
            return '{}'
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in value.items()]
        return '{\n' + ',\n'.join(items) + '\n' + closing + '}'
    if isinstance(value, list):
        if not value:
            return '[]'
        if all(not isinstance(v, (dict, list)) for v in value):
            return '[' + ', '.join(dumps(v, indent, _level + 1) for v in value) + ']'
        items = [pad + dumps(v, indent, _level + 1) for v in value]
        return '[\n' + ',\n'.join(items) + '\n' + closing + ']'
    return json.dumps(value)


@dataclass
class ResultRecord:
    """What a command reports: its inputs, settings used, numbers and verdict."""

    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    group: Optional[str] = None
    scheme: Optional[str] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        record = {'command': self.command, 'inputs': self.inputs}
        if self.group is not None:
            record['group'] = self.group
        if self.scheme is not None:
            record['scheme'] = self.scheme
        if self.tolerances:
            record['tolerances'] = self.tolerances
        record['results'] = self.results
        if self.verdict is not None:
            record['verdict'] = self.verdict
        return _make_serializable(record)

    def render(self) -> str:
        return dumps(self.to_dict()) + '\n'
