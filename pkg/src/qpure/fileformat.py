"""JSON interchange files for states, vectors and channels.

Layout::

    {"kind": "state",   "dims": [d, d],            "data": [[[re, im], ...], ...]}
    {"kind": "vector",  "dims": [d],               "data": [[re, im], ...]}
    {"kind": "channel", "dims": [d_out, d_in],     "data": [<matrix>, ...],
     "trace_preserving": true}

Matrices are lists of rows (row-major).  Floats are written with 17
significant digits, so write -> read -> write is byte-identical.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .errors import QpureError
from .states import DensityOperator, check_normalized


class MalformedFile(QpureError):
    """The file cannot be parsed into a valid object."""


def _num(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def _complex(z) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def _vector(v) -> str:
    return "[" + ", ".join(_complex(z) for z in v) + "]"


def _matrix(m, indent: str) -> str:
    rows = [indent + "  " + _vector(row) for row in m]
    return "[\n" + ",\n".join(rows) + "\n" + indent + "]"


def dumps(obj) -> str:
    """Serialize a DensityOperator, a 1-d vector or a KrausChannel."""
    if isinstance(obj, KrausChannel):
        mats = ",\n".join("    " + _matrix(k, "    ") for k in obj.kraus)
        return (
            '{\n  "kind": "channel",\n'
            f'  "dims": [{obj.dim_out}, {obj.dim_in}],\n'
            f'  "trace_preserving": {json.dumps(obj.trace_preserving)},\n'
            f'  "data": [\n{mats}\n  ]\n}}\n'
        )
    if isinstance(obj, DensityOperator):
        m = obj.matrix
        return f'{{\n  "kind": "state",\n  "dims": [{m.shape[0]}, {m.shape[1]}],\n  "data": {_matrix(m, "  ")}\n}}\n'
    arr = np.asarray(obj, dtype=complex)
    if arr.ndim == 1:
        return f'{{\n  "kind": "vector",\n  "dims": [{arr.shape[0]}],\n  "data": {_vector(arr)}\n}}\n'
    if arr.ndim == 2:
        return f'{{\n  "kind": "state",\n  "dims": [{arr.shape[0]}, {arr.shape[1]}],\n  "data": {_matrix(arr, "  ")}\n}}\n'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _to_complex_array(data, shape) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedFile(f"bad numeric data: {exc}") from exc
    if arr.shape != tuple(shape) + (2,):
        raise MalformedFile(f"data has shape {arr.shape[:-1]}, dims say {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise MalformedFile("non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def loads(text: str):
    """Parse a file's text into a DensityOperator, vector or KrausChannel."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc or "data" not in doc or "dims" not in doc:
        raise MalformedFile("expected an object with kind, dims and data")
    kind, dims = doc["kind"], doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(x, int) and x > 0 for x in dims):
        raise MalformedFile(f"bad dims {dims!r}")
    try:
        if kind == "state":
            if len(dims) != 2:
                raise MalformedFile("state dims must have two entries")
            return DensityOperator(_to_complex_array(doc["data"], dims))
        if kind == "vector":
            if len(dims) != 1:
                raise MalformedFile("vector dims must have one entry")
            return check_normalized(_to_complex_array(doc["data"], dims))
        if kind == "channel":
            if len(dims) != 2 or not isinstance(doc["data"], list) or not doc["data"]:
                raise MalformedFile("channel needs dims [d_out, d_in] and a non-empty Kraus list")
            ops = [_to_complex_array(k, dims) for k in doc["data"]]
            tp = doc.get("trace_preserving", True)
            if not isinstance(tp, bool):
                raise MalformedFile("trace_preserving must be a boolean")
            return KrausChannel(dims[1], dims[0], tuple(ops), tp)
    except MalformedFile:
        raise
    except QpureError as exc:
        raise MalformedFile(str(exc)) from exc
    raise MalformedFile(f"unknown kind {kind!r}")


def read(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_state(path) -> DensityOperator:
    """Load a state file; vector files are read as pure states."""
    obj = read(path)
    if isinstance(obj, DensityOperator):
        return obj
    if isinstance(obj, np.ndarray):
        return DensityOperator.pure(obj)
    raise MalformedFile(f"{path} holds a channel, expected a state")


def read_channel(path) -> KrausChannel:
    obj = read(path)
    if not isinstance(obj, KrausChannel):
        raise MalformedFile(f"{path} does not hold a channel")
    return obj
