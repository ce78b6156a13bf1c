"""Readers and writers for state files and numeric output.

State files are JSON objects ``{"dim": d, "entries": [[re, im], ...]}``
with ``d*d`` entries in row-major order.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class StateFileError(ValueError):
    """A state file could not be parsed."""


def fmt(x) -> str:
    """Fixed float formatting for all emitted numbers: 12 significant digits.

    Negative zero is printed as ``0``.
    """
    return f"{float(x) + 0.0:.12g}"


def state_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def state_from_json(obj) -> np.ndarray:
    try:
        dim = obj["dim"]
        entries = obj["entries"]
    except (TypeError, KeyError) as exc:
        raise StateFileError(f"state object needs 'dim' and 'entries' ({exc})") from None
    if not isinstance(dim, int) or dim < 1:
        raise StateFileError(f"'dim' must be a positive integer, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise StateFileError(f"expected {dim * dim} entries for dim {dim}")
    vals = []
    for e in entries:
        if (not isinstance(e, (list, tuple)) or len(e) != 2
                or not all(isinstance(v, (int, float)) for v in e)):
            raise StateFileError(f"entry {e!r} is not a [re, im] pair")
        vals.append(complex(e[0], e[1]))
    return np.array(vals, dtype=complex).reshape(dim, dim)


def load_state(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"cannot read state file {path}: {exc}") from None
    return state_from_json(obj)


def save_state(path, m) -> None:
    Path(path).write_text(json.dumps(state_to_json(m), indent=1) + "\n")
