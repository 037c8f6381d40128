# linalg/matrix_io.py
"""JSON and command-line encodings of matrices and states.

Matrices travel as ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in
row-major order; states as ``"re,im;re,im;..."`` in basis order.
"""
import json
from typing import Any, Dict, List

import numpy as np

from errors import MatrixFormatError


def matrix_to_json(m: np.ndarray) -> Dict[str, Any]:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_json(obj: Dict[str, Any]) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as e:
        raise MatrixFormatError(f"matrix object needs rows, cols and data: {e}") from None
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise MatrixFormatError(f"expected {rows}x{cols}={rows * cols} entries, got {len(data)}")
    try:
        flat = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"matrix entries must be [re, im] pairs: {e}") from None
    return np.array(flat, dtype=complex).reshape(rows, cols)


def kraus_from_json(text: str) -> List[np.ndarray]:
    """A JSON list of matrix objects."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"invalid JSON: {e}") from None
    if not isinstance(payload, list) or not payload:
        raise MatrixFormatError("expected a non-empty JSON list of matrices")
    return [matrix_from_json(item) for item in payload]


def complex_list_from_literal(text: str) -> List[complex]:
    values = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        try:
            if len(parts) == 1:
                values.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                values.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError(chunk)
        except ValueError:
            raise MatrixFormatError(f"cannot read {chunk!r} as 're,im'") from None
    return values


def state_from_literal(text: str, dim: int) -> np.ndarray:
    amps = complex_list_from_literal(text)
    if len(amps) != dim:
        raise MatrixFormatError(f"state has {len(amps)} amplitudes, environment needs {dim}")
    return np.array(amps, dtype=complex)


def state_to_literal(psi: np.ndarray, digits: int = 12) -> str:
    return ";".join(f"{round(z.real, digits):g},{round(z.imag, digits):g}" for z in np.asarray(psi).reshape(-1))
