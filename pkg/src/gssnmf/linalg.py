"""Dense matrix kernels shared by every other module.

Matrices are plain 2-D float64 numpy arrays in C (row-major) order; at the
corpus sizes this package targets (hundreds by hundreds) dense storage is
all that is needed. Non-negativity of factor matrices is maintained by the
callers' update rules, so the helpers here only enforce shape agreement
and finiteness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Floor added to denominators before division, configurable per call.
DEFAULT_EPS = 1e-12

# Matrices are bare arrays; the alias documents intent in signatures.
Matrix = np.ndarray


def as_matrix(data) -> Matrix:
    """Coerce ``data`` to a finite 2-D float64 row-major array."""
    a = np.ascontiguousarray(data, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got {a.ndim}-D data")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def _shape_str(a: Matrix) -> str:
    return f"{a.shape[0]}x{a.shape[1]}"


def _check_same_shape(op: str, a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{op}: shapes differ, {_shape_str(a)} vs {_shape_str(b)}")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product ``a @ b`` with an explicit conformability check."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"matmul: inner dimensions differ, {_shape_str(a)} times {_shape_str(b)}"
        )
    return a @ b


def hadamard(a: Matrix, b: Matrix) -> Matrix:
    """Entry-wise product of two equally shaped matrices."""
    _check_same_shape("hadamard", a, b)
    return a * b


def safe_divide(numer: Matrix, denom: Matrix, eps: float = DEFAULT_EPS) -> Matrix:
    """Entry-wise ``numer / (denom + eps)``.

    Finite for any finite non-negative inputs; a zero numerator over a zero
    denominator yields zero.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_same_shape("safe_divide", numer, denom)
    return numer / (denom + eps)


def frobenius_sq(a: Matrix) -> float:
    """Sum of squared entries."""
    return float(np.sum(np.square(a)))


@dataclass
class SvdSpectrum:
    """Leading singular values of a matrix, sorted descending."""

    singular_values: list[float]
    count_requested: int


def singular_values(a: Matrix, top: int) -> SvdSpectrum:
    """Largest ``top`` singular values of ``a`` in descending order.

    Computed from the symmetric eigendecomposition of the smaller Gram
    matrix (A A^T or A^T A); singular vectors are never formed. Tiny
    negative eigenvalues from rounding are clipped to zero.
    """
    rows, cols = a.shape
    limit = min(rows, cols)
    if not 1 <= top <= limit:
        raise ValueError(
            f"top={top} out of range for a {rows}x{cols} matrix (must be 1..{limit})"
        )
    gram = a @ a.T if rows <= cols else a.T @ a
    eigvals = np.linalg.eigvalsh(gram)  # ascending
    sigma = np.sqrt(np.clip(eigvals[::-1], 0.0, None))
    return SvdSpectrum(
        singular_values=[float(s) for s in sigma[:top]],
        count_requested=top,
    )


# ---------------------------------------------------------------------------
# Serialization: dense CSV (one row per line) and JSON {rows, cols, data}.
# Values are written with 17 significant digits so round trips are
# value-exact for float64.
# ---------------------------------------------------------------------------

def format_float(v: float) -> str:
    """17-significant-digit decimal form, enough to round-trip float64."""
    return format(float(v), ".17g")


def save_matrix_csv(a: Matrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in a:
            fh.write(",".join(format_float(v) for v in row))
            fh.write("\n")


def load_matrix_csv(path) -> Matrix:
    rows: list[list[float]] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ValueError(
                    f"{path}:{lineno}: expected {width} fields, found {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad number: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no matrix rows found")
    return as_matrix(rows)


def matrix_to_json(a: Matrix) -> dict:
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [float(v) for v in a.ravel()],
    }


def matrix_from_json(obj: dict) -> Matrix:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if len(data) != rows * cols:
        raise ValueError(
            f"matrix object claims {rows}x{cols} but carries {len(data)} values"
        )
    return as_matrix(np.asarray(data, dtype=np.float64).reshape(rows, cols))


def save_matrix_json(a: Matrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(a), fh)
        fh.write("\n")


def load_matrix_json(path) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    return matrix_from_json(obj)
