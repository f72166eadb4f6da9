"""Input validation helpers shared by the estimators, CLI, and core modules."""

from __future__ import annotations

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    LengthMismatchError,
    NonFiniteValueError,
)


def check_finite_array(x, name: str, ndim: int | None = None) -> np.ndarray:
    """Coerce to a float64 array and reject non-finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatchError(
            f"{name} must be {ndim}-dimensional, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError(f"{name} contains NaN or infinite values")
    return arr


def check_covariate_matrix(X, name: str = "X") -> np.ndarray:
    X = check_finite_array(X, name, ndim=2)
    if X.shape[1] < 1:
        raise DimensionMismatchError(f"{name} needs at least one column")
    return X


def check_same_length(name_a: str, a: np.ndarray, name_b: str, b: np.ndarray) -> None:
    if len(a) != len(b):
        raise LengthMismatchError(
            f"{name_a} has length {len(a)} but {name_b} has length {len(b)}"
        )


def unpack_survival_target(y):
    """Extract (time, status) from the forms estimators accept.

    Supported: a (time, status) tuple/list of arrays, an (n, 2) array with
    time in the first column, or a structured array / record with fields
    named 'time' and 'status'.
    """
    if isinstance(y, (tuple, list)) and len(y) == 2:
        return np.asarray(y[0], dtype=float), np.asarray(y[1])
    arr = np.asarray(y)
    if arr.dtype.names is not None:
        if "time" in arr.dtype.names and "status" in arr.dtype.names:
            return np.asarray(arr["time"], dtype=float), np.asarray(arr["status"])
        raise DimensionMismatchError(
            "structured target must have 'time' and 'status' fields, "
            f"got {arr.dtype.names}"
        )
    if arr.ndim == 2 and arr.shape[1] == 2:
        return arr[:, 0].astype(float), arr[:, 1]
    raise DimensionMismatchError(
        "target must be (time, status) arrays, an (n, 2) array, or a "
        "structured array with 'time'/'status' fields"
    )
