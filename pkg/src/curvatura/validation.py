"""Input checks shared by the estimators and the public helpers."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .invariants import LocalQuadraticMap

VALID_WIDTHS = {3: 1, 6: 2, 9: 3}


def check_quadratic_maps(X, codim: int | None = None) -> np.ndarray:
    """Validate a batch of flattened quadratic maps.

    Each row is the concatenation A, B, C of one map, so the width is 3, 6 or
    9 for codimension 1, 2 or 3. Returns a float array of shape (n, 3 * codim).
    """
    X = check_array(X, dtype=np.float64, ensure_all_finite=True)
    width = X.shape[1]
    if width not in VALID_WIDTHS:
        raise ValueError(f"rows must hold A, B, C for codimension 1-3 (3, 6 or 9 columns), got {width}")
    if codim is not None and VALID_WIDTHS[width] != codim:
        raise ValueError(f"expected codimension {codim}, got rows for codimension {VALID_WIDTHS[width]}")
    return X


def as_maps(X) -> list[LocalQuadraticMap]:
    return [LocalQuadraticMap.from_flat(row) for row in check_quadratic_maps(X)]


def check_tolerance(tol: float) -> float:
    tol = float(tol)
    if not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"tol must be a positive finite number, got {tol}")
    return tol
