"""Ordinary least squares through a rank-revealing orthogonal factorization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-10


@dataclass(frozen=True)
class LinearModel:
    """Fitted coefficient vector with its column schema, no intercept."""

    column_schema: tuple[str, ...]
    coefficients: np.ndarray
    training_rows: int
    residual_rmse: float

    def __post_init__(self) -> None:
        coef = np.asarray(self.coefficients, dtype=float).copy()
        if coef.ndim != 1 or coef.size != len(self.column_schema):
            raise ValueError("coefficients must match the column schema")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)

    def predict(self, rows: np.ndarray) -> np.ndarray | float:
        rows = np.asarray(rows, dtype=float)
        if rows.shape[-1] != self.coefficients.size:
            raise ValueError(
                f"row width {rows.shape[-1]} does not match {self.coefficients.size} columns"
            )
        out = rows @ self.coefficients
        return float(out) if rows.ndim == 1 else out


def fit_ols(
    design: np.ndarray, target: np.ndarray, column_schema: tuple[str, ...] | None = None
) -> LinearModel:
    """Least-squares fit of target on the design columns.

    Uses an SVD-based solver; singular values below RANK_TOL relative to the
    largest are treated as zero, and rank-deficient systems get the
    minimum-norm solution.
    """
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)
    if design.ndim != 2 or design.size == 0:
        raise ValueError("design must be a non-empty 2-D matrix")
    if target.ndim != 1 or target.size != design.shape[0]:
        raise ValueError("target length must match the design rows")
    if design.shape[0] < design.shape[1]:
        raise ValueError("need at least as many rows as columns")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(target))):
        raise ValueError("design and target must be finite")
    if column_schema is None:
        column_schema = tuple(f"x{i}" for i in range(design.shape[1]))
    elif len(column_schema) != design.shape[1]:
        raise ValueError("column schema width must match the design")

    coef, _, _, _ = np.linalg.lstsq(design, target, rcond=RANK_TOL)
    residuals = design @ coef - target
    rmse = float(np.sqrt(np.mean(residuals**2)))
    return LinearModel(tuple(column_schema), coef, design.shape[0], rmse)
