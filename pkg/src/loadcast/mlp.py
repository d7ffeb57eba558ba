"""Small feed-forward regressor trained by full-batch gradient descent.

One ReLU hidden layer, one linear output, mean squared error loss. Inputs are
standardized per column with statistics stored in the model; a constant
column keeps scale 1 so standardization never divides by zero. Training is
deterministic for a fixed seed: weights come from a seeded uniform draw
scaled by the inverse square root of the fan-in, and the full batch is used
every epoch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SCALE_FLOOR = 1e-12


@dataclass(frozen=True)
class MlpModel:
    w_hidden: np.ndarray
    b_hidden: np.ndarray
    w_out: np.ndarray
    b_out: float
    input_mean: np.ndarray
    input_scale: np.ndarray
    loss_trace: np.ndarray

    @property
    def n_inputs(self) -> int:
        return self.w_hidden.shape[0]


def _forward(xs: np.ndarray, w1: np.ndarray, b1: np.ndarray, w2: np.ndarray, b2: float):
    pre = xs @ w1 + b1
    hidden = np.maximum(pre, 0.0)
    return pre, hidden, hidden @ w2 + b2


def mlp_loss_and_grads(
    weights: tuple[np.ndarray, np.ndarray, np.ndarray, float],
    xs: np.ndarray,
    y: np.ndarray,
):
    """MSE loss and its analytic gradients, exposed for finite-difference checks."""
    w1, b1, w2, b2 = weights
    n = xs.shape[0]
    pre, hidden, out = _forward(xs, w1, b1, w2, b2)
    err = out - y
    loss = float(err @ err) / n
    d_out = 2.0 * err / n
    g_w2 = hidden.T @ d_out
    g_b2 = float(d_out.sum())
    d_hidden = np.outer(d_out, w2) * (pre > 0.0)
    g_w1 = xs.T @ d_hidden
    g_b1 = d_hidden.sum(axis=0)
    return loss, (g_w1, g_b1, g_w2, g_b2)


def mlp_train(
    design: np.ndarray,
    target: np.ndarray,
    hidden: int = 4,
    learning_rate: float = 0.01,
    epochs: int = 2000,
    seed: int = 0,
) -> MlpModel:
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)
    if design.ndim != 2 or design.size == 0:
        raise ValueError("design must be a non-empty 2-D matrix")
    if target.shape != (design.shape[0],):
        raise ValueError("target length must match the design rows")
    if epochs < 1:
        raise ValueError("epochs must be at least 1")
    if hidden < 1:
        raise ValueError("need at least one hidden unit")
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")

    mean = design.mean(axis=0)
    scale = design.std(axis=0)
    scale[scale < _SCALE_FLOOR] = 1.0
    xs = (design - mean) / scale

    n_in = design.shape[1]
    rng = np.random.default_rng(seed)
    w1 = rng.uniform(-1.0, 1.0, size=(n_in, hidden)) / np.sqrt(n_in)
    b1 = np.zeros(hidden)
    w2 = rng.uniform(-1.0, 1.0, size=hidden) / np.sqrt(hidden)
    b2 = 0.0

    trace = np.empty(epochs + 1)
    for epoch in range(epochs):
        loss, (g_w1, g_b1, g_w2, g_b2) = mlp_loss_and_grads((w1, b1, w2, b2), xs, target)
        trace[epoch] = loss
        w1 = w1 - learning_rate * g_w1
        b1 = b1 - learning_rate * g_b1
        w2 = w2 - learning_rate * g_w2
        b2 = b2 - learning_rate * g_b2
    trace[epochs], _ = mlp_loss_and_grads((w1, b1, w2, b2), xs, target)

    return MlpModel(w1, b1, w2, float(b2), mean, scale, trace)


def mlp_predict(model: MlpModel, rows: np.ndarray) -> np.ndarray | float:
    rows = np.asarray(rows, dtype=float)
    single = rows.ndim == 1
    if rows.shape[-1] != model.n_inputs:
        raise ValueError(
            f"row width {rows.shape[-1]} does not match {model.n_inputs} inputs"
        )
    xs = (np.atleast_2d(rows) - model.input_mean) / model.input_scale
    _, _, out = _forward(xs, model.w_hidden, model.b_hidden, model.w_out, model.b_out)
    return float(out[0]) if single else out
