"""Derivative-free simplex minimization inside a box.

Classic Nelder-Mead with reflection, expansion, contraction and shrink steps.
Every candidate vertex is projected onto the box before evaluation, which
keeps the whole simplex feasible. Termination is by iteration budget or by
the simplex collapsing below a diameter tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool


def nelder_mead_box(
    fn,
    x0: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    step: float = 0.1,
    max_iter: int = 500,
    diameter_tol: float = 1e-6,
) -> SimplexResult:
    x0 = np.asarray(x0, dtype=float)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), x0.shape).copy()
    upper = np.broadcast_to(np.asarray(upper, dtype=float), x0.shape).copy()
    if np.any(lower >= upper):
        raise ValueError("box must have lower < upper in every coordinate")
    dim = x0.size
    if dim == 0:
        raise ValueError("nothing to optimize")

    def project(x: np.ndarray) -> np.ndarray:
        return np.clip(x, lower, upper)

    verts = [project(x0)]
    for i in range(dim):
        v = verts[0].copy()
        v[i] += step
        v = project(v)
        if np.array_equal(v, verts[0]):
            v = verts[0].copy()
            v[i] -= step
            v = project(v)
        verts.append(v)
    verts = np.array(verts)
    fvals = np.array([fn(v) for v in verts])

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = np.argsort(fvals, kind="stable")
        verts = verts[order]
        fvals = fvals[order]
        diameter = np.max(np.abs(verts[1:] - verts[0]))
        if diameter < diameter_tol:
            converged = True
            break
        iterations += 1

        centroid = verts[:-1].mean(axis=0)
        reflected = project(centroid + (centroid - verts[-1]))
        f_reflected = fn(reflected)
        if f_reflected < fvals[0]:
            expanded = project(centroid + 2.0 * (centroid - verts[-1]))
            f_expanded = fn(expanded)
            if f_expanded < f_reflected:
                verts[-1], fvals[-1] = expanded, f_expanded
            else:
                verts[-1], fvals[-1] = reflected, f_reflected
        elif f_reflected < fvals[-2]:
            verts[-1], fvals[-1] = reflected, f_reflected
        else:
            if f_reflected < fvals[-1]:
                contracted = project(centroid + 0.5 * (reflected - centroid))
            else:
                contracted = project(centroid + 0.5 * (verts[-1] - centroid))
            f_contracted = fn(contracted)
            if f_contracted < min(f_reflected, fvals[-1]):
                verts[-1], fvals[-1] = contracted, f_contracted
            else:
                for i in range(1, dim + 1):
                    verts[i] = project(verts[0] + 0.5 * (verts[i] - verts[0]))
                    fvals[i] = fn(verts[i])

    best = int(np.argmin(fvals))
    return SimplexResult(verts[best].copy(), float(fvals[best]), iterations, converged)
