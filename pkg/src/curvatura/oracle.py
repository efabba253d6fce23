"""Brute-force cross-checks that share no algebra with the closed-form layer.

The focal-set oracle works only with surface evaluations and finite
differences; the curvature oracle differentiates curves on the surface; the
eigen oracle evaluates characteristic polynomials built by cofactors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .caustic import caustic_quadric
from .errors import DomainError
from .expr import evaluate
from .invariants import GaussForm, normal_section_curvature
from .jets import SurfaceSpec, adapted_frame, eval_jet2, local_quadratic_map_from_jet, metric_normalizer

CANCELLATION_LIMIT = 1e-3
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class OracleReport:
    name: str
    max_residual: float
    samples: int
    passed: bool
    threshold: float
    details: dict = field(default_factory=dict)


def _report(name: str, residual: float, samples: int, threshold: float, details: dict | None = None) -> OracleReport:
    return OracleReport(name, float(residual), int(samples), bool(residual <= threshold), float(threshold), details or {})


def surface_point(spec: SurfaceSpec, s: float, t: float) -> np.ndarray:
    return np.array([evaluate(c, s, t) for c in spec.components])


def _hessian_stencil(spec: SurfaceSpec, s0: float, t0: float, h: float) -> dict[tuple[int, int], np.ndarray]:
    return {(i, j): surface_point(spec, s0 + i * h, t0 + j * h) for i in (-1, 0, 1) for j in (-1, 0, 1)}


def _distance_hessian(stencil, X: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Entries (ss, tt, st) of the (s, t) Hessian of F = |X - gamma|^2 / 2 for points X, shape (k, n)."""
    F = {key: 0.5 * np.sum((X - g) ** 2, axis=-1) for key, g in stencil.items()}
    f_ss = (F[1, 0] - 2.0 * F[0, 0] + F[-1, 0]) / (h * h)
    f_tt = (F[0, 1] - 2.0 * F[0, 0] + F[0, -1]) / (h * h)
    f_st = (F[1, 1] - F[1, -1] - F[-1, 1] + F[-1, -1]) / (4.0 * h * h)
    return f_ss, f_tt, f_st


def _distance_hessian_det(stencil, X: np.ndarray, h: float) -> np.ndarray:
    f_ss, f_tt, f_st = _distance_hessian(stencil, X, h)
    return f_ss * f_tt - f_st * f_st


def _edge_crossings(values: np.ndarray, axes: list[np.ndarray]) -> np.ndarray:
    """Linearly interpolated sign changes along grid edges (1D or 2D grids)."""
    pts = []
    if values.ndim == 1:
        x = axes[0]
        a, b = values[:-1], values[1:]
        idx = np.flatnonzero(np.sign(a) * np.sign(b) < 0)
        for i in idx:
            w = a[i] / (a[i] - b[i])
            pts.append([x[i] + w * (x[i + 1] - x[i])])
        for i in np.flatnonzero(values == 0.0):
            pts.append([x[i]])
        return np.array(pts).reshape(-1, 1)
    x, y = axes
    # values[i, j] sits at (x[i], y[j])
    for axis in (0, 1):
        a = values[:-1, :] if axis == 0 else values[:, :-1]
        b = values[1:, :] if axis == 0 else values[:, 1:]
        ii, jj = np.nonzero(np.sign(a) * np.sign(b) < 0)
        w = a[ii, jj] / (a[ii, jj] - b[ii, jj])
        if axis == 0:
            px = x[ii] + w * (x[ii + 1] - x[ii])
            py = y[jj]
        else:
            px = x[ii]
            py = y[jj] + w * (y[jj + 1] - y[jj])
        pts.extend(np.column_stack([px, py]).tolist())
    ii, jj = np.nonzero(values == 0.0)
    pts.extend(np.column_stack([x[ii], y[jj]]).tolist())
    return np.array(pts).reshape(-1, 2)


def hausdorff(p: np.ndarray, q: np.ndarray) -> float:
    if len(p) == 0 and len(q) == 0:
        return 0.0
    if len(p) == 0 or len(q) == 0:
        return math.inf
    d = np.sqrt(((p[:, None, :] - q[None, :, :]) ** 2).sum(axis=-1))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def focal_set_oracle(
    spec: SurfaceSpec,
    s0: float,
    t0: float,
    q_box=(-2.0, 2.0, -2.0, 2.0),
    grid_n: int = 101,
    h: float = 1e-3,
    slice_offset: float = 0.0,
) -> OracleReport:
    """Zero set of det Hess F^q against the algebraic caustic, on a grid of normal coordinates.

    Codimension 2 uses the whole normal plane, codimension 3 the slice
    q3 = slice_offset and codimension 1 the normal line over q_box[:2].
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    jet = eval_jet2(spec, s0, t0)
    frame = adapted_frame(jet)
    nrm = frame.normals
    ell = nrm.shape[0]

    stencil = _hessian_stencil(spec, s0, t0, h)
    coarse = _hessian_stencil(spec, s0, t0, 2 * h)
    # rounding in F grows with the distance to the surface, so probe the farthest corner of the box;
    # a jump between the h and 2h Hessians there means cancellation dominates
    far = np.array([max(abs(q_box[0]), abs(q_box[1])), max(abs(q_box[2]), abs(q_box[3])), abs(slice_offset)])
    probe = (frame.base_point + far[:ell] @ nrm)[None, :]
    fine_h = np.array(_distance_hessian(stencil, probe, h)).ravel()
    coarse_h = np.array(_distance_hessian(coarse, probe, 2 * h)).ravel()
    size = max(1.0, float(np.max(np.abs(coarse_h))))
    # rounding in F itself, amplified by the second difference
    f_max = max(0.5 * float(np.sum((probe - g) ** 2)) for g in stencil.values())
    noise = 4.0 * EPS * f_max / (h * h)
    if max(float(np.max(np.abs(fine_h - coarse_h))), noise) > CANCELLATION_LIMIT * size:
        raise DomainError(f"finite-difference step h={h} is too small: cancellation dominates")

    x = np.linspace(q_box[0], q_box[1], grid_n)
    if ell == 1:
        axes = [x]
        coords = x[:, None]
    else:
        y = np.linspace(q_box[2], q_box[3], grid_n)
        axes = [x, y]
        xx, yy = np.meshgrid(x, y, indexing="ij")
        coords = np.column_stack([xx.ravel(), yy.ravel()])
        if ell == 3:
            coords = np.column_stack([coords, np.full(len(coords), slice_offset)])
    X = frame.base_point + coords @ nrm
    shape = (grid_n,) if ell == 1 else (grid_n, grid_n)
    field_fd = _distance_hessian_det(stencil, X, h).reshape(shape)

    quad = caustic_quadric(local_quadratic_map_from_jet(jet, frame))
    field_alg = quad(coords).reshape(shape)

    found = _edge_crossings(field_fd, axes)
    expected = _edge_crossings(field_alg, axes)
    spacing = float(x[1] - x[0])
    resid = hausdorff(found, expected)
    return _report(
        "focal set",
        resid,
        len(coords),
        spacing,
        {"crossings_fd": len(found), "crossings_algebraic": len(expected), "grid_spacing": spacing, "h": h},
    )


def curvature_vector_oracle(spec: SurfaceSpec, s0: float, t0: float, theta: float, h: float = 1e-4,
                            threshold: float = 1e-5) -> OracleReport:
    """Second difference of the surface along the unit-speed direction theta, projected to the normals."""
    if h <= 0:
        raise ValueError("step h must be positive")
    jet = eval_jet2(spec, s0, t0)
    frame = adapted_frame(jet)
    L = metric_normalizer(jet)
    d = L @ np.array([math.cos(theta), math.sin(theta)])
    plus = surface_point(spec, s0 + h * d[0], t0 + h * d[1])
    mid = surface_point(spec, s0, t0)
    minus = surface_point(spec, s0 - h * d[0], t0 - h * d[1])
    acc = (plus - 2.0 * mid + minus) / (h * h)
    found = frame.normals @ acc
    expected = normal_section_curvature(local_quadratic_map_from_jet(jet, frame), theta)
    resid = float(np.max(np.abs(found - expected)))
    return _report("curvature vector", resid, 1, threshold,
                   {"theta": theta, "h": h, "finite_difference": found.tolist(), "closed_form": expected.tolist()})


def _char_poly_coeffs(m: np.ndarray) -> list[float]:
    """Coefficients of det(x I - m), highest degree first, from cofactor expansions."""
    n = m.shape[0]
    if n == 1:
        return [1.0, -m[0, 0]]
    if n == 2:
        return [1.0, -(m[0, 0] + m[1, 1]), m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]]
    trace = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
              + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
              + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    det = (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
           - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
           + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))
    return [1.0, -trace, minors, -det]


def eigen_oracle(gf: GaussForm, threshold: float = 1e-9) -> OracleReport:
    m = np.asarray(gf.matrix, dtype=float)
    n = m.shape[0]
    scale = float(np.max(np.abs(m)))
    coeffs = _char_poly_coeffs(m)
    worst = 0.0
    details = {}
    for k, lam in enumerate(gf.eigenvalues):
        val = sum(c * lam ** (n - i) for i, c in enumerate(coeffs))
        rel = abs(val) / scale ** n if scale > 0 else abs(val)
        details[f"eigenvalue_{k}"] = rel
        worst = max(worst, rel)
    vecs = np.asarray(gf.eigenvectors)
    ortho = float(np.max(np.abs(vecs.T @ vecs - np.eye(n))))
    eq = float(np.max(np.abs(m @ vecs - vecs * gf.eigenvalues))) / max(scale, 1e-300) if scale > 0 else 0.0
    details["orthonormality"] = ortho
    details["eigen_equation"] = eq
    return _report("eigen", max(worst, ortho, eq), n, threshold, details)
