"""Affine quadrics with their projective completion, poles and points at infinity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import eigh_sym


@dataclass(frozen=True, eq=False)
class PointAtInfinity:
    """Ideal point (v, 0); v is stored unit length with its first nonzero entry positive."""

    direction: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.direction, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ValueError("a point at infinity needs a nonzero direction")
        v = v / norm
        nz = np.flatnonzero(np.abs(v) > 1e-15)
        if v[nz[0]] < 0:
            v = -v
        object.__setattr__(self, "direction", v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointAtInfinity):
            return NotImplemented
        return bool(np.allclose(self.direction, other.direction, atol=1e-12))

    def __repr__(self) -> str:
        return f"PointAtInfinity({self.direction.tolist()})"


Point = np.ndarray | PointAtInfinity


@dataclass(frozen=True, eq=False)
class Quadric:
    """Zero set of q^T M q + 2 b.q + c."""

    M: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=float))
        object.__setattr__(self, "M", 0.5 * (M + M.T))
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(self.b, dtype=float)))
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def homogeneous(self) -> np.ndarray:
        n = self.dim
        out = np.empty((n + 1, n + 1))
        out[:n, :n] = self.M
        out[:n, n] = self.b
        out[n, :n] = self.b
        out[n, n] = self.c
        return out

    def __call__(self, q) -> np.ndarray | float:
        """Evaluate at one point (shape (n,)) or a batch (shape (k, n))."""
        q = np.asarray(q, dtype=float)
        val = np.einsum("...i,ij,...j->...", q, self.M, q) + 2.0 * q @ self.b + self.c
        return float(val) if q.ndim == 1 else val

    def magnitude(self, q) -> np.ndarray | float:
        """Sum of absolute values of the terms; the denominator of relative residuals."""
        q = np.abs(np.asarray(q, dtype=float))
        val = np.einsum("...i,ij,...j->...", q, np.abs(self.M), q) + 2.0 * q @ np.abs(self.b) + abs(self.c)
        return float(val) if q.ndim == 1 else val

    def relative_residual(self, point: Point) -> float:
        if isinstance(point, PointAtInfinity):
            # (v, 0) is a unit homogeneous vector, so the size of the homogeneous matrix is the scale
            v = point.direction
            mag = max(float(np.abs(v) @ np.abs(self.M) @ np.abs(v)), float(np.max(np.abs(self.homogeneous()))))
            val = float(v @ self.M @ v)
        else:
            val, mag = self(point), self.magnitude(point)
        return abs(val) / mag if mag > 0 else abs(val)

    def translated(self, shift) -> Quadric:
        """The quadric moved by +shift: {q : old(q - shift) = 0}."""
        shift = np.asarray(shift, dtype=float)
        b = self.b - self.M @ shift
        c = float(shift @ self.M @ shift) - 2.0 * float(self.b @ shift) + self.c
        return Quadric(self.M, b, c)


def polar_point_of_hyperplane(normal, offset: float) -> Point:
    """Pole of {q : <normal, q> = offset} with respect to the unit sphere."""
    normal = np.atleast_1d(np.asarray(normal, dtype=float))
    if not np.any(normal):
        raise ValueError("hyperplane normal must be nonzero")
    if offset == 0.0:
        return PointAtInfinity(normal)
    return normal / offset


def orthonormal_complement(v: np.ndarray) -> np.ndarray:
    """Rows spanning the orthogonal complement of a nonzero vector (dimension 2 or 3)."""
    v = v / np.linalg.norm(v)
    if v.size == 2:
        return np.array([[-v[1], v[0]]])
    # Householder-free completion: pick the axis least aligned with v
    k = int(np.argmin(np.abs(v)))
    e = np.zeros(3)
    e[k] = 1.0
    m1 = e - (e @ v) * v
    m1 /= np.linalg.norm(m1)
    m2 = np.array([v[1] * m1[2] - v[2] * m1[1], v[2] * m1[0] - v[0] * m1[2], v[0] * m1[1] - v[1] * m1[0]])
    return np.array([m1, m2])


def kernel_directions(m: np.ndarray, tol: float) -> np.ndarray:
    """Eigenvectors (rows) of a symmetric matrix whose eigenvalues are below tol * max |eig|."""
    vals, vecs = eigh_sym(m)
    top = float(np.max(np.abs(vals)))
    if top == 0.0:
        return np.eye(m.shape[0])
    return vecs[:, np.abs(vals) <= tol * top].T
