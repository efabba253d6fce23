"""Symmetric eigendecomposition for 1x1, 2x2 (closed form) and 3x3 (cyclic Jacobi).

Eigenvalues come back ascending; each eigenvector column is signed so that its
largest-magnitude entry is positive (first such entry on ties).
"""

from __future__ import annotations

import math

import numpy as np

JACOBI_TOL = 1e-13
MAX_SWEEPS = 60


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    vecs = vecs.copy()
    for k in range(vecs.shape[1]):
        i = int(np.argmax(np.abs(vecs[:, k])))
        if vecs[i, k] < 0:
            vecs[:, k] = -vecs[:, k]
    return vecs


def eig2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b, c = float(m[0, 0]), float(0.5 * (m[0, 1] + m[1, 0])), float(m[1, 1])
    mean = 0.5 * (a + c)
    half = 0.5 * (a - c)
    r = math.hypot(half, b)
    # angle of the eigenvector for the larger eigenvalue
    phi = 0.5 * math.atan2(b, half)
    cp, sp = math.cos(phi), math.sin(phi)
    # the root of larger magnitude is free of cancellation; the other follows from the determinant
    det = a * c - b * b
    if mean >= 0.0:
        hi = mean + r
        lo = det / hi if hi != 0.0 else 0.0
    else:
        lo = mean - r
        hi = det / lo
    vals = np.array([lo, hi])
    vecs = np.array([[-sp, cp], [cp, sp]])
    return vals, _fix_signs(vecs)


def jacobi3(m: np.ndarray, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    # plain lists: numpy call overhead dominates at this size
    m = np.asarray(m, dtype=float)
    a = [[0.5 * (float(m[i, j]) + float(m[j, i])) for j in range(3)] for i in range(3)]
    v = [[1.0 if i == j else 0.0 for j in range(3)] for i in range(3)]
    scale = max(abs(x) for row in a for x in row)
    if scale == 0.0:
        return np.zeros(3), np.eye(3)
    for _ in range(MAX_SWEEPS):
        off = math.sqrt(a[0][1] ** 2 + a[0][2] ** 2 + a[1][2] ** 2)
        if off < tol * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p][q]
            if apq == 0.0:
                continue
            theta = (a[q][q] - a[p][p]) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            # a <- rot^T a rot with rot = identity except [[c, s], [-s, c]] on (p, q)
            for k in range(3):
                akp, akq = a[k][p], a[k][q]
                a[k][p] = c * akp - s * akq
                a[k][q] = s * akp + c * akq
            for k in range(3):
                apk, aqk = a[p][k], a[q][k]
                a[p][k] = c * apk - s * aqk
                a[q][k] = s * apk + c * aqk
            a[p][q] = a[q][p] = 0.0
            for k in range(3):
                vkp, vkq = v[k][p], v[k][q]
                v[k][p] = c * vkp - s * vkq
                v[k][q] = s * vkp + c * vkq
    vals = np.array([a[0][0], a[1][1], a[2][2]])
    order = np.argsort(vals, kind="stable")
    return vals[order], _fix_signs(np.array(v)[:, order])


def eigh_sym(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a small symmetric matrix."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if n == 1:
        return np.array([m[0, 0]]), np.ones((1, 1))
    if n == 2:
        return eig2(m)
    if n == 3:
        return jacobi3(m)
    raise ValueError(f"unsupported matrix size {n}")


def det_small(m: np.ndarray) -> float:
    """Determinant by cofactor expansion (sizes 1 to 3)."""
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if n == 3:
        return float(
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
    raise ValueError(f"unsupported matrix size {n}")


def principal_minor_sum(m: np.ndarray) -> float:
    """Sum of the 2x2 principal minors (second elementary symmetric function of the spectrum)."""
    n = m.shape[0]
    return float(sum(m[i, i] * m[j, j] - m[i, j] * m[j, i]
                     for i in range(n) for j in range(i + 1, n)))
