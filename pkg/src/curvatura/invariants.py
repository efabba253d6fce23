"""Local quadratic map, Gauss quadratic form and the scalar invariants built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import det_small, eigh_sym, principal_minor_sum
from .sl2 import QuadForm2, W, poisson_bracket, psi_inner

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LocalQuadraticMap:
    """phi(s, t) = (s^2 A + 2 s t B + t^2 C) / 2 with A, B, C in R^codim."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.A.shape == self.B.shape == self.C.shape and self.A.ndim == 1):
            raise ValueError("A, B, C must be vectors of equal length")
        if self.A.shape[0] not in (1, 2, 3):
            raise ValueError(f"codimension must be 1, 2 or 3, got {self.A.shape[0]}")

    @classmethod
    def from_forms(cls, forms: list[QuadForm2]) -> LocalQuadraticMap:
        return cls([q.a for q in forms], [q.b for q in forms], [q.c for q in forms])

    @classmethod
    def from_flat(cls, row) -> LocalQuadraticMap:
        """Inverse of ``flat``: the concatenation A, B, C."""
        row = np.asarray(row, dtype=float)
        if row.ndim != 1 or row.size not in (3, 6, 9):
            raise ValueError("flat representation must have 3, 6 or 9 entries")
        n = row.size // 3
        return cls(row[:n], row[n:2 * n], row[2 * n:])

    @property
    def codim(self) -> int:
        return self.A.shape[0]

    def flat(self) -> np.ndarray:
        return np.concatenate([self.A, self.B, self.C])

    def component(self, i: int) -> QuadForm2:
        return QuadForm2(float(self.A[i]), float(self.B[i]), float(self.C[i]))

    def components(self) -> list[QuadForm2]:
        return [self.component(i) for i in range(self.codim)]

    def __call__(self, s: float, t: float) -> np.ndarray:
        return 0.5 * (s * s * self.A + 2.0 * s * t * self.B + t * t * self.C)

    def scale(self) -> float:
        return float(max(np.max(np.abs(self.A)), np.max(np.abs(self.B)), np.max(np.abs(self.C))))

    @property
    def H(self) -> np.ndarray:
        return 0.5 * (self.A + self.C)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalQuadraticMap):
            return NotImplemented
        return bool(np.array_equal(self.flat(), other.flat()))

    def __repr__(self) -> str:
        return f"LocalQuadraticMap(A={self.A.tolist()}, B={self.B.tolist()}, C={self.C.tolist()})"


@dataclass(frozen=True, eq=False)
class GaussForm:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def __call__(self, q) -> float:
        """The quadratic form itself, q^T G q / 2."""
        q = np.asarray(q, dtype=float)
        return 0.5 * float(q @ self.matrix @ q)


@dataclass(frozen=True, eq=False)
class Invariants:
    K: float
    Delta: float
    N: float
    H: np.ndarray
    focal: np.ndarray
    Acal: float | None = None
    tau: float | None = None
    n_sign_indeterminate: bool = False


@dataclass(frozen=True, eq=False)
class EllipseParam:
    center: np.ndarray
    u_axis: np.ndarray
    v_axis: np.ndarray

    def __call__(self, theta: float) -> np.ndarray:
        return self.center + math.cos(2 * theta) * self.u_axis + math.sin(2 * theta) * self.v_axis

    def derivative(self, theta: float) -> np.ndarray:
        """Half the theta-derivative: the tangent direction at E(theta)."""
        return -math.sin(2 * theta) * self.u_axis + math.cos(2 * theta) * self.v_axis


def gram_matrix(lqm: LocalQuadraticMap) -> np.ndarray:
    A, B, C = lqm.A, lqm.B, lqm.C
    return 0.5 * (np.outer(A, C) + np.outer(C, A)) - np.outer(B, B)


def gauss_form(lqm: LocalQuadraticMap) -> GaussForm:
    g = gram_matrix(lqm)
    vals, vecs = eigh_sym(g)
    return GaussForm(g, vals, vecs)


def cross3(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.array([x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]])


def normal_curvature_r4(lqm: LocalQuadraticMap) -> float:
    A, B, C = lqm.A, lqm.B, lqm.C
    return float((A[0] - C[0]) * B[1] - (A[1] - C[1]) * B[0])


def torsion(lqm: LocalQuadraticMap) -> float:
    """Oriented volume tau = <(A - C)/2 x B, H> (codimension 3 only)."""
    return float(cross3(0.5 * (lqm.A - lqm.C), lqm.B) @ lqm.H)


def invariants_of(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL, gf: GaussForm | None = None) -> Invariants:
    gf = gf or gauss_form(lqm)
    g = gf.matrix
    n = lqm.codim
    K = float(np.trace(g))
    Delta = det_small(g)
    H = lqm.H
    if n == 1:
        return Invariants(K, Delta, 0.0, H, gf.eigenvalues)
    if n == 2:
        return Invariants(K, Delta, normal_curvature_r4(lqm), H, gf.eigenvalues)
    tau = torsion(lqm)
    area = float(np.linalg.norm(cross3(lqm.A - lqm.C, lqm.B)))
    indeterminate = abs(tau) <= tol * lqm.scale() ** 3
    N = area if indeterminate else math.copysign(area, tau)
    return Invariants(K, Delta, N, H, gf.eigenvalues, principal_minor_sum(g), tau, indeterminate)


def indicatrix(lqm: LocalQuadraticMap) -> EllipseParam:
    return EllipseParam(lqm.H.copy(), 0.5 * (lqm.A - lqm.C), lqm.B.copy())


def _check_unit(n: np.ndarray) -> np.ndarray:
    n = np.atleast_1d(np.asarray(n, dtype=float))
    if abs(float(np.linalg.norm(n)) - 1.0) > 1e-9:
        raise ValueError("normal direction must be a unit vector")
    return n


def dgamma_perp(lqm: LocalQuadraticMap, n) -> np.ndarray:
    """Shape operator of the surface along the normal direction n."""
    n = _check_unit(n)
    a, b, c = float(lqm.A @ n), float(lqm.B @ n), float(lqm.C @ n)
    return np.array([[a, b], [b, c]])


def normal_section_curvature(lqm: LocalQuadraticMap, theta: float) -> np.ndarray:
    u1, u2 = math.cos(theta), math.sin(theta)
    return u1 * u1 * lqm.A + 2.0 * u1 * u2 * lqm.B + u2 * u2 * lqm.C


@dataclass(frozen=True)
class PsiSummary:
    """Invariants recomputed from the pseudo-Euclidean picture of the components."""

    K: float
    Delta: float | None = None
    N: float | None = None
    Acal: float | None = None
    tau: float | None = None
    H: tuple[float, ...] = field(default_factory=tuple)


def psi_summary(lqm: LocalQuadraticMap) -> PsiSummary:
    """Parallelogram / parallelepiped formulas, independent of the Gram-matrix route."""
    qs = lqm.components()
    K = sum(q.norm2() for q in qs)
    H = tuple(psi_inner(q, W) for q in qs)
    if lqm.codim == 2:
        br = poisson_bracket(qs[0], qs[1])
        return PsiSummary(K, br.norm2(), br.a + br.c, H=H)
    if lqm.codim == 3:
        q1, q2, q3 = qs
        pairs = [(q1, q2), (q2, q3), (q3, q1)]
        Acal = sum(poisson_bracket(x, y).norm2() for x, y in pairs)
        tau = psi_inner(q1, poisson_bracket(q2, q3))
        return PsiSummary(K, tau * tau, Acal=Acal, tau=tau, H=H)
    return PsiSummary(K, K, H=H)
