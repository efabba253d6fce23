"""Point types in codimension 1, 2 and 3, the inequality battery and grid sweeps."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .caustic import QuadricClass, QuadricType, caustic_quadric, classify_quadric
from .errors import CurvaturaError
from .invariants import Invariants, LocalQuadraticMap, gauss_form, indicatrix, invariants_of
from .jets import SurfaceSpec, local_quadratic_map_at
from .projective import Quadric, orthonormal_complement

DEFAULT_TOL = 1e-9
ZERO_SCALE = 1e-12
BOUNDARY_FACTOR = 10.0
CAUSTIC_FLOOR = 1e-12


class PointType(str, enum.Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"
    SEMIUMBILIC = "Semiumbilic"
    INFLECTION_REAL = "InflectionReal"
    INFLECTION_IMAGINARY = "InflectionImaginary"
    INFLECTION_FLAT = "InflectionFlat"
    UMBILIC = "Umbilic"
    FLAT_UMBILIC = "FlatUmbilic"
    PSEUDO_ELLIPTIC = "PseudoElliptic"
    PSEUDO_HYPERBOLIC = "PseudoHyperbolic"
    PSEUDO_PARABOLIC = "PseudoParabolic"
    FLAT_ELLIPTIC = "FlatElliptic"
    FLAT_HYPERBOLIC = "FlatHyperbolic"
    FLAT_PARABOLIC = "FlatParabolic"


T = PointType
Q = QuadricType

# caustic type expected for each point type; inflection entries also fix origin_between
CAUSTIC_R4 = {
    T.ELLIPTIC: (Q.ELLIPSE, Q.CIRCLE),
    T.HYPERBOLIC: (Q.HYPERBOLA,),
    T.PARABOLIC: (Q.PARABOLA,),
    T.SEMIUMBILIC: (Q.TWO_INTERSECTING_LINES,),
    T.INFLECTION_REAL: (Q.TWO_PARALLEL_LINES,),
    T.INFLECTION_IMAGINARY: (Q.TWO_PARALLEL_LINES,),
    T.INFLECTION_FLAT: (Q.LINE_AT_INFINITY,),
    T.UMBILIC: (Q.DOUBLE_LINE,),
    T.FLAT_UMBILIC: (Q.DOUBLE_LINE_AT_INFINITY,),
}

CAUSTIC_R5 = {
    T.PSEUDO_ELLIPTIC: (Q.CONE,),
    T.PSEUDO_HYPERBOLIC: (Q.CONE,),
    T.PSEUDO_PARABOLIC: (Q.CONE,),
    T.FLAT_ELLIPTIC: (Q.ELLIPTIC_CYLINDER,),
    T.FLAT_HYPERBOLIC: (Q.HYPERBOLIC_CYLINDER,),
    T.FLAT_PARABOLIC: (Q.PARABOLIC_CYLINDER,),
    T.SEMIUMBILIC: (Q.TWO_PLANES,),
    T.INFLECTION_REAL: (Q.TWO_PARALLEL_PLANES,),
    T.INFLECTION_IMAGINARY: (Q.TWO_PARALLEL_PLANES,),
    T.INFLECTION_FLAT: (Q.PLANE_AT_INFINITY,),
    T.UMBILIC: (Q.DOUBLE_PLANE,),
    T.FLAT_UMBILIC: (Q.DOUBLE_PLANE_AT_INFINITY,),
}

BETWEEN = {T.INFLECTION_REAL: True, T.INFLECTION_IMAGINARY: False}

# section of the caustic cone by the indicatrix plane, per pseudo type
SECTION_TYPES = {
    T.PSEUDO_ELLIPTIC: (Q.ELLIPSE, Q.CIRCLE, Q.POINT_CONIC),
    T.PSEUDO_HYPERBOLIC: (Q.HYPERBOLA, Q.TWO_INTERSECTING_LINES),
    T.PSEUDO_PARABOLIC: (Q.PARABOLA, Q.DOUBLE_LINE),
}


@dataclass(frozen=True, eq=False)
class PointClass4:
    label: PointType
    caustic: QuadricClass
    caustic_consistent: bool
    centered: bool = False
    circle_caustic: bool = False
    position: str | None = None  # of p relative to the indicatrix: inside, on, outside
    boundary_warning: bool = False


@dataclass(frozen=True, eq=False)
class PointClass5:
    label: PointType
    caustic: QuadricClass
    caustic_consistent: bool
    tau_sign: str = "0"
    M_stratum: int = 0
    section: QuadricType | None = None
    centered: bool = False
    boundary_warning: bool = False


@dataclass(frozen=True, eq=False)
class PointClass3:
    """Classical types of a surface in 3-space."""

    label: PointType
    boundary_warning: bool = False


PointClass = PointClass3 | PointClass4 | PointClass5


@dataclass(frozen=True)
class _Shape:
    """Geometry of the indicatrix relative to the origin."""

    rank: int
    position: str | None  # rank 2: inside / on / outside of p in the plane; rank 1: radial inflection kind
    radial: bool
    centered: bool
    margin: float  # distance of the decisive quantity from its threshold, scale free


def _tol_scale(lqm: LocalQuadraticMap) -> float:
    s = lqm.scale()
    return 0.0 if s <= ZERO_SCALE else s


def _indicatrix_shape(lqm: LocalQuadraticMap, tol: float) -> _Shape:
    scale = _tol_scale(lqm)
    H = lqm.H
    centered = scale == 0.0 or float(np.linalg.norm(H)) <= tol * scale
    if scale == 0.0:
        return _Shape(0, None, False, True, math.inf)
    ell = indicatrix(lqm)
    m = np.column_stack([ell.u_axis, ell.v_axis])
    left, sv, right = np.linalg.svd(m)
    rank = int(np.sum(sv > tol * scale))
    rank_margin = min((abs(x / scale - tol) for x in sv), default=math.inf)
    if rank == 2:
        # p = H + x u + y v in the plane of the ellipse (least squares off it)
        w, *_ = np.linalg.lstsq(m, -H, rcond=None)
        gap = 1.0 - float(w @ w)
        rel = gap / max(1.0, float(w @ w))
        pos = "on" if abs(rel) <= tol else ("inside" if rel > 0 else "outside")
        return _Shape(2, pos, False, centered, min(abs(rel), rank_margin))
    if rank == 1:
        e = left[:, 0]
        half = float(sv[0])
        off_line = H - float(H @ e) * e
        radial = float(np.linalg.norm(off_line)) <= tol * scale
        if not radial:
            return _Shape(1, None, False, centered, min(rank_margin, float(np.linalg.norm(off_line)) / scale))
        r0 = abs(float(H @ e))
        rel = (half - r0) / scale
        kind = "flat" if abs(rel) <= tol else ("real" if rel > 0 else "imaginary")
        return _Shape(1, kind, True, centered, min(rank_margin, abs(rel)))
    return _Shape(0, None, False, centered, min(rank_margin, float(np.linalg.norm(H)) / scale))


def _near(margin: float, tol: float) -> bool:
    return margin <= BOUNDARY_FACTOR * tol


def _degenerate_label(shape: _Shape) -> PointType:
    if shape.rank == 1:
        if not shape.radial:
            return T.SEMIUMBILIC
        return {"real": T.INFLECTION_REAL, "imaginary": T.INFLECTION_IMAGINARY, "flat": T.INFLECTION_FLAT}[shape.position]
    return T.FLAT_UMBILIC if shape.centered else T.UMBILIC


def _consistent(table, label: PointType, caustic: QuadricClass) -> bool:
    if caustic.label not in table[label]:
        return False
    if label in BETWEEN:
        return caustic.origin_between is BETWEEN[label]
    return True


def caustic_tol(tol: float) -> float:
    """Relative threshold for caustic eigenvalues.

    The Gauss matrix is W diag(1, -1, -1) W^T with W = [H, (A - C)/2, B], so its
    eigenvalue ratios are squares of the singular value ratios that decide the
    label; the floor sits just above double precision rounding.
    """
    return max(tol * tol, CAUSTIC_FLOOR)


def _caustic_class(lqm: LocalQuadraticMap, tol: float) -> QuadricClass:
    quad = caustic_quadric(lqm)
    if _tol_scale(lqm) == 0.0:
        return classify_quadric(Quadric(np.zeros_like(quad.M), np.zeros_like(quad.b), 1.0))
    # the map scale already decided the zero case, so no absolute floor here
    return classify_quadric(quad, tol=caustic_tol(tol), atol=0.0)


def classify_r4(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> PointClass4:
    if lqm.codim != 2:
        raise ValueError("classify_r4 needs codimension 2")
    shape = _indicatrix_shape(lqm, tol)
    caustic = _caustic_class(lqm, tol)
    circle = False
    if shape.rank == 2:
        inv = invariants_of(lqm)
        label = {"inside": T.ELLIPTIC, "outside": T.HYPERBOLIC, "on": T.PARABOLIC}[shape.position]
        circle = label is T.ELLIPTIC and abs(inv.K ** 2 - 4.0 * inv.Delta) <= tol * inv.K ** 2
    else:
        label = _degenerate_label(shape)
    return PointClass4(
        label,
        caustic,
        _consistent(CAUSTIC_R4, label, caustic),
        centered=shape.centered,
        circle_caustic=circle,
        position=shape.position if shape.rank == 2 else None,
        boundary_warning=_near(shape.margin, tol),
    )


def m_stratum(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> int:
    """Rank of the matrix with columns (A - C)/2, B, H."""
    s = _tol_scale(lqm)
    if s == 0.0:
        return 0
    m = np.column_stack([0.5 * (lqm.A - lqm.C), lqm.B, lqm.H])
    return int(np.sum(np.linalg.svd(m, compute_uv=False) > tol * s))


def section_conic_type(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> QuadricType | None:
    """Conic cut from the caustic by the plane of the indicatrix (codim 3, tau != 0).

    The plane {<q, R> = 1} is parametrized directly and the restricted
    equation classified, without reference to the paired form.
    """
    if lqm.codim != 3:
        raise ValueError("defined for codimension 3")
    ell = indicatrix(lqm)
    normal = np.cross(ell.u_axis, ell.v_axis)
    if not np.any(normal):
        return None
    normal = normal / np.linalg.norm(normal)
    offset = float(normal @ lqm.H)
    quad = caustic_quadric(lqm)
    basis = orthonormal_complement(normal)
    q0 = offset * normal
    M2 = basis @ quad.M @ basis.T
    b2 = basis @ (quad.M @ q0 + quad.b)
    c2 = quad(q0)
    return classify_quadric(Quadric(M2, b2, c2), tol=caustic_tol(tol), atol=0.0).label


def classify_r5(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> PointClass5:
    if lqm.codim != 3:
        raise ValueError("classify_r5 needs codimension 3")
    shape = _indicatrix_shape(lqm, tol)
    caustic = _caustic_class(lqm, tol)
    stratum = m_stratum(lqm, tol)
    s = _tol_scale(lqm)
    inv = invariants_of(lqm)
    tau_sign = "0"
    if s > 0.0 and stratum == 3:
        tau_sign = "+" if inv.tau > 0 else "-"
    margin = shape.margin
    section = None
    if shape.rank == 2 and stratum == 3:
        g = gauss_form(lqm).matrix
        R = np.linalg.solve(g, lqm.H)
        g_inv_r = np.linalg.solve(g, R)
        top = float(np.max(np.abs(np.linalg.eigvalsh(np.linalg.inv(g)))))
        value = float(R @ g_inv_r) / max(float(R @ R) * top, 1e-300)
        if abs(value) <= tol:
            label = T.PSEUDO_PARABOLIC
        else:
            label = T.PSEUDO_ELLIPTIC if value > 0 else T.PSEUDO_HYPERBOLIC
        margin = min(margin, abs(value))
        section = section_conic_type(lqm, tol)
    elif shape.rank == 2:
        # tau = 0: p lies in the plane of the indicatrix
        label = {"inside": T.FLAT_ELLIPTIC, "outside": T.FLAT_HYPERBOLIC, "on": T.FLAT_PARABOLIC}[shape.position]
    else:
        label = _degenerate_label(shape)
    consistent = _consistent(CAUSTIC_R5, label, caustic)
    if label in SECTION_TYPES:
        consistent = consistent and section in SECTION_TYPES[label]
    return PointClass5(
        label,
        caustic,
        consistent,
        tau_sign=tau_sign,
        M_stratum=stratum,
        section=section,
        centered=shape.centered,
        boundary_warning=_near(margin, tol),
    )


def classify_r3(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> PointClass3:
    if lqm.codim != 1:
        raise ValueError("classify_r3 needs codimension 1")
    s = _tol_scale(lqm)
    if s == 0.0:
        return PointClass3(T.FLAT_UMBILIC)
    K = float(lqm.A[0] * lqm.C[0] - lqm.B[0] ** 2) / (s * s)
    if abs(K) <= tol:
        return PointClass3(T.PARABOLIC, True)
    return PointClass3(T.ELLIPTIC if K > 0 else T.HYPERBOLIC, _near(abs(K), tol))


def classify_point(lqm: LocalQuadraticMap, tol: float = DEFAULT_TOL) -> PointClass:
    return {1: classify_r3, 2: classify_r4, 3: classify_r5}[lqm.codim](lqm, tol)


@dataclass(frozen=True)
class InequalityRecord:
    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool


@dataclass(frozen=True)
class InequalityReport:
    records: tuple[InequalityRecord, ...]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.records)

    def __iter__(self):
        return iter(self.records)

    def by_name(self) -> dict[str, InequalityRecord]:
        return {r.name: r for r in self.records}


class _Collector:
    def __init__(self, tol: float, scale: float):
        self.tol, self.scale = tol, scale
        self.records: list[InequalityRecord] = []

    def geq(self, name: str, lhs: float, rhs: float, weight: float = 1.0) -> None:
        """lhs >= rhs; slack is compared against tol * weight, weight being the natural size."""
        slack = float(lhs - rhs)
        self.records.append(InequalityRecord(name, float(lhs), float(rhs), slack, slack >= -self.tol * max(weight, 0.0)))


def inequality_report(lqm: LocalQuadraticMap, tol: float = 1e-10) -> InequalityReport:
    inv = invariants_of(lqm)
    s = lqm.scale()
    out = _Collector(tol, s)
    H2 = float(lqm.H @ lqm.H)
    if lqm.codim == 2:
        K, D, N = inv.K, inv.Delta, inv.N
        s4 = s ** 4
        out.geq("N^2 >= 4 Delta", N * N, 4.0 * D, s4)
        out.geq("K^2 >= 4 Delta", K * K, 4.0 * D, s4)
        shape = _indicatrix_shape(lqm, DEFAULT_TOL)
        if D >= 0 and shape.rank == 2:
            out.geq("Delta >= 0 implies K < 0", -K, 0.0, 0.0)
        else:
            out.geq("Delta >= 0 implies K < 0", 0.0, 0.0)
        out.geq("Wintgen", H2, K + abs(N), s * s)
        singular = abs(D) <= 1e-14 * s4 or s4 == 0.0
        if not singular:
            g = gauss_form(lqm)
            R = np.linalg.solve(g.matrix, lqm.H)
            R2 = float(R @ R)
            out.geq("paired Wintgen", R2, K / D + abs(N / D), max(R2, abs(K / D) + abs(N / D)))
            k1, k2 = sorted(g.eigenvalues)
            alpha = 1.0 - N * N / (4.0 * D)
            if D > 0:
                out.geq("H^2 lower bound (elliptic)", H2, alpha * k2, H2 + abs(alpha * k2))
                out.geq("H^2 upper bound (elliptic)", alpha * k1, H2, H2 + abs(alpha * k1))
                out.geq("R^2 lower bound (elliptic)", R2, alpha / k1, R2 + abs(alpha / k1))
                out.geq("R^2 upper bound (elliptic)", alpha / k2, R2, R2 + abs(alpha / k2))
            else:
                # the positive focal curvature gives the sharp bound
                out.geq("H^2 lower bound (hyperbolic)", H2, alpha * k2, H2 + abs(alpha * k2))
                out.geq("R^2 lower bound (hyperbolic)", R2, alpha / k2, R2 + abs(alpha / k2))
    elif lqm.codim == 3:
        K, D, Acal = inv.K, inv.Delta, inv.Acal
        s4 = s ** 4
        out.geq("K^2 >= 3 Acal", K * K, 3.0 * Acal, s4)
        out.geq("Acal^2 >= 3 K Delta", Acal * Acal, 3.0 * K * D, s ** 8)
        out.geq("Wintgen", H2, K + abs(inv.N), s * s)
        if abs(D) > 1e-14 * s ** 6 and s > 0:
            g = gauss_form(lqm)
            R = np.linalg.solve(g.matrix, lqm.H)
            R2 = float(R @ R)
            k1, k2, k3 = sorted(g.eigenvalues)
            big = float(np.max(np.abs(g.eigenvalues)))
            out.geq("paired Wintgen", R2, Acal / D + 2.0 * math.sqrt(H2) / abs(inv.tau),
                    max(R2, abs(Acal / D) + 2.0 * math.sqrt(H2) / abs(inv.tau)))
            out.geq("K3 <= H^2", H2, k3, H2 + abs(k3))
            out.geq("1/K3 <= R^2", R2, 1.0 / k3, R2 + abs(1.0 / k3))
            out.geq("K2 < 0 (signature)", -k2, 0.0, 0.0 if k2 != 0 else big)
            out.geq("K3 > 0 (signature)", k3, 0.0, 0.0 if k3 != 0 else big)
    else:
        out.geq("Wintgen", H2, inv.K, s * s)
    return InequalityReport(tuple(out.records))


@dataclass(frozen=True, eq=False)
class GridCell:
    s: float
    t: float
    invariants: Invariants | None = None
    point_class: PointClass | None = None
    lqm: LocalQuadraticMap | None = None
    error: str | None = None


@dataclass(frozen=True, eq=False)
class GridResult:
    spec: SurfaceSpec
    s_values: np.ndarray
    t_values: np.ndarray
    cells: list[GridCell] = field(default_factory=list)

    @property
    def success_fraction(self) -> float:
        if not self.cells:
            return 0.0
        return sum(c.error is None for c in self.cells) / len(self.cells)

    def labels(self) -> set[str]:
        return {c.point_class.label.value for c in self.cells if c.point_class is not None}


def grid_classify(spec: SurfaceSpec, s_range, t_range, resolution: int, tol: float = DEFAULT_TOL) -> GridResult:
    """Classify every node of a resolution x resolution grid; rows run over t, then s within a row."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    s_vals = np.linspace(float(s_range[0]), float(s_range[1]), resolution)
    t_vals = np.linspace(float(t_range[0]), float(t_range[1]), resolution)
    cells = []
    for t in t_vals:
        for s in s_vals:
            try:
                lqm = local_quadratic_map_at(spec, float(s), float(t))
                cells.append(GridCell(float(s), float(t), invariants_of(lqm), classify_point(lqm, tol), lqm))
            except (CurvaturaError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                cells.append(GridCell(float(s), float(t), error=f"{type(exc).__name__}: {exc}"))
    return GridResult(spec, s_vals, t_vals, cells)
