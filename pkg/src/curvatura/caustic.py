"""Local caustic (focal set in the normal space) and its duality with the indicatrix."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import eig2, eigh_sym
from .errors import UndefinedQuantityError
from .invariants import (
    LocalQuadraticMap,
    cross3,
    dgamma_perp,
    gauss_form,
    indicatrix,
    invariants_of,
)
from .projective import (
    Point,
    PointAtInfinity,
    Quadric,
    orthonormal_complement,
    polar_point_of_hyperplane,
)
from .sl2 import poisson_bracket

SINGULAR_TOL = 1e-14
PENCIL_PLANES = 8
EPS = float(np.finfo(float).eps)
ROUNDING_SLACK = 64.0


class QuadricType(str, enum.Enum):
    # conics
    ELLIPSE = "Ellipse"
    CIRCLE = "Circle"
    HYPERBOLA = "Hyperbola"
    PARABOLA = "Parabola"
    TWO_INTERSECTING_LINES = "TwoIntersectingLines"
    TWO_PARALLEL_LINES = "TwoParallelLines"
    DOUBLE_LINE = "DoubleLine"
    LINE_AT_INFINITY = "LineAtInfinity"
    DOUBLE_LINE_AT_INFINITY = "DoubleLineAtInfinity"
    IMAGINARY_ELLIPSE = "ImaginaryEllipse"
    POINT_CONIC = "PointConic"
    IMAGINARY_PARALLEL_LINES = "ImaginaryParallelLines"
    # quadric surfaces
    ELLIPSOID = "Ellipsoid"
    IMAGINARY_ELLIPSOID = "ImaginaryEllipsoid"
    HYPERBOLOID_ONE_SHEET = "HyperboloidOneSheet"
    HYPERBOLOID_TWO_SHEETS = "HyperboloidTwoSheets"
    CONE = "Cone"
    POINT_QUADRIC = "PointQuadric"
    ELLIPTIC_PARABOLOID = "EllipticParaboloid"
    HYPERBOLIC_PARABOLOID = "HyperbolicParaboloid"
    ELLIPTIC_CYLINDER = "EllipticCylinder"
    IMAGINARY_ELLIPTIC_CYLINDER = "ImaginaryEllipticCylinder"
    HYPERBOLIC_CYLINDER = "HyperbolicCylinder"
    PARABOLIC_CYLINDER = "ParabolicCylinder"
    TWO_PLANES = "TwoPlanes"
    LINE_QUADRIC = "LineQuadric"
    TWO_PARALLEL_PLANES = "TwoParallelPlanes"
    IMAGINARY_PARALLEL_PLANES = "ImaginaryParallelPlanes"
    DOUBLE_PLANE = "DoublePlane"
    PLANE_AT_INFINITY = "PlaneAtInfinity"
    DOUBLE_PLANE_AT_INFINITY = "DoublePlaneAtInfinity"
    # the zero polynomial
    EVERYTHING = "Everything"


@dataclass(frozen=True, eq=False)
class QuadricClass:
    label: QuadricType
    center_or_vertex: Point | None = None
    origin_between: bool | None = None  # parallel lines/planes: does the origin lie between them
    rank_M: int = 0


@dataclass(frozen=True, eq=False)
class NormalLineFoci:
    mu1: float
    mu2: float
    directions: np.ndarray  # columns, unit tangent vectors
    foci: tuple[Point, Point]


def _nonsingular_gauss(lqm: LocalQuadraticMap):
    gf = gauss_form(lqm)
    mags = np.abs(gf.eigenvalues)
    # a condition test: det / max^codim would reject well-posed inverses of skewed spectra
    if mags.max() == 0.0 or mags.min() <= SINGULAR_TOL * mags.max():
        raise UndefinedQuantityError("the Gauss form is singular (Delta = 0)")
    return gf


def caustic_quadric(lqm: LocalQuadraticMap) -> Quadric:
    """(<A,q> - 1)(<C,q> - 1) - <B,q>^2 expanded into (M, b, c)."""
    A, B, C = lqm.A, lqm.B, lqm.C
    M = 0.5 * (np.outer(A, C) + np.outer(C, A)) - np.outer(B, B)
    return Quadric(M, -lqm.H, 1.0)


def caustic_center(lqm: LocalQuadraticMap, tol: float = 1e-9) -> Point | None:
    """Centre (codim 2) or vertex (codim 3) of the caustic.

    When the Gauss form is singular the centre is the ideal point along its
    one-dimensional kernel; with a larger kernel there is no unique centre and
    None is returned.
    """
    gf = gauss_form(lqm)
    g = gf.matrix
    top = float(np.max(np.abs(gf.eigenvalues)))
    small = np.abs(gf.eigenvalues) <= tol * max(top, lqm.scale() ** 2)
    if not small.any():
        return np.linalg.solve(g, lqm.H)
    if small.sum() == 1 and lqm.codim > 1:
        return PointAtInfinity(gf.eigenvectors[:, int(np.argmax(small))])
    return None


def vertex_from_cross_product(lqm: LocalQuadraticMap) -> np.ndarray:
    """(A - C) x B / (2 tau): the caustic vertex for codimension 3 with tau != 0."""
    if lqm.codim != 3:
        raise ValueError("defined for codimension 3 only")
    cr = cross3(lqm.A - lqm.C, lqm.B)
    tau = 0.5 * float(cr @ lqm.H)
    if tau == 0.0:
        raise UndefinedQuantityError("tau = 0: the vertex is at infinity")
    return cr / (2.0 * tau)


def center_from_brackets(lqm: LocalQuadraticMap) -> np.ndarray:
    """Vertex from the Poisson brackets of the components, each read by its trace."""
    q1, q2, q3 = lqm.components()
    inv = invariants_of(lqm)
    if not inv.tau:
        raise UndefinedQuantityError("tau = 0: the vertex is at infinity")
    traces = [poisson_bracket(x, y) for x, y in ((q2, q3), (q3, q1), (q1, q2))]
    return np.array([br.a + br.c for br in traces]) / (2.0 * inv.tau)


def rh_inner_expected(lqm: LocalQuadraticMap) -> float:
    """Value of <R, H> predicted from the scalar invariants."""
    inv = invariants_of(lqm)
    if lqm.codim == 2:
        if inv.Delta == 0.0:
            raise UndefinedQuantityError("Delta = 0")
        return 1.0 - inv.N ** 2 / (4.0 * inv.Delta)
    if lqm.codim == 3:
        return 1.0
    raise ValueError("defined for codimension 2 and 3")


def caustic_level_residual(lqm: LocalQuadraticMap, q) -> float:
    gf = _nonsingular_gauss(lqm)
    R = np.linalg.solve(gf.matrix, lqm.H)
    d = np.asarray(q, dtype=float) - R
    if lqm.codim == 3:
        return gf(d)
    if lqm.codim == 2:
        inv = invariants_of(lqm, gf=gf)
        return 2.0 * gf(d) + inv.N ** 2 / (4.0 * inv.Delta)
    return 2.0 * gf(d) + 1.0 - float(R @ lqm.H)


def _pencil_normals(dim: int, count: int) -> np.ndarray:
    """Deterministic spread of unit normals (rows)."""
    if dim == 1:
        return np.ones((1, 1))
    if dim == 2:
        ang = np.pi * np.arange(count) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    rows = []
    for i in range(count):
        polar = np.pi * (i + 0.5) / count
        for j in range(PENCIL_PLANES):
            az = 2 * np.pi * j / PENCIL_PLANES
            rows.append([math.sin(polar) * math.cos(az), math.sin(polar) * math.sin(az), math.cos(polar)])
    return np.array(rows)


def indicatrix_rank(lqm: LocalQuadraticMap, tol: float = 1e-9) -> int:
    """Dimension of the indicatrix: 2 ellipse, 1 segment, 0 point."""
    ell = indicatrix(lqm)
    m = np.column_stack([ell.u_axis, ell.v_axis])
    sv = np.linalg.svd(m, compute_uv=False)
    ref = max(lqm.scale(), 1e-300)
    return int(np.sum(sv > tol * ref))


def segment_endpoints(lqm: LocalQuadraticMap) -> tuple[np.ndarray, np.ndarray]:
    ell = indicatrix(lqm)
    u, v = ell.u_axis, ell.v_axis
    # project on the longer axis rather than an SVD: keeps each coordinate accurate to its own size
    ref = u if np.linalg.norm(u) >= np.linalg.norm(v) else v
    d = ref / np.linalg.norm(ref)
    half = math.hypot(float(u @ d), float(v @ d)) * d
    return ell.center - half, ell.center + half


def _pole(normal: np.ndarray, anchor: np.ndarray, scale: float) -> Point:
    """Pole of the hyperplane with this normal through anchor."""
    offset = float(normal @ anchor)
    # an anchor at the origin up to rounding gives a hyperplane through the origin
    if abs(offset) <= ROUNDING_SLACK * EPS * float(np.linalg.norm(normal)) * scale:
        offset = 0.0
    return polar_point_of_hyperplane(normal, offset)


def dual_of_indicatrix(lqm: LocalQuadraticMap, samples: int = 16, tol: float = 1e-9) -> list[Point]:
    """Poles of hyperplanes tangent to the indicatrix, sampled.

    A degenerate indicatrix (segment or point) is dual to the pencils of
    hyperplanes through its endpoints, which are sampled instead.
    """
    if samples < 8:
        raise ValueError("need at least 8 samples")
    ell = indicatrix(lqm)
    rank = indicatrix_rank(lqm, tol)
    poles: list[Point] = []
    if rank == 2:
        for k in range(samples):
            theta = np.pi * k / samples
            e = ell(theta)
            d = ell.derivative(theta)
            if lqm.codim == 2:
                normals = np.array([[-d[1], d[0]]])
            else:
                m = orthonormal_complement(d)
                ang = np.pi * np.arange(PENCIL_PLANES) / PENCIL_PLANES
                normals = np.outer(np.cos(ang), m[0]) + np.outer(np.sin(ang), m[1])
            poles.extend(_pole(n, e, lqm.scale()) for n in normals)
        return poles
    anchors = [ell.center] if rank == 0 else list(segment_endpoints(lqm))
    for a in anchors:
        for n in _pencil_normals(lqm.codim, samples):
            poles.append(_pole(n, a, lqm.scale()))
    return poles


def normal_line_foci(lqm: LocalQuadraticMap, n) -> NormalLineFoci:
    n = np.atleast_1d(np.asarray(n, dtype=float))
    d = dgamma_perp(lqm, n)
    mu, vecs = eig2(d)
    # an eigenvalue at rounding level of dgamma puts the focus at infinity
    floor = ROUNDING_SLACK * EPS * float(np.linalg.norm(n)) * lqm.scale()
    foci = tuple(PointAtInfinity(n) if abs(m) <= floor else n / m for m in mu)
    return NormalLineFoci(float(mu[0]), float(mu[1]), vecs, foci)


def sigma_cones(lqm: LocalQuadraticMap) -> tuple[Quadric, Quadric]:
    """Cones of degenerate normal vectors for the Gauss form and its paired form."""
    gf = _nonsingular_gauss(lqm)
    zero = np.zeros(lqm.codim)
    g_inv = np.linalg.solve(gf.matrix, np.eye(lqm.codim))
    return Quadric(gf.matrix, zero, 0.0), Quadric(g_inv, zero, 0.0)


def sigma_cone(lqm: LocalQuadraticMap) -> Quadric:
    return Quadric(gauss_form(lqm).matrix, np.zeros(lqm.codim), 0.0)


def hr_loci(lqm: LocalQuadraticMap) -> tuple[Quadric, Quadric]:
    """Loci of the mean curvature vector and of the caustic centre for fixed invariants."""
    if lqm.codim not in (2, 3):
        raise ValueError("defined for codimension 2 and 3")
    gf = _nonsingular_gauss(lqm)
    level = rh_inner_expected(lqm)
    zero = np.zeros(lqm.codim)
    g_inv = np.linalg.solve(gf.matrix, np.eye(lqm.codim))
    return Quadric(g_inv, zero, -level), Quadric(gf.matrix, zero, -level)


def tangent_hyperplane(quadric: Quadric, point) -> tuple[np.ndarray, float]:
    """Tangent hyperplane at a point of the quadric, as (normal, offset)."""
    point = np.asarray(point, dtype=float)
    normal = quadric.M @ point + quadric.b
    return normal, -(float(quadric.b @ point) + quadric.c)


def classify_quadric(q: Quadric, tol: float = 1e-8, atol: float = 1e-12) -> QuadricClass:
    """Affine type of a conic (n = 2) or quadric surface (n = 3).

    The quadratic part is diagonalized, squares are completed on its range,
    and the type follows from the rank and signs of the quadratic part, the
    leftover linear part on its kernel, and the reduced constant. Relative
    decisions use ``tol``; ``atol`` is the floor below which the whole
    quadratic and linear part count as zero.
    """
    n = q.dim
    if n not in (2, 3):
        raise ValueError("classification is implemented for conics and quadric surfaces")
    vals, vecs = eigh_sym(q.M)
    beta = vecs.T @ q.b
    ref_m = max(float(np.max(np.abs(q.M))), float(np.max(np.abs(q.b))) ** 2)
    if ref_m <= atol * atol:
        ref_m = 0.0
    nonzero = np.abs(vals) > tol * ref_m if ref_m > 0 else np.zeros(n, dtype=bool)
    r = int(nonzero.sum())
    lam = vals[nonzero]
    beta0 = beta[~nonzero]
    terms = beta[nonzero] ** 2 / lam
    if r == n:
        # a backward-stable solve keeps the cancellation error near eps * cond
        completed = float(q.b @ np.linalg.solve(q.M, q.b))
    else:
        completed = float(np.sum(terms)) if r else 0.0
    c_red = q.c - completed
    lin_ref = max(float(np.linalg.norm(q.b)), math.sqrt(ref_m))
    # kernel vectors are only accurate to ~eps * |M| / (smallest kept eigenvalue)
    lin_rounding = ROUNDING_SLACK * EPS * float(np.max(np.abs(lam)) / np.min(np.abs(lam))) * float(np.linalg.norm(q.b)) if r else 0.0
    has_linear = beta0.size > 0 and float(np.linalg.norm(beta0)) > max(tol * lin_ref, lin_rounding)
    # the completed terms can cancel; each carries the relative error of its eigenvalue
    rounding = ROUNDING_SLACK * EPS * float(np.sum(np.abs(terms) * np.max(np.abs(lam)) / np.abs(lam))) if r else 0.0
    has_const = abs(c_red) > max(tol * max(abs(q.c), float(np.sum(np.abs(terms))), 1e-300), rounding)
    pos, neg = int(np.sum(lam > 0)), int(np.sum(lam < 0))
    kernel = vecs[:, ~nonzero].T

    center: Point | None = None
    if r == n:
        center = vecs @ (-beta / vals)
    elif r == n - 1:
        center = PointAtInfinity(kernel[0])
    elif r == 1 and n == 3 and has_linear:
        # ruling direction of a parabolic cylinder: the kernel direction without linear term
        k0 = beta0 / np.linalg.norm(beta0)
        center = PointAtInfinity(kernel.T @ np.array([-k0[1], k0[0]]))

    T = QuadricType
    between = None
    if n == 2:
        if r == 2:
            if has_const:
                if pos == 2 or neg == 2:
                    real = (pos == 2) == (c_red < 0)
                    circle = abs(lam[0] - lam[1]) <= tol * float(np.max(np.abs(lam)))
                    label = (T.CIRCLE if circle else T.ELLIPSE) if real else T.IMAGINARY_ELLIPSE
                else:
                    label = T.HYPERBOLA
            else:
                label = T.TWO_INTERSECTING_LINES if pos == 1 else T.POINT_CONIC
        elif r == 1:
            if has_linear:
                label = T.PARABOLA
            elif has_const:
                real = lam[0] * c_red < 0
                label = T.TWO_PARALLEL_LINES if real else T.IMAGINARY_PARALLEL_LINES
                between = bool(lam[0] * q.c < 0) if real else None
            else:
                label = T.DOUBLE_LINE
        else:
            if ref_m > 0:
                label = T.LINE_AT_INFINITY
            elif q.c != 0:
                label = T.DOUBLE_LINE_AT_INFINITY
            else:
                label = T.EVERYTHING
        return QuadricClass(label, center, between, r)

    if r == 3:
        if has_const:
            # sum lam_i z_i^2 = -c_red
            k = -c_red
            same = pos if k > 0 else neg
            if pos == 3 or neg == 3:
                label = T.ELLIPSOID if same == 3 else T.IMAGINARY_ELLIPSOID
            else:
                label = T.HYPERBOLOID_ONE_SHEET if same == 2 else T.HYPERBOLOID_TWO_SHEETS
        else:
            label = T.POINT_QUADRIC if (pos == 3 or neg == 3) else T.CONE
    elif r == 2:
        definite = pos == 2 or neg == 2
        if has_linear:
            label = T.ELLIPTIC_PARABOLOID if definite else T.HYPERBOLIC_PARABOLOID
        elif has_const:
            if definite:
                real = (pos == 2) == (c_red < 0)
                label = T.ELLIPTIC_CYLINDER if real else T.IMAGINARY_ELLIPTIC_CYLINDER
            else:
                label = T.HYPERBOLIC_CYLINDER
        else:
            label = T.LINE_QUADRIC if definite else T.TWO_PLANES
    elif r == 1:
        if has_linear:
            label = T.PARABOLIC_CYLINDER
        elif has_const:
            real = lam[0] * c_red < 0
            label = T.TWO_PARALLEL_PLANES if real else T.IMAGINARY_PARALLEL_PLANES
            between = bool(lam[0] * q.c < 0) if real else None
        else:
            label = T.DOUBLE_PLANE
    else:
        if ref_m > 0:
            label = T.PLANE_AT_INFINITY
        elif q.c != 0:
            label = T.DOUBLE_PLANE_AT_INFINITY
        else:
            label = T.EVERYTHING
    return QuadricClass(label, center, between, r)


@dataclass(frozen=True, eq=False)
class AsymptoticDirection:
    theta: float  # tangent direction angle, mod pi
    direction: np.ndarray  # unit tangent vector (cos theta, sin theta)
    focal_at_infinity: PointAtInfinity | None  # the focal centre of this contact direction
    tangency_point: np.ndarray  # E(theta): its tangent line passes through the origin
    asymptote_point: np.ndarray | None = None  # a point of the caustic asymptote (the centre R)


@dataclass(frozen=True, eq=False)
class AsymptoticDirections:
    directions: list[AsymptoticDirection] = field(default_factory=list)
    all_directions: bool = False

    def __len__(self) -> int:
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)


def asymptotic_directions_r4(lqm: LocalQuadraticMap, tol: float = 1e-9) -> AsymptoticDirections:
    """Tangent directions where the Poisson bracket of the two components vanishes."""
    if lqm.codim != 2:
        raise ValueError("asymptotic directions from the quadratic map need codimension 2")
    q1, q2 = lqm.components()
    br = poisson_bracket(q1, q2)
    scale = lqm.scale() ** 2
    if br.max_abs() <= tol * scale:
        return AsymptoticDirections([], all_directions=True)
    vals, vecs = eig2(np.array([[br.a, br.b], [br.b, br.c]]))
    top = float(np.max(np.abs(vals)))
    zero = np.abs(vals) <= tol * top
    if zero.any():
        dirs = [vecs[:, int(np.argmax(zero))]]
    elif vals[0] < 0 < vals[1]:
        alpha = math.atan(math.sqrt(-vals[0] / vals[1]))
        dirs = [math.cos(alpha) * vecs[:, 0] + sgn * math.sin(alpha) * vecs[:, 1] for sgn in (1.0, -1.0)]
    else:
        return AsymptoticDirections([])
    ell = indicatrix(lqm)
    center = caustic_center(lqm)
    out = []
    for d in dirs:
        theta = math.atan2(d[1], d[0]) % math.pi
        e = ell(theta)
        asym = center if isinstance(center, np.ndarray) else None
        out.append(AsymptoticDirection(
            theta,
            np.array([math.cos(theta), math.sin(theta)]),
            PointAtInfinity(np.array([-e[1], e[0]])) if np.any(e) else None,
            e,
            asym,
        ))
    out.sort(key=lambda a: a.theta)
    return AsymptoticDirections(out)
