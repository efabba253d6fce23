"""The paired quadratic map phi* = G^{-1} phi and the identities it satisfies."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .caustic import EPS, ROUNDING_SLACK, _nonsingular_gauss, caustic_quadric, normal_line_foci
from .errors import UndefinedQuantityError
from .invariants import Invariants, LocalQuadraticMap, gauss_form, indicatrix, invariants_of
from .projective import polar_point_of_hyperplane
from .sl2 import QuadForm2, poisson_bracket, psi_inner

COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class PairedBundle:
    original: LocalQuadraticMap
    paired: LocalQuadraticMap
    inv: Invariants
    inv_star: Invariants
    condition: float
    unreliable: bool = False

    @property
    def R(self) -> np.ndarray:
        """Caustic centre of the original map, which is the mean curvature vector of the paired one."""
        return self.paired.H


def paired_map(lqm: LocalQuadraticMap) -> PairedBundle:
    gf = _nonsingular_gauss(lqm)
    g = gf.matrix
    rhs = np.column_stack([lqm.A, lqm.B, lqm.C])
    sol = np.linalg.solve(g, rhs)
    star = LocalQuadraticMap(sol[:, 0], sol[:, 1], sol[:, 2])
    cond = float(np.linalg.cond(g))
    return PairedBundle(lqm, star, invariants_of(lqm, gf=gf), invariants_of(star), cond, cond > COND_LIMIT)


@dataclass
class Report:
    """Named maximum residuals checked against one threshold."""

    name: str
    threshold: float
    residuals: dict[str, float] = field(default_factory=dict)

    def record(self, key: str, value: float) -> None:
        value = float(abs(value))
        if math.isnan(value):
            value = math.inf
        self.residuals[key] = max(self.residuals.get(key, 0.0), value)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.threshold

    def failures(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v > self.threshold]


def _rel(x: float, y: float, scale: float = 0.0) -> float:
    return abs(x - y) / max(abs(x), abs(y), scale, 1e-300)


def _rel_vec(x, y) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.max(np.abs(x - y))) / max(float(np.max(np.abs(x))), float(np.max(np.abs(y))), 1e-300)


def _form_close(p: QuadForm2, q: QuadForm2) -> float:
    return _rel_vec(p.coeffs(), q.coeffs())


def paired_invariant_check(bundle: PairedBundle, threshold: float = 1e-8) -> Report:
    """Spectral invariants of the paired map against their closed forms."""
    inv, st = bundle.inv, bundle.inv_star
    rep = Report("paired invariants", threshold)
    # K, N and Acal can vanish exactly: compare them on the scale of the paired spectrum
    f_star = float(np.max(np.abs(st.focal)))
    rep.record("Delta* = 1/Delta", _rel(st.Delta, 1.0 / inv.Delta))
    rep.record("focal* = 1/focal", _rel_vec(np.sort(st.focal), np.sort(1.0 / inv.focal)))
    if bundle.original.codim == 2:
        rep.record("K* = K/Delta", _rel(st.K, inv.K / inv.Delta, f_star))
        rep.record("N* = N/Delta", _rel(st.N, inv.N / inv.Delta, f_star))
        rep.record("N*^2/Delta* = N^2/Delta", _rel(st.N ** 2 / st.Delta, inv.N ** 2 / inv.Delta, f_star ** 2 / abs(st.Delta)))
    elif bundle.original.codim == 3:
        rep.record("K* = Acal/Delta", _rel(st.K, inv.Acal / inv.Delta, f_star))
        rep.record("Acal* = K/Delta", _rel(st.Acal, inv.K / inv.Delta, f_star ** 2))
        rep.record("tau* = 1/tau", _rel(st.tau, 1.0 / inv.tau))
    return rep


def caustic_samples(lqm: LocalQuadraticMap, samples: int) -> np.ndarray:
    """Finite caustic points found as focal points along sampled normal lines."""
    pts = []
    ell = lqm.codim
    if ell == 2:
        normals = [np.array([math.cos(a), math.sin(a)]) for a in np.pi * np.arange(samples) / samples]
    else:
        normals = []
        for i in range(samples):
            z = 1.0 - (2.0 * i + 1.0) / samples
            r = math.sqrt(max(0.0, 1.0 - z * z))
            az = i * math.pi * (3.0 - math.sqrt(5.0))
            normals.append(np.array([r * math.cos(az), r * math.sin(az), z]))
    floor = 1e-8 * lqm.scale()
    for n in normals:
        nf = normal_line_foci(lqm, n)
        for mu, focus in zip((nf.mu1, nf.mu2), nf.foci):
            # a focus this far out is at infinity up to rounding
            if isinstance(focus, np.ndarray) and abs(mu) > floor:
                pts.append(focus)
    return np.array(pts)


def paired_caustic_image_check(bundle: PairedBundle, samples: int = 64) -> float:
    """Max relative residual of G(C_p) on the paired caustic."""
    lqm = bundle.original
    g = gauss_form(lqm).matrix
    target = caustic_quadric(bundle.paired)
    pts = caustic_samples(lqm, samples)
    if pts.size == 0:
        return 0.0
    images = pts @ g.T
    return float(np.max(np.abs(target(images)) / target.magnitude(images)))


@dataclass(frozen=True, eq=False)
class Bitangency:
    status: str  # "real", "double", "complex" or "degenerate"
    lambdas: tuple[float, ...] = ()
    points: tuple[np.ndarray, ...] = ()


def bitangency_points(bundle: PairedBundle, tol: float = 1e-12) -> Bitangency:
    """Points lambda R where the paired indicatrix touches the caustic."""
    if bundle.original.codim != 2:
        raise ValueError("bitangency is defined for codimension 2")
    R, H = bundle.R, bundle.original.H
    rh = float(R @ H)
    if abs(rh) <= tol:
        return Bitangency("degenerate")
    disc = 1.0 - 1.0 / rh
    if disc < -tol:
        return Bitangency("complex")
    if abs(disc) <= tol:
        return Bitangency("double", (1.0,), (R.copy(),))
    root = math.sqrt(disc)
    lams = (1.0 + root, 1.0 - root)
    return Bitangency("real", lams, tuple(lam * R for lam in lams))


def on_ellipse_residual(ellipse, point) -> float:
    """|cos^2 + sin^2 - 1| for the preimage of point under the ellipse's affine chart."""
    m = np.column_stack([ellipse.u_axis, ellipse.v_axis])
    cs, *_ = np.linalg.lstsq(m, np.asarray(point) - ellipse.center, rcond=None)
    return abs(float(cs @ cs) - 1.0)


def _sample_dirs(samples: int) -> np.ndarray:
    ang = np.pi * np.arange(samples) / samples + 0.1234
    return np.column_stack([np.cos(ang), np.sin(ang)])


def component_identities_check(bundle: PairedBundle, samples: int = 16, threshold: float = 1e-9) -> Report:
    lqm, star = bundle.original, bundle.paired
    n = lqm.codim
    qs, qs_star = lqm.components(), star.components()
    scale = max(q.max_abs() for q in qs)
    scale_star = max(q.max_abs() for q in qs_star)
    rep = Report("component identities", threshold)
    for i, j in itertools.product(range(n), repeat=2):
        # <Q_i, Q_j*> is dimensionless: normalize by the coefficient scales
        err = psi_inner(qs[i], qs_star[j]) - (1.0 if i == j else 0.0)
        rep.record("<Q_i,Q_j*> = delta_ij", err / max(1.0, scale * scale_star))
    delta = bundle.inv.Delta
    if n == 3:
        tau = bundle.inv.tau
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            rep.record("Q_i* = {Q_j,Q_k}/tau", _form_close(qs_star[i], poisson_bracket(qs[j], qs[k]) / tau))
    for u in _sample_dirs(samples):
        s, t = u
        phi, phi_star = lqm(s, t), star(s, t)
        mag = float(np.linalg.norm(phi) * np.linalg.norm(phi_star))
        lhs = float(phi @ phi_star)
        if n == 2:
            rhs = -poisson_bracket(qs[0], qs[1])(s, t) ** 2 / delta
            rep.record("<phi,phi*> = -{Q1,Q2}^2/Delta", (lhs - rhs) / max(mag, abs(rhs), 1e-300))
        elif n == 3:
            rep.record("<phi,phi*> = 0", lhs / max(mag, 1e-300))
    total = [0.0, 0.0, 0.0]
    ref = 0.0
    for q, q_star in zip(qs, qs_star):
        br = poisson_bracket(q, q_star)
        total = [x + y for x, y in zip(total, br.coeffs())]
        ref = max(ref, q.max_abs() * q_star.max_abs())
    rep.record("sum {Q_i,Q_i*} = 0", max(abs(x) for x in total) / max(ref, 1e-300))
    if n == 2:
        b1, b2 = poisson_bracket(qs[0], qs_star[0]), poisson_bracket(qs[1], qs_star[1])
        rep.record("{Q1,Q1*} = -{Q2,Q2*}", (b1 + b2).max_abs() / max(ref, 1e-300))
    return rep


def paired_structure_check(bundle: PairedBundle, samples: int = 16, threshold: float = 1e-8) -> Report:
    """Involution, centre exchange, ellipse image and cone duality."""
    lqm, star = bundle.original, bundle.paired
    g = gauss_form(lqm).matrix
    rep = Report("paired structure", threshold)
    back = paired_map(star)
    rep.record("(phi*)* = phi", _rel_vec(back.paired.flat(), lqm.flat()))
    R = np.linalg.solve(g, lqm.H)
    rep.record("H = G R", _rel_vec(g @ R, lqm.H))
    rep.record("R* = H", _rel_vec(back.R, lqm.H))
    rep.record("H* = R", _rel_vec(star.H, R))
    g_star = gauss_form(star).matrix
    for u in _sample_dirs(samples):
        e, e_star = 2.0 * lqm(*u), 2.0 * star(*u)
        rep.record("G E*(u) = E(u)", _rel_vec(g @ e_star, e))
        if lqm.codim == 3:
            # normalized by |x|^2 |G|: the weighted sum vanishes with the exact value when a cofactor is zero
            rep.record("Gauss(E*(u)) = 0", float(e_star @ g @ e_star) / max(float(e_star @ e_star) * float(np.max(np.abs(g))), 1e-300))
            rep.record("Gauss*(E(u)) = 0", float(e @ g_star @ e) / max(float(e @ e) * float(np.max(np.abs(g_star))), 1e-300))
    return rep


def bitangency_check(bundle: PairedBundle, ellipse_tol: float = 1e-6) -> Report:
    rep = Report("bitangency", 1e-8)
    bt = bitangency_points(bundle)
    if bt.status != "real":
        return rep
    lqm = bundle.original
    quad = caustic_quadric(lqm)
    ell_star = indicatrix(bundle.paired)
    H = lqm.H
    # rounding in 1 - 1/<R,H> moves the points by ~eps / sqrt(disc); the ellipse chart amplifies that by its condition
    root = math.sqrt(1.0 - 1.0 / float(bundle.R @ H))
    chart_cond = float(np.linalg.cond(np.column_stack([ell_star.u_axis, ell_star.v_axis])))
    ell_scale = max(ellipse_tol, ROUNDING_SLACK * EPS * chart_cond / root)
    for x in bt.points:
        rep.record("on caustic", quad(x) / quad.magnitude(x))
        # ellipse membership is compared on its own, looser scale
        rep.record("on paired indicatrix", on_ellipse_residual(ell_star, x) * 1e-8 / ell_scale)
        grad = quad.M @ x + quad.b
        tangent = np.array([-grad[1], grad[0]])
        rep.record("tangent orthogonal to H", float(tangent @ H) / max(float(np.linalg.norm(tangent) * np.linalg.norm(H)), 1e-300))
    return rep


def sigma_star_geometry_check(bundle: PairedBundle, samples: int = 16, threshold: float = 1e-9) -> Report:
    lqm = bundle.original
    if lqm.codim != 3:
        raise ValueError("defined for codimension 3")
    gf = gauss_form(lqm)
    g, vecs = gf.matrix, gf.eigenvectors
    g_star = gauss_form(bundle.paired).matrix
    inv = bundle.inv
    rep = Report("paired cones", threshold)
    for eps in itertools.product((1.0, -1.0), repeat=3):
        x = vecs @ np.array(eps)
        rep.record("2 Gauss(eps) = K", _rel(float(x @ g @ x), inv.K, float(np.max(np.abs(gf.eigenvalues)))))
        y = inv.tau * x
        rep.record("2 Gauss*(tau eps) = Acal", _rel(float(y @ g_star @ y), inv.Acal, float(np.max(np.abs(gf.eigenvalues))) ** 2))
    for u in _sample_dirs(samples):
        phi, phi_star = lqm(*u), bundle.paired(*u)
        rep.record("rulings orthogonal", float(phi @ phi_star) / max(float(np.linalg.norm(phi) * np.linalg.norm(phi_star)), 1e-300))
    k1, k2, k3 = gf.eigenvalues
    if k1 < 0 and k2 < 0 and k3 > 0:
        # sections q3 = 1 in the principal frame are polar dual about the unit circle
        for a in np.linspace(0.0, 2 * np.pi, samples, endpoint=False):
            x = np.array([math.cos(a) * math.sqrt(-k3 / k1), math.sin(a) * math.sqrt(-k3 / k2)])
            normal = np.array([k1 * x[0], k2 * x[1]])
            offset = -k3
            pole = polar_point_of_hyperplane(normal, offset)
            val = pole[0] ** 2 / k1 + pole[1] ** 2 / k2 + 1.0 / k3
            rep.record("sections polar dual", val * k3)
    else:
        rep.record("focal signature (-, -, +)", 1.0)
    rep.record("min(K, Acal) < 0", 0.0 if min(inv.K, inv.Acal) < 0 else 1.0)
    return rep


def binormal_equivalence_report(bundle: PairedBundle, samples: int = 16, threshold: float = 1e-8) -> Report:
    """Asymptotic/binormal equivalences in codimension 2.

    For unit u, 2 Gauss(E*(u)) = <E*(u), E(u)> = -4 {Q1,Q2}(u)^2 / Delta, so the
    bracket, the binormal condition and the orthogonality vanish together; the
    tangent lines to E and E* at u pass through the origin exactly then.
    """
    lqm, star = bundle.original, bundle.paired
    if lqm.codim != 2:
        raise ValueError("defined for codimension 2")
    g = gauss_form(lqm).matrix
    q1, q2 = lqm.components()
    br = poisson_bracket(q1, q2)
    delta = bundle.inv.Delta
    rep = Report("binormal equivalences", threshold)
    ell, ell_star = indicatrix(lqm), indicatrix(star)
    for u in _sample_dirs(samples):
        theta = math.atan2(u[1], u[0])
        e, es = ell(theta), ell_star(theta)
        target = -4.0 * br(*u) ** 2 / delta
        mag = max(float(np.abs(es) @ np.abs(g) @ np.abs(es)), abs(target), 1e-300)
        rep.record("2 Gauss(E*) = -4 bracket^2/Delta", (float(es @ g @ es) - target) / mag)
        rep.record("<E*,E> = -4 bracket^2/Delta", (float(es @ e) - target) / max(float(np.abs(es) @ np.abs(e)), abs(target), 1e-300))
        # tangent through origin: det[E, E'] vanishes with the bracket
        d = ell.derivative(theta)
        ds = ell_star.derivative(theta)
        det_e = e[0] * d[1] - e[1] * d[0]
        det_es = es[0] * ds[1] - es[1] * ds[0]
        rep.record("det[E,E'] ~ bracket", _rel(det_e, 2.0 * br(*u)) if br(*u) or det_e else 0.0)
        rep.record("det[E*,E*'] ~ bracket", _rel(det_es, 2.0 * br(*u) / delta) if br(*u) or det_es else 0.0)
    return rep


def require_pairing(lqm: LocalQuadraticMap) -> PairedBundle:
    try:
        return paired_map(lqm)
    except UndefinedQuantityError as exc:
        raise UndefinedQuantityError(f"paired map undefined: {exc}") from exc
