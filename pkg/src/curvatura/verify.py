"""Seeded randomized property suites and surface oracles, run by ``curvatura verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .caustic import caustic_quadric, dual_of_indicatrix
from .classify import classify_point, inequality_report
from .errors import CurvaturaError
from .invariants import LocalQuadraticMap, gauss_form, invariants_of, psi_summary
from .jets import SurfaceSpec
from .oracle import OracleReport, curvature_vector_oracle, eigen_oracle, focal_set_oracle
from .paired import (
    component_identities_check,
    paired_caustic_image_check,
    paired_invariant_check,
    paired_map,
    paired_structure_check,
)
from .sl2 import W, QuadForm2, poisson_bracket, psi_inner

DEFAULT_SEED = 20240517
COEFF_RANGE = 2.0
MIN_DELTA = 1e-6
IDENTITY_TOL = 1e-8
INEQUALITY_SLACK = 1e-10
EPS = float(np.finfo(float).eps)


@dataclass
class PropertyResult:
    name: str
    threshold: float
    max_residual: float = 0.0
    samples: int = 0
    failures: int = 0

    def add(self, residual: float, failed: bool | None = None) -> None:
        residual = float(abs(residual))
        if math.isnan(residual):
            residual = math.inf
        self.max_residual = max(self.max_residual, residual)
        self.samples += 1
        if failed if failed is not None else residual > self.threshold:
            self.failures += 1

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {"name": self.name, "max_residual": self.max_residual, "threshold": self.threshold,
                "samples": self.samples, "failures": self.failures, "passed": self.passed}


def random_map(rng: np.random.Generator, codim: int, bound: float = COEFF_RANGE) -> LocalQuadraticMap:
    return LocalQuadraticMap(*rng.uniform(-bound, bound, size=(3, codim)))


def random_maps(rng: np.random.Generator, count: int, codim: int, min_delta: float = 0.0) -> list[LocalQuadraticMap]:
    out = []
    while len(out) < count:
        m = random_map(rng, codim)
        if min_delta and abs(invariants_of(m).Delta) <= min_delta:
            continue
        out.append(m)
    return out


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1))
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotate_map(lqm: LocalQuadraticMap, tangent_angle: float, normal_rot: np.ndarray) -> LocalQuadraticMap:
    """phi'(u) = O phi(R u) for the tangent rotation R by tangent_angle and normal rotation O."""
    c, s = math.cos(tangent_angle), math.sin(tangent_angle)
    R = np.array([[c, -s], [s, c]])
    S = np.array([[lqm.A, lqm.B], [lqm.B, lqm.C]])  # (2, 2, codim)
    S2 = np.einsum("ki,lj,kln->ijn", R, R, S)
    O = np.asarray(normal_rot)
    return LocalQuadraticMap(O @ S2[0, 0], O @ S2[0, 1], O @ S2[1, 1])


def _rel(x: float, y: float, scale: float = 0.0) -> float:
    return abs(x - y) / max(abs(x), abs(y), scale, 1e-300)


def _rel_vec(x, y) -> float:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(np.max(np.abs(x - y))) / max(float(np.max(np.abs(x))), float(np.max(np.abs(y))), 1e-300)


def frame_invariants(lqm: LocalQuadraticMap) -> dict[str, float]:
    """Quantities that must not change under tangent and normal rotations."""
    inv = invariants_of(lqm)
    out = {"K": inv.K, "Delta": inv.Delta, "|N|": abs(inv.N), "|H|": float(np.linalg.norm(inv.H))}
    for k, v in enumerate(np.sort(inv.focal)):
        out[f"focal_{k}"] = float(v)
    if lqm.codim == 3:
        out["Acal"] = inv.Acal
        out["|tau|"] = abs(inv.tau)
    if lqm.codim > 1 and abs(inv.Delta) > MIN_DELTA:
        g = gauss_form(lqm).matrix
        out["|R|"] = float(np.linalg.norm(np.linalg.solve(g, lqm.H)))
    return out


def identity_suite(rng: np.random.Generator, count: int) -> list[PropertyResult]:
    res = {name: PropertyResult(name, IDENTITY_TOL) for name in (
        "bracket pseudo-orthogonality",
        "K = sum of psi norms",
        "Delta = psi norm of bracket",
        "N = trace of bracket",
        "Acal = sum of bracket psi norms",
        "tau^2 = Delta",
        "H = G R",
        "<R,H> level",
        "paired invariants",
        "component identities",
        "paired structure",
        "paired caustic image",
        "poles of tangent hyperplanes lie on the caustic",
    )}
    for codim in (2, 3):
        for lqm in random_maps(rng, count, codim, MIN_DELTA):
            qs = lqm.components()
            for i in range(codim):
                for j in range(i + 1, codim):
                    br = poisson_bracket(qs[i], qs[j])
                    for q in (qs[i], qs[j]):
                        mag = br.max_abs() * q.max_abs()
                        res["bracket pseudo-orthogonality"].add(psi_inner(br, q) / max(mag, 1e-300))
            inv = invariants_of(lqm)
            ps = psi_summary(lqm)
            s2 = lqm.scale() ** 2
            res["K = sum of psi norms"].add(_rel(inv.K, ps.K, s2))
            if codim == 2:
                res["Delta = psi norm of bracket"].add(_rel(inv.Delta, ps.Delta, s2 * s2))
                res["N = trace of bracket"].add(_rel(inv.N, ps.N, s2))
            else:
                res["Acal = sum of bracket psi norms"].add(_rel(inv.Acal, ps.Acal, s2 * s2))
                res["tau^2 = Delta"].add(_rel(inv.tau ** 2, inv.Delta))
            bundle = paired_map(lqm)
            g = gauss_form(lqm).matrix
            R = bundle.R
            res["H = G R"].add(_rel_vec(g @ R, lqm.H))
            level = 1.0 - inv.N ** 2 / (4.0 * inv.Delta) if codim == 2 else 1.0
            mag = float(np.abs(R) @ np.abs(lqm.H))
            res["<R,H> level"].add((float(R @ lqm.H) - level) / max(mag, abs(level), 1e-300))
            # Delta* goes through G^-1 twice, so its rounding error grows like cond^2
            allowed = max(IDENTITY_TOL, 10.0 * bundle.condition ** 2 * EPS)
            rep = paired_invariant_check(bundle, threshold=allowed)
            res["paired invariants"].add(rep.max_residual, failed=not rep.passed)
            res["component identities"].add(component_identities_check(bundle, samples=8).max_residual)
            res["paired structure"].add(paired_structure_check(bundle, samples=8).max_residual)
            res["paired caustic image"].add(paired_caustic_image_check(bundle, samples=8))
            quad = caustic_quadric(lqm)
            worst = max(quad.relative_residual(p) for p in dual_of_indicatrix(lqm, samples=8))
            res["poles of tangent hyperplanes lie on the caustic"].add(worst)
    return [r for r in res.values() if r.samples]


def psi_frame_property() -> PropertyResult:
    prop = PropertyResult("psi frame W, X, Y", 0.0)
    X, Y = QuadForm2(1.0, 0.0, -1.0), QuadForm2(0.0, 1.0, 0.0)
    expected = {(0, 0): 1.0, (1, 1): -1.0, (2, 2): -1.0}
    frame = (W, X, Y)
    for i in range(3):
        for j in range(3):
            prop.add(psi_inner(frame[i], frame[j]) - expected.get((i, j), 0.0))
    return prop


def inequality_suite(rng: np.random.Generator, count: int) -> PropertyResult:
    prop = PropertyResult("inequality battery", INEQUALITY_SLACK)
    for codim in (2, 3):
        for lqm in random_maps(rng, count, codim, MIN_DELTA):
            for rec in inequality_report(lqm, tol=INEQUALITY_SLACK):
                prop.add(max(0.0, -rec.slack), failed=not rec.holds)
    return prop


def classification_suite(rng: np.random.Generator, count: int) -> PropertyResult:
    prop = PropertyResult("classification matches caustic type", 0.0)
    for codim in (2, 3):
        for lqm in random_maps(rng, count, codim):
            pc = classify_point(lqm)
            prop.add(0.0 if pc.caustic_consistent else 1.0)
    return prop


def frame_suite(rng: np.random.Generator, count: int) -> PropertyResult:
    prop = PropertyResult("frame invariance", IDENTITY_TOL)
    for codim in (1, 2, 3):
        for lqm in random_maps(rng, count, codim):
            moved = rotate_map(lqm, rng.uniform(0, 2 * math.pi), random_rotation(rng, codim))
            a, b = frame_invariants(lqm), frame_invariants(moved)
            scale = lqm.scale()
            for key in a.keys() & b.keys():
                power = 4 if key == "Delta" and codim == 2 else 6 if key == "Delta" else 2
                prop.add(_rel(a[key], b[key], scale ** power * 1e-6))
            prop.add(0.0 if classify_point(lqm).label == classify_point(moved).label else 1.0)
    return prop


def eigen_suite(rng: np.random.Generator, count: int) -> PropertyResult:
    prop = PropertyResult("eigen oracle", 1e-9)
    for codim in (2, 3):
        for lqm in random_maps(rng, count, codim):
            prop.add(eigen_oracle(gauss_form(lqm)).max_residual)
    return prop


def random_polynomial_surface(rng: np.random.Generator, codim: int, name: str = "random") -> SurfaceSpec:
    """Graph-like polynomial surface of degree <= 3 with coefficients on a 1e-3 grid."""
    monomials = ["s^2", "s*t", "t^2", "s^3", "s^2*t", "s*t^2", "t^3"]

    def poly(bound: float) -> str:
        coeffs = np.round(rng.uniform(-bound, bound, size=len(monomials)), 3)
        return " + ".join(f"({float(c)!r})*{m}" for c, m in zip(coeffs, monomials))

    comps = [f"s + {poly(0.2)}", f"t + {poly(0.2)}"] + [poly(1.0) for _ in range(codim)]
    return SurfaceSpec.from_strings(comps, name=f"{name}-{codim}")


def random_transcendental_surface(rng: np.random.Generator, codim: int, name: str = "random") -> SurfaceSpec:
    """Graph with sin and exp normal components, so second differences carry an O(h^2) error."""
    def comp() -> str:
        a, d = np.round(rng.uniform(0.5, 1.0, size=2), 3)
        b, c, e = np.round(rng.uniform(0.5, 1.5, size=3), 3)
        return f"({float(a)!r})*sin({float(b)!r}*s + {float(c)!r}*t) + ({float(d)!r})*exp({float(e)!r}*s)"

    return SurfaceSpec.from_strings(["s", "t"] + [comp() for _ in range(codim)], name=f"{name}-{codim}")


def step_halving_ratio(spec: SurfaceSpec, s0: float, t0: float, h: float) -> float:
    """Ratio of curvature-oracle residuals at steps h and h/2, summed over four directions."""
    thetas = np.linspace(0.0, math.pi, 4, endpoint=False)
    coarse = sum(curvature_vector_oracle(spec, s0, t0, float(th), h=h).max_residual for th in thetas)
    fine = sum(curvature_vector_oracle(spec, s0, t0, float(th), h=h / 2).max_residual for th in thetas)
    return coarse / fine if fine > 0 else math.inf


def oracle_suite(rng: np.random.Generator, count: int, grid_n: int = 101, h: float = 1e-4) -> tuple[list[PropertyResult], list[OracleReport]]:
    curv = PropertyResult("curvature vector oracle", 1e-5)
    focal = PropertyResult("focal set oracle", 0.0)
    halving = PropertyResult("curvature oracle step halving", 1.0)
    reports = []
    for k in range(count):
        codim = (1, 2, 3)[k % 3]
        spec = random_polynomial_surface(rng, codim)
        s0, t0 = (float(x) for x in np.round(rng.uniform(-0.2, 0.2, size=2), 3))
        for theta in np.linspace(0.0, math.pi, 4, endpoint=False):
            rep = curvature_vector_oracle(spec, s0, t0, float(theta), h=h)
            curv.add(rep.max_residual, failed=not rep.passed)
        rep = focal_set_oracle(spec, s0, t0, grid_n=grid_n, h=max(h, 1e-3))
        focal.add(rep.max_residual, failed=not rep.passed)
        reports.append(rep)
        # central differences are exact on cubics, so the convergence order is read off a transcendental twin
        ratio = step_halving_ratio(random_transcendental_surface(rng, codim), s0, t0, 1e-2)
        halving.add(ratio - 4.0, failed=not 3.0 <= ratio <= 5.0)
    return [curv, focal, halving], reports


def surface_oracles(spec: SurfaceSpec, s0: float, t0: float) -> list[OracleReport]:
    reports = [curvature_vector_oracle(spec, s0, t0, float(th)) for th in np.linspace(0.0, math.pi, 4, endpoint=False)]
    reports.append(focal_set_oracle(spec, s0, t0))
    return reports


@dataclass
class VerifySummary:
    seed: int
    properties: list[PropertyResult] = field(default_factory=list)
    oracles: list[OracleReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties) and all(o.passed for o in self.oracles)

    def first_failure(self) -> str | None:
        for p in self.properties:
            if not p.passed:
                return p.name
        for o in self.oracles:
            if not o.passed:
                return o.name
        return None


def run_verify(seed: int = DEFAULT_SEED, maps: int = 1000, surfaces: int = 6,
               spec: SurfaceSpec | None = None, at: tuple[float, float] = (0.0, 0.0)) -> VerifySummary:
    rng = np.random.default_rng(seed)
    summary = VerifySummary(seed)
    summary.properties.extend(identity_suite(rng, maps))
    summary.properties.append(psi_frame_property())
    summary.properties.append(inequality_suite(rng, maps))
    summary.properties.append(classification_suite(rng, maps))
    summary.properties.append(frame_suite(rng, maps // 4 or 1))
    summary.properties.append(eigen_suite(rng, maps // 4 or 1))
    props, reports = oracle_suite(rng, surfaces)
    summary.properties.extend(props)
    if spec is not None:
        try:
            summary.oracles.extend(surface_oracles(spec, *at))
        except CurvaturaError as exc:
            summary.oracles.append(OracleReport("surface oracles", math.inf, 0, False, 0.0, {"error": str(exc)}))
    return summary
