"""Sampled curves and surfaces in the normal space, for plotting and export."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caustic import hr_loci, normal_line_foci
from .errors import UndefinedQuantityError
from .invariants import LocalQuadraticMap, gauss_form, indicatrix
from .paired import bitangency_points, paired_map
from .projective import Quadric

SIGMA_EXTENT = 2.0


@dataclass(frozen=True)
class CurveSample:
    curve_id: str
    param: float
    point: tuple[float, ...]


def _sphere_directions(dim: int, count: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = 2 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    az = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.column_stack([r * np.cos(az), r * np.sin(az), z])


def _half_directions(dim: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Directions covering each normal line once, with their parameters."""
    if dim == 1:
        return np.array([[1.0]]), np.array([0.0])
    if dim == 2:
        ang = np.pi * np.arange(count) / count
        return np.column_stack([np.cos(ang), np.sin(ang)]), ang
    d = _sphere_directions(3, 2 * count)
    keep = d[:, 2] >= 0
    return d[keep], np.flatnonzero(keep).astype(float)


def indicatrix_samples(lqm: LocalQuadraticMap, count: int, curve_id: str = "E") -> list[CurveSample]:
    ell = indicatrix(lqm)
    return [CurveSample(curve_id, float(th), tuple(ell(th))) for th in np.pi * np.arange(count) / count]


def caustic_samples(lqm: LocalQuadraticMap, count: int, curve_id: str = "C") -> list[CurveSample]:
    """Finite focal points on each normal line; the two roots form two branches."""
    out = []
    dirs, params = _half_directions(lqm.codim, count)
    for n, p in zip(dirs, params):
        foci = normal_line_foci(lqm, n).foci
        for branch, f in enumerate(foci):
            if isinstance(f, np.ndarray):
                out.append(CurveSample(f"{curve_id}.{branch}", float(p), tuple(f)))
    return out


def level_set_samples(quad: Quadric, count: int, curve_id: str) -> list[CurveSample]:
    """Points of a central quadric x^T M x = -c found along rays from the origin."""
    out = []
    for k, d in enumerate(_sphere_directions(quad.dim, count)):
        den = float(d @ quad.M @ d)
        if den == 0.0:
            continue
        r2 = -quad.c / den
        if r2 > 0:
            out.append(CurveSample(curve_id, float(k), tuple(math.sqrt(r2) * d)))
    return out


def cone_samples(matrix: np.ndarray, count: int, curve_id: str) -> list[CurveSample]:
    """Rulings of the cone {q^T M q = 0}, each sampled as a segment through the origin."""
    vals, vecs = np.linalg.eigh(matrix)
    dim = len(vals)
    rulings = []
    if dim == 2:
        if vals[0] < 0 < vals[1]:
            for sgn in (1.0, -1.0):
                d = vecs @ np.array([math.sqrt(vals[1]), sgn * math.sqrt(-vals[0])])
                rulings.append(d / np.linalg.norm(d))
    elif dim == 3:
        pos = vals > 0
        if pos.sum() in (1, 2):
            # the odd-sign eigenvalue is the axis; rulings sweep around it
            odd = int(np.flatnonzero(pos if pos.sum() == 1 else ~pos)[0])
            others = [i for i in range(3) if i != odd]
            for ang in 2 * np.pi * np.arange(count) / count:
                w = np.zeros(3)
                w[others[0]] = math.cos(ang) / math.sqrt(abs(vals[others[0]]))
                w[others[1]] = math.sin(ang) / math.sqrt(abs(vals[others[1]]))
                w[odd] = 1.0 / math.sqrt(abs(vals[odd]))
                d = vecs @ w
                rulings.append(d / np.linalg.norm(d))
    out = []
    ts = np.linspace(-SIGMA_EXTENT, SIGMA_EXTENT, 9)
    for k, d in enumerate(rulings):
        out.extend(CurveSample(f"{curve_id}.{k}", float(t), tuple(t * d)) for t in ts)
    return out


def curve_set(lqm: LocalQuadraticMap, count: int = 128) -> list[CurveSample]:
    """Indicatrix, caustic and their paired versions, H and R loci, degenerate cones, special points."""
    out = indicatrix_samples(lqm, count)
    out += caustic_samples(lqm, count)
    zero = tuple(0.0 for _ in range(lqm.codim))
    special = [CurveSample("p", 0.0, zero), CurveSample("H", 0.0, tuple(lqm.H))]
    if lqm.codim == 1:
        return out + special
    g = gauss_form(lqm).matrix
    out += cone_samples(g, count // 8 or 1, "Sigma")
    try:
        bundle = paired_map(lqm)
    except UndefinedQuantityError:
        return out + special
    out += indicatrix_samples(bundle.paired, count, "Estar")
    out += caustic_samples(bundle.paired, count, "Cstar")
    h_locus, r_locus = hr_loci(lqm)
    out += level_set_samples(h_locus, count, "H_locus")
    out += level_set_samples(r_locus, count, "R_locus")
    out += cone_samples(np.linalg.inv(g), count // 8 or 1, "Sigma_star")
    special.append(CurveSample("R", 0.0, tuple(bundle.R)))
    if lqm.codim == 2:
        bt = bitangency_points(bundle)
        special += [CurveSample("bitangency", float(lam), tuple(x)) for lam, x in zip(bt.lambdas, bt.points)]
    return out + special
