"""Plain-dict reports assembled from the analysis layers; the CLI serializes them."""

from __future__ import annotations

import numpy as np

from .caustic import caustic_center
from .classify import GridResult, PointClass4, PointClass5, classify_point, inequality_report
from .curves import CurveSample
from .errors import UndefinedQuantityError
from .expr import to_source
from .invariants import LocalQuadraticMap, gauss_form, invariants_of
from .io import fmt_num
from .jets import SurfaceSpec, local_quadratic_map_at
from .paired import paired_map
from .projective import PointAtInfinity
from .verify import VerifySummary

SCHEMA_VERSION = 1


def surface_dict(spec: SurfaceSpec) -> dict:
    return {"name": spec.name, "ambient_dim": spec.ambient_dim, "components": [to_source(c) for c in spec.components]}


def class_dict(pc) -> dict:
    out = {"label": pc.label.value, "boundary_warning": bool(pc.boundary_warning)}
    if isinstance(pc, (PointClass4, PointClass5)):
        cz = pc.caustic
        out["caustic"] = {
            "type": cz.label.value,
            "center": cz.center_or_vertex,
            "origin_between": cz.origin_between,
            "rank": cz.rank_M,
            "consistent": bool(pc.caustic_consistent),
        }
        out["centered"] = bool(pc.centered)
    if isinstance(pc, PointClass4):
        out["circle_caustic"] = bool(pc.circle_caustic)
        out["position"] = pc.position
    if isinstance(pc, PointClass5):
        out["tau_sign"] = pc.tau_sign
        out["M_stratum"] = pc.M_stratum
        out["section"] = pc.section.value if pc.section is not None else None
    return out


def lqm_report(lqm: LocalQuadraticMap, tol: float, require_paired: bool = False) -> dict:
    inv = invariants_of(lqm, tol)
    gf = gauss_form(lqm)
    center = caustic_center(lqm, tol)
    pc = classify_point(lqm, tol)
    out = {
        "codim": lqm.codim,
        "A": lqm.A, "B": lqm.B, "C": lqm.C,
        "K": inv.K, "Delta": inv.Delta, "N": inv.N,
        "Acal": inv.Acal, "tau": inv.tau,
        "n_sign_indeterminate": bool(inv.n_sign_indeterminate),
        "H": inv.H, "Hnorm": float(np.linalg.norm(inv.H)),
        "focal_curvatures": gf.eigenvalues,
        "principal_basis": gf.eigenvectors.T,
        "R": center,
        "RH_inner": float(center @ lqm.H) if isinstance(center, np.ndarray) else None,
        "class": pc.label.value,
        "classification": class_dict(pc),
        "inequalities": [
            {"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack, "holds": bool(r.holds)}
            for r in inequality_report(lqm)
        ],
        "paired": None,
        "paired_error": None,
    }
    if isinstance(center, PointAtInfinity):
        out["RH_inner"] = None
    try:
        bundle = paired_map(lqm)
    except UndefinedQuantityError as exc:
        if require_paired:
            raise
        out["paired_error"] = str(exc)
        return out
    st = bundle.inv_star
    out["paired"] = {
        "A": bundle.paired.A, "B": bundle.paired.B, "C": bundle.paired.C,
        "K": st.K, "Delta": st.Delta, "N": st.N, "Acal": st.Acal, "tau": st.tau,
        "H": bundle.paired.H,
        "focal_curvatures": st.focal,
        "condition": bundle.condition,
        "unreliable": bool(bundle.unreliable),
    }
    return out


def point_report(spec: SurfaceSpec, s: float, t: float, tol: float, require_paired: bool = False) -> dict:
    lqm = local_quadratic_map_at(spec, s, t)
    return {"command": "point", "schema_version": SCHEMA_VERSION, "surface": surface_dict(spec),
            "point": [s, t], **lqm_report(lqm, tol, require_paired)}


GRID_BASE = ["s", "t", "K", "N", "Delta"]
GRID_TAIL = ["Hnorm", "class_label", "boundary_warning", "error"]


def grid_columns(codim: int) -> list[str]:
    return GRID_BASE + (["Acal", "tau"] if codim == 3 else []) + GRID_TAIL


def grid_rows(result: GridResult) -> list[dict]:
    rows = []
    for c in result.cells:
        row = {"s": c.s, "t": c.t, "K": None, "N": None, "Delta": None, "Acal": None, "tau": None,
               "Hnorm": None, "class_label": None, "boundary_warning": None, "error": c.error}
        if c.invariants is not None:
            inv = c.invariants
            row.update(K=inv.K, N=inv.N, Delta=inv.Delta, Acal=inv.Acal, tau=inv.tau,
                       Hnorm=float(np.linalg.norm(inv.H)))
        if c.point_class is not None:
            row["class_label"] = c.point_class.label.value
            row["boundary_warning"] = bool(c.point_class.boundary_warning)
        rows.append(row)
    return rows


def grid_csv(result: GridResult) -> str:
    cols = grid_columns(result.spec.codim)
    lines = [",".join(cols)]
    for row in grid_rows(result):
        cells = []
        for k in cols:
            v = row[k]
            if isinstance(v, str):
                cells.append('"' + v.replace('"', '""') + '"' if ("," in v or '"' in v) else v)
            else:
                cells.append(fmt_num(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def grid_report(result: GridResult) -> dict:
    return {"command": "grid", "schema_version": SCHEMA_VERSION, "surface": surface_dict(result.spec),
            "resolution": len(result.s_values), "success_fraction": result.success_fraction,
            "rows": grid_rows(result)}


def curves_csv(samples: list[CurveSample], codim: int) -> str:
    cols = ["curve_id", "param"] + [f"q{i + 1}" for i in range(codim)]
    lines = [",".join(cols)]
    for s in samples:
        lines.append(",".join([s.curve_id, fmt_num(s.param)] + [fmt_num(v) for v in s.point]))
    return "\n".join(lines) + "\n"


def curves_report(spec: SurfaceSpec, point, samples: list[CurveSample]) -> dict:
    return {"command": "curves", "schema_version": SCHEMA_VERSION, "surface": surface_dict(spec),
            "point": list(point),
            "samples": [{"curve_id": s.curve_id, "param": s.param, "q": list(s.point)} for s in samples]}


def verify_report(summary: VerifySummary) -> dict:
    return {
        "command": "verify",
        "schema_version": SCHEMA_VERSION,
        "seed": summary.seed,
        "passed": summary.passed,
        "first_failure": summary.first_failure(),
        "properties": [p.as_dict() for p in summary.properties],
        "oracles": [
            {"name": o.name, "max_residual": o.max_residual, "samples": o.samples, "passed": o.passed,
             "threshold": o.threshold, "details": o.details}
            for o in summary.oracles
        ],
    }


def verify_csv(summary: VerifySummary) -> str:
    lines = ["name,max_residual,threshold,samples,failures,passed"]
    for p in summary.properties:
        lines.append(",".join([p.name.replace(",", ";"), fmt_num(p.max_residual), fmt_num(p.threshold),
                               str(p.samples), str(p.failures), "true" if p.passed else "false"]))
    for o in summary.oracles:
        lines.append(",".join([o.name.replace(",", ";"), fmt_num(o.max_residual), fmt_num(o.threshold),
                               str(o.samples), "0" if o.passed else "1", "true" if o.passed else "false"]))
    return "\n".join(lines) + "\n"


def flat_csv(report: dict) -> str:
    """key,value rows for a nested report; list entries get an index suffix."""
    rows = ["key,value"]

    def walk(prefix: str, v) -> None:
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else k, x)
        elif isinstance(v, list):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        elif isinstance(v, str):
            rows.append(f'{prefix},"{v}"' if "," in v else f"{prefix},{v}")
        elif v is None:
            rows.append(f"{prefix},")
        else:
            rows.append(f"{prefix},{fmt_num(v)}")

    walk("", report)
    return "\n".join(rows) + "\n"
