"""Minimal SVG views of curve samples and grid strata. CSV and JSON remain the data contract."""

from __future__ import annotations

from collections import defaultdict
from xml.sax.saxutils import escape

from .curves import CurveSample

SIZE = 600
VIEW_LIMIT = 5.0

CURVE_COLORS = {
    "E": "#1f77b4",
    "C": "#d62728",
    "Estar": "#2ca02c",
    "Cstar": "#9467bd",
    "H_locus": "#8c564b",
    "R_locus": "#e377c2",
    "Sigma": "#7f7f7f",
    "Sigma_star": "#bcbd22",
}
POINT_COLORS = {"p": "#000000", "H": "#1f77b4", "R": "#d62728", "bitangency": "#ff7f0e"}

CLASS_COLORS = {
    "Elliptic": "#4e79a7",
    "Hyperbolic": "#e15759",
    "Parabolic": "#f28e2b",
    "Semiumbilic": "#76b7b2",
    "InflectionReal": "#59a14f",
    "InflectionImaginary": "#edc948",
    "InflectionFlat": "#b07aa1",
    "Umbilic": "#ff9da7",
    "FlatUmbilic": "#bab0ac",
    "PseudoElliptic": "#4e79a7",
    "PseudoHyperbolic": "#e15759",
    "PseudoParabolic": "#f28e2b",
    "FlatElliptic": "#a0cbe8",
    "FlatHyperbolic": "#ff9d9a",
    "FlatParabolic": "#ffbe7d",
    "error": "#000000",
}


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def curves_svg(samples: list[CurveSample]) -> str:
    """Projection onto the first two normal coordinates."""
    pts = [s for s in samples if max(abs(v) for v in s.point) <= VIEW_LIMIT]
    xs = [s.point[0] for s in pts] or [0.0]
    ys = [(s.point[1] if len(s.point) > 1 else 0.0) for s in pts] or [0.0]
    lo = min(min(xs), min(ys), -1.0)
    hi = max(max(xs), max(ys), 1.0)
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad
    k = SIZE / (hi - lo)

    def xy(p) -> tuple[str, str]:
        y = p[1] if len(p) > 1 else 0.0
        return _fmt((p[0] - lo) * k), _fmt((hi - y) * k)

    groups: dict[str, list[CurveSample]] = defaultdict(list)
    for s in pts:
        groups[s.curve_id].append(s)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
             '<rect width="100%" height="100%" fill="white"/>']
    ox, oy = xy((0.0, 0.0))
    lines.append(f'<line x1="0" y1="{oy}" x2="{SIZE}" y2="{oy}" stroke="#dddddd"/>')
    lines.append(f'<line x1="{ox}" y1="0" x2="{ox}" y2="{SIZE}" stroke="#dddddd"/>')
    for cid in sorted(groups):
        base = cid.split(".")[0]
        if base in POINT_COLORS:
            for s in groups[cid]:
                x, y = xy(s.point)
                lines.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{POINT_COLORS[base]}"><title>{escape(cid)}</title></circle>')
            continue
        color = CURVE_COLORS.get(base, "#333333")
        ordered = sorted(groups[cid], key=lambda s: s.param)
        for s in ordered:
            x, y = xy(s.point)
            lines.append(f'<circle cx="{x}" cy="{y}" r="1.2" fill="{color}"/>')
        if base in ("E", "Estar") and len(ordered) > 2:
            path = " ".join(",".join(xy(s.point)) for s in ordered)
            lines.append(f'<polygon points="{path}" fill="none" stroke="{color}"><title>{escape(cid)}</title></polygon>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def grid_svg(rows: list[dict], n_s: int, n_t: int) -> str:
    """Raster of class labels; rows come in grid order (t outer, s inner)."""
    cell = max(2, SIZE // max(n_s, n_t))
    w, h = cell * n_s, cell * n_t
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    for idx, row in enumerate(rows):
        i, j = idx % n_s, idx // n_s
        label = row.get("class_label") or "error"
        color = CLASS_COLORS.get(label, "#ffffff")
        lines.append(f'<rect x="{i * cell}" y="{(n_t - 1 - j) * cell}" width="{cell}" height="{cell}" fill="{color}"><title>{escape(label)}</title></rect>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
