"""Surface files (TOML) and deterministic JSON / CSV serialization."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ExprSyntaxError, SurfaceFileError
from .expr import parse_expr
from .jets import SurfaceSpec
from .projective import PointAtInfinity

SIG_DIGITS = 12


@dataclass(frozen=True)
class SurfaceFile:
    spec: SurfaceSpec
    analysis: dict = field(default_factory=dict)
    path: str = ""


def load_surface(path: str | Path) -> SurfaceFile:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SurfaceFileError(f"cannot read surface file {path}: {exc.strerror}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise SurfaceFileError(f"{path}: invalid TOML: {exc}") from exc
    return surface_from_dict(doc, str(path))


def surface_from_dict(doc: dict, origin: str = "<dict>") -> SurfaceFile:
    surf = doc.get("surface")
    if not isinstance(surf, dict):
        raise SurfaceFileError(f"{origin}: missing [surface] table")
    comps = surf.get("components")
    if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
        raise SurfaceFileError(f"{origin}: surface.components must be a list of strings")
    dim = surf.get("ambient_dim", len(comps))
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise SurfaceFileError(f"{origin}: surface.ambient_dim must be an integer")
    if dim != len(comps):
        raise SurfaceFileError(f"{origin}: ambient_dim is {dim} but {len(comps)} components are given")
    exprs = []
    for i, src in enumerate(comps):
        try:
            exprs.append(parse_expr(src))
        except ExprSyntaxError as exc:
            raise type(exc)(f"component {i}: {exc.message}", exc.offset, src) from exc
    try:
        spec = SurfaceSpec(str(surf.get("name", "surface")), dim, tuple(exprs))
    except ValueError as exc:
        raise SurfaceFileError(f"{origin}: {exc}") from exc
    analysis = doc.get("analysis", {})
    if not isinstance(analysis, dict):
        raise SurfaceFileError(f"{origin}: [analysis] must be a table")
    return SurfaceFile(spec, analysis, origin)


def round_sig(x: float, digits: int = SIG_DIGITS) -> float | int | None:
    """Round to significant digits; integral values become ints, non-finite become None."""
    x = float(x)
    if not math.isfinite(x):
        return None
    r = float(f"{x:.{digits}g}")
    if r == 0.0:
        return 0
    if r.is_integer() and abs(r) < 1e15:
        return int(r)
    return r


def to_jsonable(obj):
    if isinstance(obj, PointAtInfinity):
        return {"dir": to_jsonable(obj.direction), "at_infinity": True}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def fmt_num(x) -> str:
    """CSV cell for a number, 12 significant digits; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if x == 0.0:
        return "0"
    return f"{x:.{SIG_DIGITS}g}"


def write_text(path: str | Path | None, text: str) -> None:
    """Write to path, or to stdout when path is None or '-'."""
    if path is None or str(path) == "-":
        import sys

        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
