import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET
from importlib import resources

import jsonschema
import numpy as np
import pytest

import curvatura
from curvatura import sl2
from curvatura.cli import main

from conftest import SURFACES


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("curvatura").joinpath("schemas/report.schema.json").read_text())


def run_cli(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else None


def write_surface(tmp_path, components, name="s.toml", extra=""):
    path = tmp_path / name
    comps = ", ".join(f'"{c}"' for c in components)
    path.write_text(f'[surface]\nname = "t"\nambient_dim = {len(components)}\ncomponents = [{comps}]\n{extra}')
    return str(path)


def test_point_elliptic(tmp_path, schema):
    code, text = run_cli(tmp_path, "point", "--surface", str(SURFACES / "elliptic_example.toml"))
    assert code == 0
    doc = json.loads(text)
    assert (doc["Delta"], doc["K"], doc["N"]) == (3, -4, -5)
    assert isinstance(doc["Delta"], int)
    assert doc["RH_inner"] == -1.08333333333
    assert doc["H"] == [1.25, 0.75]
    assert doc["R"] == [-0.416666666667, -0.75]
    assert doc["focal_curvatures"] == [-3, -1]
    assert doc["class"] == "Elliptic"
    assert doc["paired"]["Delta"] == 0.333333333333
    assert all(r["holds"] for r in doc["inequalities"])
    jsonschema.validate(doc, schema)


def test_point_plane_and_r5(tmp_path, schema):
    code, text = run_cli(tmp_path, "point", "--surface", str(SURFACES / "plane.toml"), "--at", "0.3", "-0.7")
    assert code == 0
    doc = json.loads(text)
    assert doc["class"] == "FlatUmbilic" and doc["paired"] is None and doc["paired_error"]
    jsonschema.validate(doc, schema)
    code, text = run_cli(tmp_path, "point", "--surface", str(SURFACES / "r5_diag.toml"))
    doc = json.loads(text)
    assert doc["tau"] == 1 and doc["class"] == "PseudoElliptic"
    assert doc["classification"]["M_stratum"] == 3
    jsonschema.validate(doc, schema)


def test_point_csv(tmp_path):
    code, text = run_cli(tmp_path, "point", "--surface", str(SURFACES / "elliptic_example.toml"), "--format", "csv")
    assert code == 0
    rows = dict(csv.reader(io.StringIO(text)))
    assert rows["Delta"] == "3" and rows["H[0]"] == "1.25" and rows["class"] == "Elliptic"


def test_point_is_byte_stable(tmp_path):
    args = ("point", "--surface", str(SURFACES / "r5_generic.toml"), "--at", "0.3", "0.2")
    _, first = run_cli(tmp_path, *args, name="a")
    _, second = run_cli(tmp_path, *args, name="b")
    assert first == second


def test_parse_error_exit_code(tmp_path, capsys):
    bad = write_surface(tmp_path, ["s", "t", "s +* t"])
    code, _ = run_cli(tmp_path, "point", "--surface", bad)
    assert code == 2
    err = capsys.readouterr().err
    assert "byte 3" in err and "component 2" in err
    assert run_cli(tmp_path, "point", "--surface", str(tmp_path / "missing.toml"))[0] == 2
    broken = tmp_path / "broken.toml"
    broken.write_text("[surface\n")
    assert run_cli(tmp_path, "point", "--surface", str(broken))[0] == 2


def test_immersion_failure_exit_code(tmp_path):
    path = write_surface(tmp_path, ["s^2", "t", "0"])
    assert run_cli(tmp_path, "point", "--surface", path)[0] == 3


def test_domain_failure_exit_code(tmp_path):
    path = write_surface(tmp_path, ["s", "t", "ln(s)"])
    assert run_cli(tmp_path, "point", "--surface", path)[0] == 3


def test_undefined_pairing_exit_code(tmp_path):
    plane = str(SURFACES / "plane.toml")
    assert run_cli(tmp_path, "point", "--surface", plane)[0] == 0
    assert run_cli(tmp_path, "point", "--surface", plane, "--paired")[0] == 4


def test_config_errors(tmp_path):
    plane = str(SURFACES / "plane.toml")
    assert run_cli(tmp_path, "grid", "--surface", plane, "--res", "1")[0] == 2
    assert run_cli(tmp_path, "point", "--surface", plane, "--tol", "0")[0] == 2


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_grid_plane(tmp_path, schema):
    code, text = run_cli(tmp_path, "grid", "--surface", str(SURFACES / "plane.toml"))
    assert code == 0
    rows = _csv_rows(text)
    assert len(rows) == 100
    assert {r["class_label"] for r in rows} == {"FlatUmbilic"}
    assert list(rows[0]) == ["s", "t", "K", "N", "Delta", "Hnorm", "class_label", "boundary_warning", "error"]
    code, text = run_cli(tmp_path, "grid", "--surface", str(SURFACES / "plane.toml"), "--res", "3", "--format", "json")
    jsonschema.validate(json.loads(text), schema)


def test_grid_origin_matches_point(tmp_path):
    path = str(SURFACES / "elliptic_example.toml")
    code, text = run_cli(tmp_path, "grid", "--surface", path)
    assert code == 0
    rows = _csv_rows(text)
    assert len(rows) == 21 * 21
    origin = [r for r in rows if float(r["s"]) == 0 and float(r["t"]) == 0]
    assert len(origin) == 1
    point = json.loads(run_cli(tmp_path, "point", "--surface", path, name="p")[1])
    for key in ("K", "N", "Delta", "Hnorm"):
        assert float(origin[0][key]) == pytest.approx(point[key], rel=1e-11)
    assert origin[0]["class_label"] == point["class"]


def test_grid_r5_has_several_labels(tmp_path):
    code, text = run_cli(tmp_path, "grid", "--surface", str(SURFACES / "r5_generic.toml"), "--res", "15")
    assert code == 0
    rows = _csv_rows(text)
    assert "Acal" in rows[0] and "tau" in rows[0]
    assert len({r["class_label"] for r in rows}) >= 2


def test_grid_failure_budget(tmp_path):
    path = write_surface(tmp_path, ["s", "t", "sqrt(s)"])
    code, text = run_cli(tmp_path, "grid", "--surface", path, "--res", "5")
    assert code == 5
    rows = _csv_rows(text)
    # s < 0 is outside the domain and s = 0 has an infinite derivative
    assert sum(bool(r["error"]) for r in rows) == 15
    assert all("DomainError" in r["error"] for r in rows if r["error"])


def test_grid_svg(tmp_path):
    code, text = run_cli(tmp_path, "grid", "--surface", str(SURFACES / "r5_generic.toml"), "--res", "5",
                         "--format", "svg")
    assert code == 0
    assert ET.fromstring(text).tag.endswith("svg")


def _curve_rows(text):
    rows = _csv_rows(text)
    out = {}
    for r in rows:
        cid = r["curve_id"].split(".")[0]
        q = [float(v) for k, v in r.items() if k.startswith("q")]
        out.setdefault(cid, []).append(q)
    return {k: np.array(v) for k, v in out.items()}


def test_curves_elliptic(tmp_path, schema):
    path = str(SURFACES / "elliptic_example.toml")
    code, text = run_cli(tmp_path, "curves", "--surface", path, "--samples", "64")
    assert code == 0
    curves = _curve_rows(text)
    c = curves["C"]
    assert len(c) == 128
    printed = 3 * (c[:, 0] + 5 / 12) ** 2 + (c[:, 1] + 0.75) ** 2 - 25 / 12
    assert np.abs(printed).max() <= 1e-9
    cs = curves["Cstar"]
    printed_star = (cs[:, 0] - 1.25) ** 2 / 3 + (cs[:, 1] - 0.75) ** 2 - 25 / 12
    assert np.abs(printed_star).max() <= 1e-9
    assert curves["R"].tolist() == [[-0.416666666667, -0.75]]
    assert len(curves["bitangency"]) == 2
    # an elliptic point: the sampled indicatrix winds once around the origin
    e = curves["E"]
    turn = np.diff(np.unwrap(np.append(np.arctan2(e[:, 1], e[:, 0]), math.atan2(e[0, 1], e[0, 0]))))
    assert abs(abs(turn.sum()) - 2 * math.pi) <= 1e-9

    code, svg = run_cli(tmp_path, "curves", "--surface", path, "--format", "svg", name="svg")
    assert code == 0 and ET.fromstring(svg).tag.endswith("svg")
    code, text = run_cli(tmp_path, "curves", "--surface", path, "--samples", "16", "--format", "json", name="j")
    jsonschema.validate(json.loads(text), schema)


def test_curves_umbilic(tmp_path):
    path = write_surface(tmp_path, ["s", "t", "0.5*(s^2 + t^2)", "0"])
    code, text = run_cli(tmp_path, "curves", "--surface", path, "--samples", "16")
    assert code == 0
    curves = _curve_rows(text)
    # the indicatrix is the single point H, the caustic the line q1 = 1 traced twice
    assert np.unique(curves["E"], axis=0).tolist() == [[1.0, 0.0]]
    assert np.all(curves["C"][:, 0] == 1.0)
    rows = _csv_rows(text)
    branch0 = [r["q2"] for r in rows if r["curve_id"] == "C.0"]
    branch1 = [r["q2"] for r in rows if r["curve_id"] == "C.1"]
    assert branch0 == branch1
    assert np.abs(curves["C"]).max() < 1e3


def test_curves_r5_cone(tmp_path):
    code, text = run_cli(tmp_path, "curves", "--surface", str(SURFACES / "r5_diag.toml"), "--samples", "32")
    assert code == 0
    curves = _curve_rows(text)
    assert curves["R"].tolist() == [[0.0, 0.0, 1.0]]
    c = curves["C"]
    # the caustic is the cone q1^2 + q2^2 = (q3 - 1)^2 with vertex R
    resid = c[:, 0] ** 2 + c[:, 1] ** 2 - (c[:, 2] - 1) ** 2
    assert np.all(np.abs(resid) <= 1e-9 * np.maximum(1.0, (c ** 2).sum(axis=1)))


def test_curves_are_byte_stable(tmp_path):
    args = ("curves", "--surface", str(SURFACES / "r5_generic.toml"), "--at", "0.1", "0.4")
    assert run_cli(tmp_path, *args, name="a")[1] == run_cli(tmp_path, *args, name="b")[1]


VERIFY = ("verify", "--maps", "20", "--surfaces", "1")


def test_verify_small_run(tmp_path, schema):
    code, text = run_cli(tmp_path, *VERIFY, "--seed", "7")
    assert code == 0
    doc = json.loads(text)
    assert doc["passed"] and doc["first_failure"] is None and doc["seed"] == 7
    names = [p["name"] for p in doc["properties"]]
    assert names[0] == "bracket pseudo-orthogonality"
    jsonschema.validate(doc, schema)
    # the same seed reproduces every residual
    assert run_cli(tmp_path, *VERIFY, "--seed", "7", name="again")[1] == text
    other = json.loads(run_cli(tmp_path, *VERIFY, "--seed", "8", name="other")[1])
    assert other["seed"] == 8


def test_verify_with_surface_oracles(tmp_path):
    code, text = run_cli(tmp_path, *VERIFY, "--surface", str(SURFACES / "elliptic_example.toml"), "--format", "csv")
    assert code == 0
    names = [r["name"] for r in _csv_rows(text)]
    assert "focal set" in names and "curvature vector" in names


def test_sign_flip_in_psi_is_caught_first(tmp_path, monkeypatch, capsys):
    def flipped(q1, q2):
        return 0.5 * (q1.a * q2.c + q2.a * q1.c) + q1.b * q2.b

    original = sl2.psi_inner
    for mod in list(sys.modules.values()):
        if getattr(mod, "__name__", "").startswith("curvatura") and getattr(mod, "psi_inner", None) is original:
            monkeypatch.setattr(mod, "psi_inner", flipped)
    code, text = run_cli(tmp_path, *VERIFY)
    assert code == 1
    assert json.loads(text)["first_failure"] == "bracket pseudo-orthogonality"
    assert "bracket pseudo-orthogonality" in capsys.readouterr().err


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "o.json"
    res = subprocess.run([sys.executable, "-m", "curvatura.cli", "point", "--surface",
                          str(SURFACES / "elliptic_example.toml"), "--out", str(out)], capture_output=True)
    assert res.returncode == 0 and json.loads(out.read_text())["K"] == -4
    assert curvatura.__name__ == "curvatura"
