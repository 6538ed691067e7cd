import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxface import description
from maxface.cli import main
from maxface.core import INF, Polynomial, RationalMap
from maxface.errors import NonRationalInput, UsageError, ValidationError
from maxface.gallery import ENTRIES, gallery
from maxface.global_analysis import compute_periods
from maxface.meshio import parse_obj
from maxface.weierstrass import WeierstrassData

from oracles import GALLERY


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


MODIFIED = {
    "label": "modified catenoid",
    "g": {"num": [[0, 0], [1, 0]], "den": [[1, 0]]},
    "omega_hat": {"num": [[0, 1]], "den": [[0, 0], [0, 0], [1, 0]]},
    "punctures": [[0, 0], "inf"],
    "base_point": [1, 0],
}


# -- gallery -------------------------------------------------------------------

def test_gallery_entries_valid():
    for name, params in GALLERY:
        d = gallery(name, **params)
        assert compute_periods(d).passes


def test_gallery_data():
    c = gallery("catenoid", a=2.0)
    assert c.g.equals(RationalMap.z(), 0) and c.punctures == (0j, INF)
    e = gallery("enneper")
    assert e.punctures == (INF,)
    jm = gallery("jorge-meeks-companion", n=3)
    assert len(jm.punctures) == 3 and all(abs(p ** 3 - 1) < 1e-14 for p in jm.punctures)
    assert abs(jm.g(2.0) - 4j) < 1e-14


@pytest.mark.parametrize("name,params", [("nope", {}), ("catenoid", {"a": 0}), ("jorge-meeks-companion", {"n": 1}),
                                         ("lopez-ros-enneper", {"lam": 0}), ("enneper", {"a": 1})])
def test_gallery_rejects(name, params):
    with pytest.raises(UsageError):
        gallery(name, **params)


# -- descriptions -----------------------------------------------------------------

def test_description_parse():
    d = description.from_dict(MODIFIED)
    assert d.omega_hat(1) == 1j and d.punctures == (0j, INF)


@pytest.mark.parametrize("field,value,match", [
    ("g", "exp(z)", "^g: expression"),
    ("omega_hat", {"num": [[1, 0]]}, "omega_hat: missing den"),
    ("punctures", [[0, 0], "zero"], r"punctures\[1\]"),
    ("base_point", [1], "base_point"),
    ("g", {"num": [[1, "a"]], "den": [[1, 0]]}, r"g\.num\[0\]"),
])
def test_description_field_errors(field, value, match):
    bad = dict(MODIFIED, **{field: value})
    with pytest.raises(ValidationError, match=match):
        description.from_dict(bad)


def test_description_rejects_transcendental():
    with pytest.raises(NonRationalInput):
        description.from_dict(dict(MODIFIED, g="exp(z)"))


coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False).filter(lambda c: abs(c) > 1e-3)


@given(st.lists(coef, min_size=1, max_size=4), st.floats(0.1, 5), st.sampled_from([n for n, _ in GALLERY]))
def test_description_round_trip(gcoef, a, name):
    params = dict(ENTRIES[name].params)
    if "a" in params:
        params["a"] = a
    data = gallery(name, **params)
    again = description.loads(description.dumps(data))
    assert description.to_dict(again) == description.to_dict(data)
    third = description.loads(description.dumps(again))
    assert description.dumps(third) == description.dumps(data)


# -- commands ---------------------------------------------------------------------

def test_verify_catenoid(capsys):
    code, out, _ = run(capsys, "verify", "--gallery", "catenoid", "--require-osserman-equality")
    d = json.loads(out)
    assert code == 0 and d["osserman"]["equality"] is True


def test_verify_jorge_meeks_require_complete(capsys):
    code, out, _ = run(capsys, "verify", "--gallery", "jorge-meeks-companion", "--n", "3", "--require-complete")
    d = json.loads(out)
    assert code == 1
    assert sum(e["end_type"] == "Simple-candidate" for e in d["ends"]) == 3


def test_verify_modified_catenoid(tmp_path, capsys):
    f = tmp_path / "mod.json"
    f.write_text(json.dumps(MODIFIED))
    code, out, _ = run(capsys, "verify", str(f))
    d = json.loads(out)
    assert code == 1 and abs(d["periods"]["max_re_violation"] - 4 * math.pi) < 1e-8


def test_verify_invalid_input(tmp_path, capsys):
    bad = dict(MODIFIED, omega_hat={"num": [[1, 0]], "den": [[0, 0], [1, 0]]}, punctures=["inf"])
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad))
    code, _, err = run(capsys, "verify", str(f))
    assert code == 2 and "metric condition" in err
    code, _, err = run(capsys, "verify", "--gallery", "nope")
    assert code == 2
    code, _, _ = run(capsys, "verify")
    assert code == 2
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


@pytest.mark.parametrize("name,params", GALLERY)
def test_every_gallery_entry_verifies(name, params, capsys):
    argv = ["verify", "--gallery", name, "--no-curvature"]
    for k, v in params.items():
        argv += [f"--{k}", str(v)]
    assert run(capsys, *argv)[0] == 0


def test_singular_enneper(capsys):
    code, out, _ = run(capsys, "singular", "--gallery", "enneper")
    d = json.loads(out)
    assert code == 0
    sw = sorted((round(s["z"][0], 8), round(s["z"][1], 8)) for s in d["swallowtails"])
    assert sw == sorted([(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)])
    assert all(s["tag"] == "Swallowtail" for s in d["swallowtails"])
    assert len(d["not_a_front"]) == 4
    assert set(d["tag_counts"]) == {"CuspidalEdge"}


def test_singular_catenoid_and_plane(capsys):
    d = json.loads(run(capsys, "singular", "--gallery", "catenoid")[1])
    assert d["n_curves"] == 1 and d["curves"][0]["closed"] and set(d["tag_counts"]) == {"Borderline"}
    d = json.loads(run(capsys, "singular", "--gallery", "plane")[1])
    assert d["n_curves"] == 0 and d["curves"] == []


def test_mesh_commands(tmp_path, capsys):
    out = tmp_path / "cat.obj"
    assert run(capsys, "mesh", "--gallery", "catenoid", "--polar", "0", "0.3", "3", "40", "120", "--out", str(out))[0] == 0
    obj = parse_obj(out.read_text())
    assert len(obj["vertices"]) == 4800 and len(obj["polylines"]) == 1
    ring = obj["vertices"][obj["polylines"][0]]
    assert np.ptp(ring, axis=0).max() < 1e-8
    enn = tmp_path / "enn.obj"
    assert run(capsys, "mesh", "--gallery", "enneper", "--rect", "-1.5", "-1.5", "1.5", "1.5", "80", "80",
               "--out", str(enn))[0] == 0
    assert sum(1 for ln in enn.read_text().splitlines() if ln.startswith("l ")) == 1
    hel = tmp_path / "hel.obj"
    assert run(capsys, "mesh", "--gallery", "catenoid", "--companion", "--polar", "0", "0.3", "3", "10", "24",
               "--out", str(hel))[0] == 0
    assert len(parse_obj(hel.read_text())["vertices"]) == 240 + 10
    csv_out = tmp_path / "cat.csv"
    assert run(capsys, "mesh", "--gallery", "catenoid", "--rect", "-1", "-1", "1", "1", "5", "5",
               "--out", str(csv_out))[0] == 0
    assert csv_out.read_text().startswith("z_re,z_im,x0,x1,x2,ds2_factor,abs_g,singular\n")
    assert run(capsys, "mesh", "--gallery", "catenoid")[0] == 2
    assert run(capsys, "mesh", "--gallery", "catenoid", "--rect", "-1", "-1", "1", "1", "5", "5",
               "--out", str(tmp_path / "no" / "x.obj"))[0] == 2


def test_deterministic_outputs(tmp_path, capsys):
    outs = []
    for k in range(2):
        f = tmp_path / f"e{k}.obj"
        run(capsys, "mesh", "--gallery", "enneper", "--rect", "-1.5", "-1.5", "1.5", "1.5", "20", "20", "--out", str(f))
        outs.append(f.read_bytes())
        outs.append(run(capsys, "verify", "--gallery", "jorge-meeks-companion", "--n", "3")[1].encode())
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_gallery_list(capsys):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0 and all(name in out for name in ENTRIES)


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "maxface.cli", "gallery", "list"], capture_output=True, text=True)
    assert r.returncode == 0 and "catenoid" in r.stdout


def test_tolerance_override_from_environment():
    code = ("from maxface.config import TOL; print(TOL.zero_tol, TOL.quad_tol)")
    r = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                       env={"MAXFACE_TOL": '{"quad_tol": 1e-11}', "PATH": ""})
    assert r.stdout.split() == ["1e-09", "1e-11"]
    r = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                       env={"MAXFACE_TOL": "1e-8", "PATH": ""})
    assert r.stdout.split() == ["1e-08", "1e-10"]
