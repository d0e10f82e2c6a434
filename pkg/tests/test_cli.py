import io
import json

import numpy as np
import pytest

from ruledsolitons import catalog as cat
from ruledsolitons.cli import main
from ruledsolitons.surface import fd_jet

INTRO_X_SPEC = """\
# intro surface X
gamma   = "(log(s), 1/(2*s), -1/(2*s))"
w       = "(1, s, s)"
s_range = 0.5, 2
t_range = 1, 3
"""


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def fields(text):
    out = {}
    for line in text.splitlines():
        if ": " in line:
            k, v = line.split(": ", 1)
            out.setdefault(k, v)
    return out


def test_list():
    code, text = run("list")
    assert code == 0
    assert len(text.strip().splitlines()) == 13
    code, text = run("list", "--json")
    rows = json.loads(text)
    assert {r["id"] for r in rows} == {f.value for f in cat.FamilyId}
    code, text = run("list", "--family", "gr3")
    assert code == 0 and text.startswith("Gr3")


def test_residual_pass_and_fail():
    code, text = run("residual", "Gr3", "--a", "0.2", "--v3", "4")
    assert code == 0
    assert fields(text)["status"] == "PASS"
    code, text = run("residual", "IntroY", "--v", "0,1,0")
    assert code == 1
    assert fields(text)["status"] == "FAIL"


def test_residual_with_random_points():
    code, text = run("residual", "Thm4A2", "--seed", "3", "--grid", "10x10")
    assert code == 0
    assert fields(text)["seed"] == "3"


def test_domain_error_exit_code(capsys):
    code, _ = run("residual", "Gr2Arctanh", "--s-range", "-1,1")
    assert code == 2
    assert "DomainViolation" in capsys.readouterr().err


def test_unknown_family_and_param(capsys):
    assert run("residual", "Gr9")[0] == 2
    assert run("residual", "Gr3", "--q", "1")[0] == 2
    assert run("sample", "Gr3", "--grid", "1x4")[0] == 2


def test_sample_csv_round_trip(tmp_path):
    path = tmp_path / "x.csv"
    code, _ = run("sample", "IntroX", "--grid", "9x7", "--out", str(path))
    assert code == 0
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (63, 5)
    fam = cat.intro_x()
    assert np.allclose(fam.surface.position(data[:, 0], data[:, 1]), data[:, 2:], rtol=0, atol=1e-15)
    # tangent vectors from the sampled mesh agree with the analytic jet
    k = 20
    s, t = data[k, :2]
    jet = fd_jet(fam.surface.position, s, t)
    exact = fam.surface.jet(s, t)
    assert np.allclose(jet.Ps, exact.Ps, atol=1e-7)
    assert np.allclose(jet.Pt, exact.Pt, atol=1e-7)


def test_sample_obj(tmp_path):
    path = tmp_path / "y.obj"
    code, _ = run("sample", "IntroY", "--grid", "4x3", "--format", "obj", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    verts = [l for l in lines if l.startswith("v ")]
    faces = [l for l in lines if l.startswith("f ")]
    assert len(verts) == 12 and len(faces) == 6
    idx = [int(i) for f in faces for i in f.split()[1:]]
    assert min(idx) == 1 and max(idx) == 12


def test_solve_ode(tmp_path, capsys):
    code, text = run("solve-ode", "eq32", "--v2", "1", "--range", "0,1")
    assert code == 0
    data = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1)
    assert abs(data[-1, 1] + np.log(np.cos(1.0))) <= 1e-8
    assert "stop_reason: completed" in capsys.readouterr().err
    path = tmp_path / "gr0.csv"
    code, text = run("solve-ode", "gr0-spacelike", "--lift", "--out", str(path))
    assert code == 0
    assert fields(text)["status"] == "PASS"
    assert "default representative" in text
    code, _ = run("solve-ode", "eq31-spacelike", "--v3", "1", "--init", "0,2")
    assert code == 2


def test_classify_spec_file(tmp_path):
    spec = tmp_path / "x.spec"
    spec.write_text(INTRO_X_SPEC)
    coeffs = tmp_path / "coeffs.csv"
    code, text = run("classify", str(spec), "--out", str(coeffs))
    assert code == 0
    f = fields(text)
    assert f["case_label"] == "Thm4-Candidate"
    assert np.allclose([float(x) for x in f["fitted_v"].split(",")], (1, 0, 0), atol=1e-8)
    assert coeffs.read_text().startswith("s,")


def test_parse_error_location(tmp_path, capsys):
    spec = tmp_path / "bad.spec"
    spec.write_text('gamma = "(log(s), 1/(2*s), -1/(2*s)"\nw = "(1, s, s)"\ns_range = 0.5, 2\nt_range = 1, 3\n')
    code, _ = run("classify", str(spec))
    assert code == 2
    err = capsys.readouterr().err
    assert "ParseError" in err
    assert "line 1" in err


def test_fit_velocity():
    code, text = run("fit-velocity", "Gr3")
    assert code == 0
    f = fields(text)
    assert f["nullspace_dim"] == "1"
    assert f["agrees"] == "True"
    code, text = run("fit-velocity", "IntroX", "--constraint", "0,1,1")
    assert fields(text)["nullspace_dim"] == "0"


def test_config_file(tmp_path):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("tol = 1e-9\ngrid = 12x12\nv = 0, 1, 0\n")
    code, text = run("residual", "IntroX", "--config", str(cfg))
    assert code == 1
    assert fields(text)["points"] == "144"
    assert fields(text)["tolerance"] == "1.000e-09"
    # flags override the file
    code, text = run("residual", "IntroX", "--config", str(cfg), "--v", "1,0,0")
    assert code == 0
