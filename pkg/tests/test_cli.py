import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projcentroid.cli import ProblemError, ProblemFile, dumps, run
from projcentroid.geometry import convex_hull
from projcentroid.hilbert import hilbert_diameter, hilbert_width

DIAMOND = [[1, 0], [0, 1], [-1, 0], [0, -1]]
TALL_BOX = [[0.1, 0.8], [-0.1, 0.8], [-0.1, -0.8], [0.1, -0.8]]


def write(tmp_path, obj, name="problem.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def solve(tmp_path, problem, *flags):
    out = tmp_path / "report.json"
    code = run(["solve", "-i", write(tmp_path, problem), "-o", str(out), *flags])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_verify_examples(capsys):
    assert run(["verify-examples"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "CounterManyMany1: centroids 1/12" in out
    assert "FAIL" not in out.replace("XFAIL", "")


def test_solve_tall_box(tmp_path):
    problem = {"dimension": 2, "task": "fit-bodies",
               "side1": {"body": {"vertices": DIAMOND}},
               "side2": {"body": {"vertices": TALL_BOX}}}
    code, rep = solve(tmp_path, problem)
    assert code == 0
    assert len(rep["classes"]) >= 2
    assert rep["certificate"]["holds"] is False
    assert rep["timing_ms"] is None
    for cls in rep["classes"]:
        assert len(cls["map"]) == 9 and cls["residual"] <= 1e-8


def test_solve_counter_many_many(tmp_path):
    s = 3 / np.sqrt(13)
    problem = {"dimension": 1, "task": "fit-points",
               "side1": {"points": [[-1], [0], [1]]}, "side2": {"points": [[s], [-s]]}}
    code, rep = solve(tmp_path, problem, "--timing")
    assert code == 0
    ys = sorted(c["y"][0] for c in rep["classes"])
    assert any(abs(y + 1 / 3) < 1e-9 for y in ys) and any(abs(y) < 1e-9 for y in ys)
    assert rep["timing_ms"] > 0


def test_hilbert_concentric_squares(tmp_path):
    sq = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=float)
    problem = {"dimension": 2, "task": "hilbert",
               "side1": {"body": {"vertices": sq.tolist()}},
               "side2": {"body": {"vertices": (0.5 * sq).tolist()}}}
    out = tmp_path / "h.json"
    assert run(["hilbert", "-i", write(tmp_path, problem), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["diameter"] == pytest.approx(np.log(3), abs=1e-12)
    assert rep["width"] == pytest.approx(np.log(3), abs=1e-12)
    K1, K2 = convex_hull(sq), convex_hull(0.5 * sq)
    assert rep["diameter"] == pytest.approx(hilbert_diameter(K1, K2))
    assert rep["width"] == pytest.approx(hilbert_width(K1, K2))


def test_classes(tmp_path):
    problem = {"dimension": 2, "task": "classes",
               "side1": {"points": [[0, 0], [2, 0.1], [1.9, 1.7], [0.2, 1.3], [1.1, -0.6]]},
               "side2": {"point": [1.0, 0.5]}}
    out = tmp_path / "c.json"
    assert run(["classes", "-i", write(tmp_path, problem), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["count"] == 6 and rep["chambers"] == 11


def test_figure(tmp_path):
    problem = {"dimension": 2, "task": "fit-points-body",
               "side1": {"body": {"vertices": DIAMOND}},
               "side2": {"points": [[3 / np.sqrt(13), 0], [-3 / np.sqrt(13), 0]]}}
    out = tmp_path / "f.svg"
    assert run(["figure", "-i", write(tmp_path, problem), "-o", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<?xml") or svg.startswith("<svg")
    assert 'viewBox="0 0 1000 1000"' in svg


def test_invalid_input(tmp_path, capsys):
    code, _ = solve(tmp_path, {"dimension": 2, "task": "no-such-task"})
    assert code == 1
    code, _ = solve(tmp_path, {"dimension": 2, "task": "fit-point",
                               "side1": {"points": [[0, 0], [1, 0], [0, 1]]},
                               "side2": {"point": [5.0, 5.0]}})
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_no_convergence_exit_code(tmp_path):
    problem = {"dimension": 2, "task": "fit-point",
               "side1": {"points": [[0, 0], [1, 0], [0, 1], [2, 3]]},
               "side2": {"point": [0.2, 0.2]}, "options": {"max_iter": 1, "starts": 1}}
    code, rep = solve(tmp_path, problem)
    assert code == 2 and rep["status"] == "MaxIter"


def test_determinism(tmp_path):
    problem = {"dimension": 2, "task": "fit-bodies",
               "side1": {"body": {"vertices": DIAMOND}},
               "side2": {"body": {"vertices": TALL_BOX}}}
    p = write(tmp_path, problem)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["solve", "-i", p, "-o", str(a), "--seed", "7"]) == 0
    assert run(["solve", "-i", p, "-o", str(b), "--seed", "7"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_dumps_roundtrips_floats():
    x = 0.1 + 0.2
    assert json.loads(dumps({"x": x}))["x"] == x


coords = st.floats(-10, 10, allow_nan=False, width=64)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.data())
def test_problem_roundtrip(d, data):
    n = data.draw(st.integers(d + 1, 8))
    pts = data.draw(st.lists(st.lists(coords, min_size=d, max_size=d), min_size=n, max_size=n))
    q = data.draw(st.lists(coords, min_size=d, max_size=d))
    raw = {"dimension": d, "task": "fit-point", "side1": {"points": pts},
           "side2": {"point": q}, "options": {"seed": data.draw(st.integers(0, 99))}}
    once = ProblemFile.from_dict(raw).to_dict()
    twice = ProblemFile.from_dict(json.loads(json.dumps(once))).to_dict()
    assert once == twice


def test_problem_validation():
    with pytest.raises(ProblemError):
        ProblemFile.from_dict({"dimension": 2, "task": "fit-point", "side1": {"points": [[0, 0]]}})
    with pytest.raises(ProblemError):
        ProblemFile.from_dict({"dimension": 2, "task": "fit-point",
                               "side1": {"points": [[0, 0], [1, 0], [0, 1]]},
                               "side2": {"point": [0.1, 0.1]}, "options": {"bogus": 1}})
