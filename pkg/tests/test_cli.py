import io
import json
import subprocess
import sys

import pytest

from homsys.cli import (
    HANDLERS,
    SessionError,
    load_demo,
    parse_session,
    report_from_json,
    report_to_json,
    run,
    run_demo,
)

SIMPLES_DOC = {
    "field": {"type": "rational"},
    "seed": 3,
    "quiver": {"vertices": 3, "arrows": [[1, 2], [2, 3]]},
    "reps": {},
    "objects": {"T1": [{"rep": "S1"}], "T2": [{"rep": "S2"}], "T3": [{"rep": "S3"}], "M": [{"rep": "P1"}]},
    "theta": {"order": [1, 2, 3], "objects": ["T1", "T2", "T3"]},
}


def write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def call(argv):
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def test_bundled_a3_document_parses():
    sess = parse_session(load_demo("a3"))
    S = sess.require_theta()
    assert S.t == 3
    assert [o.shifts() for o in S.theta] == [[0], [2], [4]]
    assert all(o.entries[0][0].dims == (1, 1, 0) for o in S.theta)


def test_cycle_rejected():
    doc = dict(SIMPLES_DOC, quiver={"vertices": 3, "arrows": [[1, 1]]})
    with pytest.raises(SessionError) as exc:
        parse_session(doc)
    assert exc.value.location == "quiver.arrows" and "cycle" in str(exc.value)


def test_matrix_shape_rejected_with_location():
    doc = dict(SIMPLES_DOC, reps={"X": {"dims": [1, 1, 0], "maps": [[["1", "0", "0"], ["0", "1", "0"]], []]}})
    with pytest.raises(SessionError) as exc:
        parse_session(doc)
    assert exc.value.location == "reps.X.maps[0]"
    assert "(2, 3)" in str(exc.value)


def test_float_literal_rejected():
    doc = dict(SIMPLES_DOC, reps={"X": {"dims": [1, 1, 0], "maps": [[[0.5]], []]}})
    with pytest.raises(SessionError):
        parse_session(doc)


def test_unknown_object_rejected():
    doc = dict(SIMPLES_DOC, theta={"objects": ["T1", "nope"]})
    with pytest.raises(SessionError) as exc:
        parse_session(doc)
    assert exc.value.location == "theta.objects[1]"


def test_exact_entries_parse():
    doc = dict(SIMPLES_DOC, reps={"X": {"dims": [1, 1, 0], "maps": [[["3/7"]], []]}},
               objects=dict(SIMPLES_DOC["objects"], X=[{"rep": "X"}]))
    sess = parse_session(doc)
    assert str(sess.reps["X"].maps[0].rows[0][0]) == "3/7"


@pytest.mark.parametrize("name", ["a3", "simples", "strongly-exceptional"])
def test_demos_pass(name):
    code, out = call(["demo", name])
    assert code == 0, out
    assert out.strip().endswith("all checks passed")


def test_demo_a3_reports_es3_witness():
    sess = parse_session(load_demo("a3"))
    out = run_demo("a3", sess)
    v = out.report["ES3 fails as expected"]
    assert v.passed and v.witness == [3, 2, 2] and v.dims == 1
    assert out.info["dim A"] == 3


def test_every_command_runs(tmp_path):
    path = write(tmp_path, SIMPLES_DOC)
    for cmd in HANDLERS:
        code, out = call([cmd, "--input", path, "--object", "M", "--format", "json"])
        doc = json.loads(out)
        assert doc["command"] == cmd and doc["seed"] == 3
        if cmd == "exceptional":
            assert code == 1  # simples are exceptional but not strongly exceptional
        else:
            assert code == 0, (cmd, doc["verdicts"])


def test_reordered_simples_fail_s4(tmp_path):
    doc = dict(SIMPLES_DOC, theta={"objects": ["T2", "T1", "T3"]})
    code, out = call(["check-theta", "--input", write(tmp_path, doc), "--format", "json"])
    assert code == 1
    s4 = [v for v in json.loads(out)["verdicts"] if v["anchor"] == "S4"][0]
    assert s4["pass"] is False and s4["witness"] == [2, 1]


def test_non_integral_multiplicity(tmp_path):
    doc = dict(SIMPLES_DOC)
    doc["objects"] = dict(SIMPLES_DOC["objects"], Q1=[{"rep": "P1"}], Q2=[{"rep": "S3"}],
                          Q3=[{"rep": "S2"}, {"rep": "P2"}])
    doc["projective"] = ["Q1", "Q2", "Q3"]
    code, out = call(["multiplicity", "--input", write(tmp_path, doc), "--object", "M"])
    assert code == 1
    assert "non-integral solution" in out


def test_json_round_trip_and_determinism(tmp_path):
    path = write(tmp_path, SIMPLES_DOC)
    _, first = call(["standardly-stratified", "--input", path, "--format", "json"])
    _, second = call(["standardly-stratified", "--input", path, "--format", "json"])
    assert first == second
    doc = json.loads(first)
    rep = report_from_json(doc)
    sess = parse_session(SIMPLES_DOC)
    assert [v.to_json() for v in rep.verdicts] == doc["verdicts"]
    from homsys.cli import Outcome

    again = report_to_json(doc["command"], sess, Outcome(rep, doc["certificates"], doc.get("info", {})))
    assert json.loads(json.dumps(again, default=str)) == doc


def test_seed_and_field_overrides(tmp_path):
    path = write(tmp_path, SIMPLES_DOC)
    code, out = call(["build-projective", "--input", path, "--seed", "9", "--field", "p:101", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 9 and doc["field"] == "p:101"


def test_session_errors_exit_2(tmp_path):
    assert call(["check-theta"])[0] == 2
    assert call(["demo", "nope"])[0] == 2
    bad = dict(SIMPLES_DOC, quiver={"vertices": 2, "arrows": [[1, 2], [2, 1]]})
    assert call(["check-theta", "--input", write(tmp_path, bad)])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homsys", "demo", "a3", "--format", "json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "demo a3"
