from __future__ import annotations

import json

import pytest

from augfiber.cli import EXIT_ERROR, EXIT_USAGE, main
from augfiber.model import FlatAugmentedLink
from augfiber.moves import make_locally_alternating

from conftest import FIXTURES, make_ald


@pytest.fixture
def write(tmp_path):
    def _write(name, ald):
        p = tmp_path / name
        p.write_text(ald.dumps() if hasattr(ald, "dumps") else ald)
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_random_is_deterministic(capsys):
    _, a, _ = run(capsys, "random", "--seed", "7", "--size", "5")
    _, b, _ = run(capsys, "random", "--seed", "7", "--size", "5")
    assert a == b
    assert FlatAugmentedLink.loads(a).dumps() == a


def test_analyze_exit_codes(capsys, write, path_ald, triangle_ald):
    code, out, err = run(capsys, "analyze", write("p.json", path_ald))
    assert code == 0 and json.loads(out)["outcome"] == "Fibered" and "Fibered" in err
    code, out, _ = run(capsys, "analyze", write("t.json", triangle_ald))
    report = json.loads(out)
    assert code == 1 and report["verdict"]["certificates"][0]["kind"] == "Cycle"
    code, _, _ = run(capsys, "analyze", write("a.json", make_locally_alternating(path_ald)))
    assert code == 2


def test_verify_flag_and_trace(capsys, write, tmp_path, path_ald):
    trace = tmp_path / "trace.json"
    code, out, _ = run(capsys, "analyze", "--verify", "--emit-trace", str(trace),
                       write("p.json", path_ald))
    report = json.loads(out)
    assert code == 0 and report["oracle_agrees"] is True
    assert set(report["timings"]) >= {"analyze", "verify"}
    moves = next(iter(json.loads(trace.read_text()).values()))["moves"]
    assert all(set(m) >= {"op", "i", "j", "sign", "words"} for m in moves)


def test_report_has_no_oracle_without_flag(capsys, write, path_ald):
    _, out, _ = run(capsys, "analyze", write("p.json", path_ald))
    assert "oracle_agrees" not in json.loads(out)


def test_pipeline_from_pd(capsys):
    code, out, _ = run(capsys, "analyze", str(FIXTURES / "figure_eight.pd"))
    report = json.loads(out)
    assert code == 0
    assert [abs(i["n"]) for i in report["stages"]["flatten"]["instructions"]] == [1, 1]
    code, out, _ = run(capsys, "analyze", str(FIXTURES / "trefoil.pd"))
    assert code == EXIT_ERROR and json.loads(out)["error"]["code"] == "augment.OddTwistRegion"


def test_sign_convention_flips(capsys):
    _, a, _ = run(capsys, "flatten", str(FIXTURES / "figure_eight.pd"))
    _, b, _ = run(capsys, "flatten", "--sign-convention", "right-positive",
                  str(FIXTURES / "figure_eight.pd"))
    na = [i["n"] for i in json.loads(a)["instructions"]]
    nb = [i["n"] for i in json.loads(b)["instructions"]]
    assert nb == [-n for n in na]


def test_unbounded_face_option(capsys):
    code, out, _ = run(capsys, "augment", "--unbounded", "99", str(FIXTURES / "figure_eight.pd"))
    assert code == EXIT_ERROR


def test_batch_and_jobs(capsys, write, path_ald, triangle_ald):
    paths = [write("p.json", path_ald), write("t.json", triangle_ald)]
    code, out, _ = run(capsys, "analyze", "--jobs", "2", *paths)
    reports = json.loads(out)["reports"]
    assert [r["input"] for r in reports] == paths
    assert [r["outcome"] for r in reports] == ["Fibered", "NotFibered"]
    assert code == 1


def test_missing_file(capsys):
    code, out, _ = run(capsys, "analyze", "/nonexistent/x.json")
    assert code == 4 and json.loads(out)["error"]["code"] == "cli.InputError"


def test_usage_error_does_not_collide():
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == EXIT_USAGE


def test_deplumb_fill_lift_dot(capsys, write, triangle_ald):
    ald = make_ald([("B1", "C0", "C1"), ("B2", "C1", "C2")], [("A3", "C0", "C2")])
    p = write("x.json", ald)
    _, out, _ = run(capsys, "deplumb", p)
    rep = json.loads(out)
    assert rep["chi"]["end"] - rep["chi"]["start"] == 2 and not rep["ald"]["a_circles"]
    code, out, _ = run(capsys, "fill", p, "--emit-trace", "/dev/null")
    assert code == 0 and json.loads(out)["outcome"] == "Fibered"
    code, out, _ = run(capsys, "lift", "--from-flat", write("t.json", triangle_ald))
    rep = json.loads(out)
    assert code == 0 and rep["replays"] is True
    assert {s["kind"] for s in rep["program"]} >= {"A", "pair"}
    _, out, _ = run(capsys, "export-dot", p)
    assert json.loads(out)["dot"].startswith("graph G_B")
    code, out, _ = run(capsys, "fill", write("t2.json", triangle_ald))
    assert code == EXIT_ERROR and json.loads(out)["error"]["code"] == "moves.NotATree"


def test_fill_with_program(capsys, write, tmp_path, path_ald):
    prog = tmp_path / "prog.json"
    prog.write_text(json.dumps([{"circle": "B1", "kind": "B", "sign": -1},
                                {"circle": "B2", "kind": "B", "sign": 1}]))
    code, out, _ = run(capsys, "fill", write("p.json", path_ald), "--program", str(prog))
    rep = json.loads(out)
    assert code == 0
    assert {f["circle"]: f["sign"] for f in rep["filled"]["filled"]} == {"B1": -1, "B2": 1}


def test_reports_round_trip(capsys, write, triangle_ald):
    _, out, _ = run(capsys, "analyze", "--verify", write("t.json", triangle_ald))
    report = json.loads(out)
    assert json.loads(json.dumps(report, sort_keys=True, indent=2)) == report
    assert FlatAugmentedLink.from_json(report["stages"]["ald"]) == triangle_ald
