import io
import json
import sys

import pytest

from advgap import cli
from advgap.errors import GeometryInconclusive
from advgap.services import AnalysisService


def _run(capsys, *argv: str) -> tuple[int, dict, str]:
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else {}
    return code, payload, captured.err


def _stdin(monkeypatch: pytest.MonkeyPatch, text: str) -> None:
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(text.encode())))


def _write(tmp_path, name: str, payload) -> str:
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return str(path)


def test_construct_then_analyze_pentagon(tmp_path, capsys):
    dataset = str(tmp_path / "pentagon.json")
    code, _, _ = _run(capsys, "construct", "figure", "pentagon", "--output", dataset)
    assert code == 0
    code, report, _ = _run(capsys, "analyze", dataset)
    assert code == 0
    assert report["gap_report"]["gap"] == "1/10"
    assert report["gap_report"]["ip"] == "2/5"
    assert report["risks"]["randomized"] == "1/2"
    assert "timing_seconds_approx" not in report


def test_analyze_reads_stdin(capsys, monkeypatch):
    assert cli.main(["construct", "basis", "--k", "3"]) == 0
    dataset = capsys.readouterr().out
    _stdin(monkeypatch, dataset)
    code, report, _ = _run(capsys, "analyze", "-")
    assert code == 0
    assert report["gap_report"]["gap"] == "1/6"
    assert report["gap_report"]["conformal"] is False


def test_analyze_output_is_byte_identical_across_runs(tmp_path, capsys):
    dataset = str(tmp_path / "tp.json")
    cli.main(["construct", "figure", "triangle-pendant", "-o", dataset])
    capsys.readouterr()
    cli.main(["analyze", dataset])
    first = capsys.readouterr().out
    cli.main(["analyze", dataset])
    assert capsys.readouterr().out == first
    assert json.loads(first)["gap_report"]["perfect"]["status"] == "Perfect"


def test_analyze_flags_echo_into_parameters(tmp_path, capsys):
    dataset = str(tmp_path / "p.json")
    cli.main(["construct", "figure", "pentagon", "-o", dataset])
    code, report, _ = _run(
        capsys, "analyze", dataset, "--eps", "1/2", "--norm", "inf", "--node-budget", "500",
        "--hole-cap", "7", "--timings",
    )
    assert code == 0
    params = report["parameters"]
    assert params["epsilon"] == "1/2" and params["norm"] == "inf"
    assert params["node_budget"] == 500 and params["hole_cap"] == 7
    assert "structures" in report["timing_seconds_approx"]


def test_empty_input_exits_2(tmp_path, capsys):
    code, _, err = _run(capsys, "analyze", _write(tmp_path, "empty.json", ""))
    assert code == 2
    assert "empty input" in err
    assert len(err.strip().splitlines()) == 1


def test_missing_file_exits_2(tmp_path, capsys):
    code, _, err = _run(capsys, "analyze", str(tmp_path / "nope.json"))
    assert code == 2
    assert "cannot read" in err


def test_unknown_flag_exits_2(capsys):
    assert cli.main(["analyze", "x.json", "--bogus"]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_bad_rational_flag_exits_2(capsys):
    assert cli.main(["analyze", "x.json", "--eps", "one half"]) == 2


def test_solver_budget_exits_4(tmp_path, capsys):
    hypergraph = _write(
        tmp_path, "h.json",
        {"n": 5, "max_edges": [[i, (i + 1) % 5] for i in range(5)],
         "weights": ["5/7", "1", "1", "1", "1"]},
    )
    code, _, err = _run(capsys, "solve", hypergraph, "--node-budget", "1")
    assert code == 4
    assert "Node budget exhausted" in err


def test_geometry_inconclusive_exits_3(tmp_path, capsys, monkeypatch):
    def inconclusive(self, raw, **kwargs):
        raise GeometryInconclusive((0, 2), 1e-10)

    monkeypatch.setattr(AnalysisService, "analyze", inconclusive)
    code, _, err = _run(capsys, "analyze", _write(tmp_path, "d.json", "{}"))
    assert code == 3
    assert "{1, 3}" in err


def test_solve_with_weight_override(tmp_path, capsys):
    hypergraph = _write(tmp_path, "h.json", {"n": 3, "max_edges": [[0, 1], [1, 2]]})
    code, result, _ = _run(capsys, "solve", hypergraph, "--weights", "1,3,1")
    assert code == 0
    assert result["ip"] == "3"
    assert result["q_int"] == [0, 1, 0]
    assert result["proven_optimal"] is True


def test_check_named_and_file_graphs(tmp_path, capsys):
    code, report, _ = _run(capsys, "check", "--named", "c7complement")
    assert code == 0
    assert report["perfect"]["status"] == "NotPerfect"
    assert report["perfect"]["kind"] == "antihole"
    assert len(report["perfect"]["witness"]) == 7
    graph = _write(tmp_path, "g.json", {"n": 4, "edges": [[0, 1], [1, 2], [2, 3]]})
    code, report, _ = _run(capsys, "check", "--graph", graph, "--independence")
    assert report["perfect"]["status"] == "Perfect"
    assert report["independence_number"] == 2


def test_check_dataset(tmp_path, capsys):
    dataset = str(tmp_path / "a.json")
    cli.main(["construct", "figure", "antihole", "-o", dataset])
    code, report, _ = _run(capsys, "check", "--dataset", dataset)
    assert code == 0 and report["perfect"]["kind"] == "antihole"


def test_embed_named_graph(capsys):
    code, report, _ = _run(capsys, "embed", "--named", "c5", "--norm", "inf", "--eps", "1/2")
    assert code == 0
    assert report["dim"] == 5
    assert report["points"][0][1] == "9/10"


def test_construct_graph_fibration_and_random(capsys):
    code, dataset, _ = _run(capsys, "construct", "graph", "c5", "--eps", "1/2")
    assert code == 0 and dataset["epsilon"] == "1/2" and len(dataset["points"]) == 5
    code, dataset, _ = _run(capsys, "construct", "random", "--n", "5", "--seed", "3", "--eps", "1/4")
    assert code == 0 and len(dataset["labels"]) == 5
    code, _, err = _run(capsys, "construct", "fibration", "--base", "c5", "--t", "9")
    assert code == 2 and "cap" in err


def test_construct_embed_from_stdin(capsys, monkeypatch):
    _stdin(monkeypatch, json.dumps({"n": 3, "edges": [[0, 1]]}))
    code, dataset, _ = _run(capsys, "construct", "embed", "--graph", "-", "--norm", "3")
    assert code == 0
    assert dataset["norm"] == "3"


def test_classify_with_packing_file(tmp_path, capsys):
    dataset = str(tmp_path / "p.json")
    cli.main(["construct", "figure", "pentagon", "-o", dataset])
    packing = _write(tmp_path, "q.json", {"q": ["1/2"] * 5})
    code, report, _ = _run(capsys, "classify", dataset, "--packing", packing)
    assert code == 0
    assert report["witnessed_accuracy"] == "1/2"
    infeasible = _write(tmp_path, "bad.json", {"q": ["1"] * 5})
    code, _, err = _run(capsys, "classify", dataset, "--packing", infeasible)
    assert code == 2 and "hyperedge" in err


def test_classify_requires_a_mode(capsys):
    assert cli.main(["classify", "d.json"]) == 2


@pytest.mark.slow
def test_fibration_pipeline_gap(capsys, monkeypatch):
    cli.main(["construct", "fibration", "--base", "c5", "--t", "1", "--eps", "1/2"])
    _stdin(monkeypatch, capsys.readouterr().out)
    code, report, _ = _run(capsys, "analyze", "-")
    assert code == 0
    num, den = map(int, report["gap_report"]["gap"].split("/"))
    assert num * 30 >= 7 * den
