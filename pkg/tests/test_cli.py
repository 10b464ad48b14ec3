import json

import pytest
from click.testing import CliRunner

from kgchat.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_load_reports_counts(runner, mini_graph):
    result = runner.invoke(main, ["load"])
    assert result.exit_code == 0, result.output
    assert f"facts: {mini_graph.fact_count}" in result.output
    assert "invariants: OK" in result.output


def test_load_empty_file(runner, tmp_path):
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    result = runner.invoke(main, ["load", "--kg", str(empty)])
    assert result.exit_code == 0
    assert "nodes: 0" in result.output
    assert "facts: 0" in result.output


def test_load_malformed_line_names_line(runner, tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("".join(f"Q1\tP1\tQ{i}\n" for i in range(2, 8)) + "Q9\tP1\n")
    result = runner.invoke(main, ["load", "--kg", str(bad)])
    assert result.exit_code == 1
    assert "line 7" in result.output


def test_eval_writes_reports_and_figures(runner, tmp_path):
    out = tmp_path / "report"
    result = runner.invoke(
        main,
        ["eval", "--strategy", "engine", "--out", str(out), "--min-p1", "0.99"],
    )
    assert result.exit_code == 0, result.output
    assert (out / "report.txt").exists()
    assert (out / "metrics.tsv").exists()
    doc = json.loads((out / "report.json").read_text())
    assert doc["overall"]["p_at_1"] == 1.0
    figures = list(out.glob("*.png"))
    assert len(figures) == 2
    tsv = (out / "metrics.tsv").read_text().splitlines()
    assert tsv[0] == "scope\tp_at_1\tmrr\thit_at_5\tturns"
    assert any(line.startswith("overall\t") for line in tsv)


def test_eval_threshold_exit_code(runner, tmp_path):
    result = runner.invoke(
        main, ["eval", "--strategy", "chain", "--min-p1", "0.99", "--no-figures"]
    )
    assert result.exit_code == 2


def test_chat_loop_oracle_and_dump(runner):
    lines = "\n".join(
        [
            ":oracle Q1; Q4",
            "Which actor voiced the Unicorn in The Last Unicorn?",
            "And Alan Arkin was behind ...?",
            ":dump",
            ":quit",
        ]
    )
    result = runner.invoke(main, ["chat"], input=lines + "\n")
    assert result.exit_code == 0, result.output
    assert "Mia Farrow" in result.output
    assert "Schmendrick" in result.output
    assert '"turn"' in result.output  # :dump prints the snapshot


def test_chat_transcript_matches_eval(runner, mini_graph, vectors, tmp_path, node_by_external):
    """A chat transcript replayed through eval yields identical answers."""
    from kgchat.engine import SessionConfig, start_session

    q0 = "Which actor voiced the Unicorn in The Last Unicorn?"
    session = start_session(
        mini_graph, vectors, SessionConfig(),
        q0, ([node_by_external("Q1")], [node_by_external("Q4")]),
    )
    questions = ["And Alan Arkin was behind ...?", "Who did the score?"]
    transcript = []
    for q in questions:
        rec = session.ask(q)
        transcript.append(
            {
                "question": q,
                "gold": [
                    mini_graph.nodes[n].external_id
                    for n in sorted(rec.answers.top_group)
                ],
            }
        )
    benchmark = {
        "conversations": [
            {
                "conversation_id": "replay",
                "domain": "movies",
                "seed_entity": {"external_id": "Q1", "label": "The Last Unicorn"},
                "turns": [{"question": q0, "gold": ["Q4"]}] + transcript,
            }
        ]
    }
    path = tmp_path / "replay.json"
    path.write_text(json.dumps(benchmark))
    result = runner.invoke(
        main, ["eval", "--benchmark", str(path), "--strategy", "engine", "--no-figures"]
    )
    assert result.exit_code == 0, result.output
    assert "overall" in result.output
    # identical answers -> perfect metrics on the replayed transcript
    line = next(l for l in result.output.splitlines() if l.startswith("overall"))
    assert "1.000" in line
