import copy
from dataclasses import replace

import pytest

from kgchat.engine import (
    FirstTurnMode,
    SessionConfig,
    TurnFailure,
    run_conversation,
    start_session,
)
from kgchat.linking import FirstTurnError

from .conftest import RUNNING_EXAMPLE_FOLLOW_UPS, graph_from_text

Q0 = "Which actor voiced the Unicorn in The Last Unicorn?"


def _oracle_inputs(node_by_external):
    return ([node_by_external("Q1")], [node_by_external("Q4")])


def test_start_session_oracle(mini_graph, vectors, node_by_external):
    s = start_session(
        mini_graph, vectors, SessionConfig(), Q0, _oracle_inputs(node_by_external)
    )
    assert s.turn == 1
    rec = s.records[0]
    assert rec.turn == 0
    assert sorted(rec.answers.top_group) == [node_by_external("Q4")]
    # the connecting voice-actor fact anchors the context
    assert any(
        mini_graph.facts[f].object == node_by_external("Q4") for f in s.ctx.fact_set
    )


def test_start_session_oracle_requires_inputs(mini_graph, vectors):
    with pytest.raises(ValueError):
        start_session(mini_graph, vectors, SessionConfig(), Q0, None)


def test_start_session_oracle_degenerate(mini_graph, vectors, node_by_external):
    tlu = node_by_external("Q1")
    s = start_session(mini_graph, vectors, SessionConfig(), Q0, ([tlu], [tlu]))
    assert s.ctx.node_set == {tlu}


def test_start_session_naive(mini_graph, vectors, node_by_external):
    cfg = replace(SessionConfig(), first_turn_mode=FirstTurnMode.NAIVE)
    s = start_session(mini_graph, vectors, cfg, Q0, None)
    assert sorted(s.records[0].answers.top_group) == [node_by_external("Q4")]


def test_start_session_naive_unlinkable(mini_graph, vectors):
    cfg = replace(SessionConfig(), first_turn_mode=FirstTurnMode.NAIVE)
    with pytest.raises(FirstTurnError):
        start_session(mini_graph, vectors, cfg, "nothing matches here", None)


def test_running_example_conversation(mini_graph, vectors, node_by_external):
    s = start_session(
        mini_graph, vectors, SessionConfig(), Q0, _oracle_inputs(node_by_external)
    )
    for question, gold in RUNNING_EXAMPLE_FOLLOW_UPS:
        rec = s.ask(question)
        want = {node_by_external(g) for g in gold}
        assert rec.answers.top_group == want, question


def test_ask_carries_state_forward(mini_graph, vectors, node_by_external):
    s = start_session(
        mini_graph, vectors, SessionConfig(), Q0, _oracle_inputs(node_by_external)
    )
    before_nodes = set(s.ctx.node_set)
    rec = s.ask("And Alan Arkin was behind ...?")
    assert s.turn == 2
    assert s.ctx.node_set > before_nodes
    # answers of the turn are registered for the next ones
    registered = {e.node for e in s.ctx.qa_registry if e.turn_seen == 1}
    assert set(rec.answers.top_group) <= registered
    # per-turn expanded context equals the stored context
    assert rec.turn == 1


def test_failed_turn_leaves_state(mini_graph, vectors, node_by_external):
    # a graph fragment nobody can expand: context on an isolated pair beyond
    # reach is impossible after load, so force failure via empty neighborhood
    g = graph_from_text("Q1\tP1\tQ2\n")

    def nid(ext):
        return next(n.node_id for n in g.nodes if n.external_id == ext)

    from kgchat.embeddings import WordVectorTable
    import numpy as np

    emb = WordVectorTable({"x": np.array([1.0, 0.0])})
    s = start_session(g, emb, SessionConfig(), "q", ([nid("Q1")], [nid("Q2")]))
    # neighborhood always contains the context itself, so candidates are never
    # empty; instead verify failure on an un-answerable ranking: every node of
    # the tiny graph becomes a frontier, leaving no candidates.
    cfg = replace(
        SessionConfig(),
        frontier_hp=replace(SessionConfig().frontier_hp, r=3),
    )
    s = start_session(g, emb, cfg, "q", ([nid("Q1")], [nid("Q2")]))
    before = copy.deepcopy(s.ctx)
    with pytest.raises(TurnFailure):
        s.ask("x")
    assert s.ctx.node_set == before.node_set
    assert s.ctx.fact_set == before.fact_set
    assert s.ctx.qa_registry == before.qa_registry
    assert s.turn == before.turn


def test_run_conversation_empty_followups(mini_graph, vectors, node_by_external):
    records = run_conversation(
        mini_graph, vectors, SessionConfig(), Q0, _oracle_inputs(node_by_external), []
    )
    assert len(records) == 1
    assert records[0].turn == 0


def test_run_conversation_full_fixture(mini_graph, vectors, node_by_external):
    records = run_conversation(
        mini_graph,
        vectors,
        SessionConfig(),
        Q0,
        _oracle_inputs(node_by_external),
        [q for q, _ in RUNNING_EXAMPLE_FOLLOW_UPS],
    )
    answers = [rec.answers.top_group for rec in records[1:]]
    want = [
        {node_by_external(g) for g in gold} for _, gold in RUNNING_EXAMPLE_FOLLOW_UPS
    ]
    assert answers == want
    assert [rec.turn for rec in records] == [0, 1, 2, 3, 4, 5]


def test_replay_determinism(mini_graph, vectors, node_by_external):
    def run():
        return run_conversation(
            mini_graph,
            vectors,
            SessionConfig(),
            Q0,
            _oracle_inputs(node_by_external),
            [q for q, _ in RUNNING_EXAMPLE_FOLLOW_UPS],
        )

    a, b = run(), run()
    for ra, rb in zip(a, b):
        assert ra.frontiers == rb.frontiers
        assert ra.answers == rb.answers


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(distance_cutoff=1)


def test_literal_turn_weight_mode_runs(mini_graph, vectors, node_by_external):
    from kgchat.context import TurnWeightMode

    cfg = replace(SessionConfig(), turn_weight_mode=TurnWeightMode.LITERAL)
    s = start_session(
        mini_graph, vectors, cfg, Q0, _oracle_inputs(node_by_external)
    )
    for question, _ in RUNNING_EXAMPLE_FOLLOW_UPS:
        rec = s.ask(question)
        assert rec.answers.entries
    # raw turn weights grow with t, so proximity (and scores) may leave [0, 1];
    # the mode still produces a deterministic full conversation
    assert s.turn == 6
