import pytest

from kgchat.benchmark import (
    BenchmarkConversation,
    BenchmarkTurn,
    expand_paraphrases,
    load_benchmark,
)
from kgchat.engine import SessionConfig
from kgchat.evaluation import evaluate, gold_matcher, hit_at_5, mrr, p_at_1

# 20 hand-computed metric cases: (ranked nodes, gold nodes, P@1, MRR, Hit@5)
METRIC_TABLE = [
    ([1, 2, 3], {1}, 1.0, 1.0, 1.0),
    ([1, 2, 3], {2}, 0.0, 0.5, 1.0),
    ([], {1}, 0.0, 0.0, 0.0),
    ([5], {5}, 1.0, 1.0, 1.0),
    ([5], {6}, 0.0, 0.0, 0.0),
    ([1, 2, 3, 4, 5], {5}, 0.0, 0.2, 1.0),
    ([1, 2, 3, 4, 5, 6], {6}, 0.0, 1 / 6, 0.0),
    ([9, 8, 7], {7, 8}, 0.0, 0.5, 1.0),
    ([9, 8, 7], {9, 7}, 1.0, 1.0, 1.0),
    ([4, 3, 2, 1], {1, 9}, 0.0, 0.25, 1.0),
    ([2, 4, 6, 8, 10, 12, 14], {12, 14}, 0.0, 1 / 6, 0.0),
    ([10, 20, 30], {40, 50}, 0.0, 0.0, 0.0),
    ([3, 1, 4, 1, 5], {4}, 0.0, 1 / 3, 1.0),
    ([1], {1, 2, 3}, 1.0, 1.0, 1.0),
    ([7, 7, 7], {7}, 1.0, 1.0, 1.0),
    ([2, 9], {9}, 0.0, 0.5, 1.0),
    ([1, 2, 3, 4], {3, 4}, 0.0, 1 / 3, 1.0),
    ([6, 5, 4, 3, 2, 1], {1}, 0.0, 1 / 6, 0.0),
    ([11, 12, 13, 14, 15], {13}, 0.0, 1 / 3, 1.0),
    ([42], {42, 43, 44}, 1.0, 1.0, 1.0),
]


@pytest.mark.parametrize("ranked,gold,want_p1,want_mrr,want_hit5", METRIC_TABLE)
def test_metric_table(ranked, gold, want_p1, want_mrr, want_hit5):
    assert p_at_1(ranked, gold) == want_p1
    assert mrr(ranked, gold) == pytest.approx(want_mrr)
    assert hit_at_5(ranked, gold) == want_hit5


def test_metric_ordering_invariants():
    for ranked, gold, *_ in METRIC_TABLE:
        assert p_at_1(ranked, gold) <= hit_at_5(ranked, gold)
        assert p_at_1(ranked, gold) <= mrr(ranked, gold) <= 1.0


def test_mrr_best_rank_of_two_golds():
    assert mrr([1, 2, 3, 4, 5], {3, 5}) == pytest.approx(1 / 3)


def test_gold_matcher(mini_graph, node_by_external):
    resolve = gold_matcher(mini_graph)
    assert resolve("Q14") == {node_by_external("Q14")}
    assert resolve("Jimmy Webb") == {node_by_external("Q14")}
    assert resolve("19 November 1982") != set()
    assert resolve("definitely missing") == set()


# ----------------------------------------------------------------------
# benchmark loading / paraphrases
# ----------------------------------------------------------------------


def test_load_benchmark(benchmark_path):
    convs = load_benchmark(benchmark_path)
    assert len(convs) == 5
    main = convs[0]
    assert main.domain == "movies"
    assert len(main.turns) == 6
    assert main.turns[4].gold == ("Q17", "Q18")


def test_benchmark_validation():
    with pytest.raises(ValueError):
        BenchmarkConversation("x", "movies", "Q1", "l", ())
    with pytest.raises(ValueError):
        BenchmarkConversation(
            "x", "movies", "Q1", "l",
            (BenchmarkTurn("q", tuple(f"Q{i}" for i in range(4))),),
        )


def test_paraphrase_expansion_counts():
    turns = tuple(
        BenchmarkTurn(f"q{i}", ("Q1",), paraphrase=f"p{i}") for i in range(5)
    )
    conv = BenchmarkConversation("c", "movies", "Q1", "seed", turns)
    variants = expand_paraphrases(conv)
    assert len(variants) == 2 ** 5 == 32
    texts = {tuple(t.question for t in v.turns) for v in variants}
    assert len(texts) == 32
    # no paraphrases -> single variant
    bare = BenchmarkConversation(
        "c", "movies", "Q1", "seed", (BenchmarkTurn("q", ("Q1",)),)
    )
    assert len(expand_paraphrases(bare)) == 1


# ----------------------------------------------------------------------
# evaluation harness
# ----------------------------------------------------------------------


def test_engine_perfect_on_running_example(mini_graph, vectors, benchmark_path):
    convs = [c for c in load_benchmark(benchmark_path) if c.conversation_id == "movies-unicorn"]
    report = evaluate(mini_graph, vectors, "engine", convs, SessionConfig())
    m = report.metrics()
    assert m["p_at_1"] == 1.0
    assert m["turns"] == 5.0


def test_chain_below_engine_on_running_example(mini_graph, vectors, benchmark_path):
    convs = [c for c in load_benchmark(benchmark_path) if c.conversation_id == "movies-unicorn"]
    report = evaluate(mini_graph, vectors, "chain", convs, SessionConfig())
    assert report.metrics()["p_at_1"] < 1.0


def test_single_answer_strategies_metric_identity(mini_graph, vectors, benchmark_path):
    convs = load_benchmark(benchmark_path)
    for strategy in ("star", "chain"):
        report = evaluate(mini_graph, vectors, strategy, convs, SessionConfig())
        m = report.metrics()
        assert m["p_at_1"] == m["mrr"] == m["hit_at_5"]


def test_metrics_invariant_to_conversation_order(mini_graph, vectors, benchmark_path):
    convs = load_benchmark(benchmark_path)
    a = evaluate(mini_graph, vectors, "engine", convs, SessionConfig()).metrics()
    b = evaluate(mini_graph, vectors, "engine", list(reversed(convs)), SessionConfig()).metrics()
    assert a == b


def test_unresolvable_gold_counts_as_miss(mini_graph, vectors):
    conv = BenchmarkConversation(
        "broken",
        "movies",
        "Q1",
        "The Last Unicorn",
        (
            BenchmarkTurn("Which actor voiced the Unicorn in The Last Unicorn?", ("Q4",)),
            BenchmarkTurn("And Alan Arkin was behind ...?", ("Q9999",)),
        ),
    )
    report = evaluate(mini_graph, vectors, "engine", [conv], SessionConfig())
    assert report.unresolved_golds >= 1
    assert report.metrics()["p_at_1"] == 0.0


def test_empty_benchmark_rejected(mini_graph, vectors):
    with pytest.raises(ValueError):
        evaluate(mini_graph, vectors, "engine", [], SessionConfig())
    with pytest.raises(ValueError):
        evaluate(mini_graph, vectors, "nonsense", [object()], SessionConfig())


def test_error_categories_present(mini_graph, vectors, benchmark_path):
    convs = load_benchmark(benchmark_path)
    report = evaluate(mini_graph, vectors, "chain", convs, SessionConfig())
    breakdown = report.error_breakdown()
    assert set(breakdown) == {
        "answer_not_in_expanded_graph",
        "answer_in_graph_not_top1",
        "first_turn_failure",
    }
    assert sum(breakdown.values()) == pytest.approx(100.0)


def test_per_turn_and_domain_tables(mini_graph, vectors, benchmark_path):
    report = evaluate(
        mini_graph, vectors, "engine", load_benchmark(benchmark_path), SessionConfig()
    )
    per_turn = report.per_turn()
    assert set(per_turn) == {1, 2, 3, 4, 5}
    domains = report.per_domain()
    assert set(domains) == {"movies", "music", "books"}
    for metrics in list(per_turn.values()) + list(domains.values()):
        for key in ("p_at_1", "mrr", "hit_at_5"):
            assert 0.0 <= metrics[key] <= 1.0


def test_paraphrase_variant_evaluation(mini_graph, vectors):
    conv = BenchmarkConversation(
        "p",
        "movies",
        "Q1",
        "The Last Unicorn",
        (
            BenchmarkTurn(
                "Which actor voiced the Unicorn in The Last Unicorn?", ("Q4",), None
            ),
            BenchmarkTurn(
                "Who did the score?", ("Q14",), "Who was the score by?"
            ),
        ),
    )
    report = evaluate(
        mini_graph, vectors, "engine", [conv], SessionConfig(),
        expand_paraphrase_variants=True,
    )
    assert report.conversations == 2
    assert report.metrics()["turns"] == 2.0
