import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from kgchat.kg import GraphFormatError, NodeKind, load_graph, normalize_label

from .conftest import graph_from_text
from .synthetic import random_graph


def test_empty_input_gives_empty_graph():
    g = graph_from_text("")
    assert g.node_count == 0
    assert g.fact_count == 0


def test_single_line_minimal_fact():
    g = graph_from_text("Q1\tP2\tQ3\n")
    assert g.fact_count == 1
    assert g.node_count == 3
    assert sum(1 for n in g.nodes if n.kind is NodeKind.ENTITY) == 2
    assert sum(1 for n in g.nodes if n.kind is NodeKind.PREDICATE) == 1
    edges = sum(len(adj) for adj in g.adjacency) // 2
    assert edges == 2


def test_shared_predicate_name_makes_distinct_instances():
    g = graph_from_text("Q1\tP2\tQ3\nQ4\tP2\tQ5\n")
    preds = [n for n in g.nodes if n.kind is NodeKind.PREDICATE]
    assert len(preds) == 2
    assert preds[0].predicate_name == preds[1].predicate_name == "P2"
    s1 = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    o2 = next(n.node_id for n in g.nodes if n.external_id == "Q5")
    # no path subject1 - merged predicate - object2
    assert g.distance(s1, o2, 10) is None


def test_marriage_facts_do_not_join():
    g = graph_from_text("Q1\tPmarried\tQ2\nQ3\tPmarried\tQ4\n")
    e1 = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    e4 = next(n.node_id for n in g.nodes if n.external_id == "Q4")
    d = g.distance(e1, e4, 10)
    assert d is None or d > 2


def test_qualifier_edges_and_dedup():
    g = graph_from_text("Q1\tP1\tQ2\tP2=Q3\nQ4\tP1\tQ3\n")
    # Q3 deduplicated between qualifier value and object slots
    q3 = [n for n in g.nodes if n.external_id == "Q3"]
    assert len(q3) == 1
    f0 = g.facts[0]
    assert len(f0.qualifiers) == 1
    qp, qv = f0.qualifiers[0]
    assert g.nodes[qp].kind is NodeKind.PREDICATE
    assert qv == q3[0].node_id
    # qualifier predicate hangs off the main predicate instance
    assert qp in g.adjacency[f0.predicate]
    assert qv in g.adjacency[qp]


def test_malformed_line_reports_line_number():
    with pytest.raises(GraphFormatError) as err:
        graph_from_text("Q1\tP1\tQ2\n\nQ1\tP1\n")
    assert "line 3" in str(err.value)
    assert err.value.line_no == 3


def test_duplicate_fact_rejected():
    with pytest.raises(GraphFormatError) as err:
        graph_from_text("Q1\tP1\tQ2\nQ1\tP1\tQ2\n")
    assert "duplicate" in str(err.value)


def test_qualifier_without_fact_rejected():
    with pytest.raises(GraphFormatError) as err:
        graph_from_text("P2=Q3\tP1\tQ2\n")
    assert "qualifier" in str(err.value)


def test_non_entity_subject_rejected():
    with pytest.raises(GraphFormatError):
        graph_from_text("C1\tP1\tQ2\n")


def test_comments_and_literals():
    g = graph_from_text('# header\nQ1\tP1\t"19 November 1982"\nQ1\tP2\tC9\n')
    lits = [n for n in g.nodes if n.kind is NodeKind.LITERAL]
    classes = [n for n in g.nodes if n.kind is NodeKind.KG_CLASS]
    assert [n.label for n in lits] == ["19 November 1982"]
    assert [n.external_id for n in classes] == ["C9"]


# ----------------------------------------------------------------------
# neighborhood / distance / facts_of
# ----------------------------------------------------------------------


def test_neighborhood_radius_zero_is_seeds():
    g = graph_from_text("Q1\tP1\tQ2\n")
    s = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    assert g.neighborhood([s], 0) == {s}


def test_neighborhood_one_fact_spans_two_edges():
    g = graph_from_text("Q1\tP1\tQ2\n")
    s = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    assert len(g.neighborhood([s], 2)) == 3


def test_neighborhood_star_one_hop():
    lines = "".join(f"Q1\tP1\tQ{i}\n" for i in range(2, 7))
    g = graph_from_text(lines)
    s = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    hood = g.neighborhood([s], 1)
    # the five predicate instances plus the seed
    assert len(hood) == 6
    kinds = {g.nodes[n].kind for n in hood - {s}}
    assert kinds == {NodeKind.PREDICATE}


def test_distance_identity_and_one_fact():
    g = graph_from_text("Q1\tP1\tQ2\n")
    s = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    o = next(n.node_id for n in g.nodes if n.external_id == "Q2")
    assert g.distance(s, s, 0) == 0
    assert g.distance(s, o, 6) == 2


def test_distance_chain_of_three_facts():
    g = graph_from_text("Q1\tP1\tQ2\nQ2\tP2\tQ3\nQ3\tP3\tQ4\n")
    s1 = next(n.node_id for n in g.nodes if n.external_id == "Q1")
    o3 = next(n.node_id for n in g.nodes if n.external_id == "Q4")
    assert g.distance(s1, o3, 10) == 6
    assert g.distance(s1, o3, 5) is None


def test_unknown_node_errors():
    g = graph_from_text("Q1\tP1\tQ2\n")
    with pytest.raises(KeyError):
        g.distance(0, 99, 5)
    with pytest.raises(KeyError):
        g.neighborhood([99], 1)
    with pytest.raises(KeyError):
        g.facts_of(99)


def test_facts_of_positions():
    text = "Q1\tP1\tQ2\tP2=Q3\nQ1\tP1\tQ4\nQ1\tP5\tQ5\nQ6\tP5\tQ1\n"
    g = graph_from_text(text)

    def nid(ext):
        return next(n.node_id for n in g.nodes if n.external_id == ext)

    # hub entity in 4 facts
    assert g.facts_of(nid("Q1")) == (0, 1, 2, 3)
    # qualifier value containment
    assert g.facts_of(nid("Q3")) == (0,)
    # predicate instance belongs to exactly one fact
    assert g.facts_of(g.facts[0].predicate) == (0,)


# ----------------------------------------------------------------------
# prior
# ----------------------------------------------------------------------


def test_prior_entity_normalization():
    text = "Q1\tP1\tQ2\nQ1\tP1\tQ3\nQ1\tP2\tQ4\nQ1\tP2\tQ5\nQ9\tP3\tQ2\n"
    g = graph_from_text(text)

    def nid(ext):
        return next(n.node_id for n in g.nodes if n.external_id == ext)

    assert g.prior(nid("Q1")) == 1.0  # max-frequency entity (4 facts)
    assert g.prior(nid("Q9")) == pytest.approx(0.25)  # 1 of max 4


def test_prior_predicate_counts_shared_name():
    lines = ["Q1\tP1\tQ2"] * 0
    text = (
        "Q1\tPa\tQ2\nQ1\tPa\tQ3\nQ1\tPa\tQ4\n"
        "Q1\tPb\tQ5\nQ1\tPb\tQ6\nQ1\tPb\tQ7\nQ2\tPb\tQ5\nQ2\tPb\tQ6\nQ2\tPb\tQ8\n"
    )
    g = graph_from_text(text)
    pa_instance = g.facts[0].predicate
    assert g.prior(pa_instance) == pytest.approx(3 / 6)
    # every instance of the same name shares the prior
    assert g.prior(g.facts[1].predicate) == pytest.approx(3 / 6)


def test_prior_counts_qualifier_predicates():
    g = graph_from_text("Q1\tPa\tQ2\tPq=Q3\nQ4\tPq\tQ5\n")
    qp = g.facts[0].qualifiers[0][0]
    # Pq appears in both facts (once as qualifier, once as main predicate)
    assert g.prior(qp) == 1.0


# ----------------------------------------------------------------------
# lookup_label
# ----------------------------------------------------------------------


def test_lookup_label_fixture(mini_graph, node_by_external):
    hits = mini_graph.lookup_label("The Last Unicorn")
    assert hits == {node_by_external("Q1")}
    assert mini_graph.lookup_label("tHe  LAST unicorn ") == hits
    assert mini_graph.lookup_label("totally unknown") == set()


def test_normalize_label():
    assert normalize_label("  The  LAST Unicorn! ") == "the last unicorn"
    assert normalize_label("'quoted'") == "quoted"


# ----------------------------------------------------------------------
# properties
# ----------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=3, max_value=25))
def test_random_graph_properties(seed, n_facts):
    rng = random.Random(seed)
    g = random_graph(rng, n_facts)
    nodes = list(range(g.node_count))
    a, b, c = (rng.choice(nodes) for _ in range(3))
    cutoff = 12
    dab = g.distance(a, b, cutoff)
    # symmetry
    assert dab == g.distance(b, a, cutoff)
    # triangle bound when all reachable
    dbc = g.distance(b, c, cutoff)
    dac = g.distance(a, c, cutoff)
    if dab is not None and dbc is not None and dac is not None:
        assert dac <= dab + dbc
    # prior range and per-kind max attained
    priors_by_kind = {}
    for n in nodes:
        p = g.prior(n)
        assert 0.0 <= p <= 1.0
        kind = g.nodes[n].kind
        priors_by_kind.setdefault(kind, []).append(p)
    for kind, values in priors_by_kind.items():
        assert max(values) == pytest.approx(1.0)
    # predicate-instance isolation
    seen = set()
    for f in g.facts:
        assert f.predicate not in seen
        seen.add(f.predicate)
    assert g.check_invariants() == []


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_roundtrip_is_isomorphic(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 20))
    dumped = io.StringIO()
    g.dump(dumped)
    labels = io.StringIO()
    g.dump_labels(labels)
    g2 = load_graph(io.StringIO(dumped.getvalue()), io.StringIO(labels.getvalue()))

    def signature(graph):
        out = []
        for f in graph.facts:
            def token(nid):
                node = graph.nodes[nid]
                return node.external_id or ("lit:" + node.label)

            out.append(
                (
                    token(f.subject),
                    graph.nodes[f.predicate].predicate_name,
                    token(f.object),
                    tuple(
                        sorted(
                            (graph.nodes[qp].predicate_name, token(qv))
                            for qp, qv in f.qualifiers
                        )
                    ),
                )
            )
        return sorted(out)

    assert signature(g) == signature(g2)
    assert g2.node_count == g.node_count
    assert g2.fact_count == g.fact_count
