"""Conversation context: the growing subgraph and the QA-node registry.

The context graph anchors a conversation in the KG. It holds the node
and fact sets seen so far plus a registry of question/answer nodes with
the turn at which they appeared. Expansion adds all facts of the chosen
frontier nodes and registers entity frontiers as this turn's question
entities.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from .kg import KnowledgeGraph, NodeKind

logger = logging.getLogger(__name__)

if TYPE_CHECKING:  # pragma: no cover
    from .frontier import FrontierScore

__all__ = [
    "QaRole",
    "QaNode",
    "TurnWeightMode",
    "ContextGraph",
    "initialize_context",
    "turn_weight",
    "expand",
    "context_snapshot",
]


class QaRole(Enum):
    QUESTION = "question"
    ANSWER = "answer"


class TurnWeightMode(Enum):
    NORMALIZED = "normalized"
    LITERAL = "literal"


@dataclass(frozen=True)
class QaNode:
    node: int
    role: QaRole
    turn_seen: int


@dataclass
class ContextGraph:
    node_set: set[int]
    fact_set: set[int]
    qa_registry: list[QaNode]
    turn: int = 1

    def copy(self) -> "ContextGraph":
        return ContextGraph(
            set(self.node_set), set(self.fact_set), list(self.qa_registry), self.turn
        )

    def scoring_registry(self) -> list[QaNode]:
        """Registry entries eligible when scoring the current turn."""
        return [e for e in self.qa_registry if e.turn_seen < self.turn]


def _add_fact(ctx: ContextGraph, g: KnowledgeGraph, fact_id: int) -> None:
    ctx.fact_set.add(fact_id)
    ctx.node_set.update(g.facts[fact_id].nodes())


def _connecting_path_facts(
    g: KnowledgeGraph, a: int, b: int, max_edges: int = 4
) -> Optional[list[int]]:
    """Facts along one shortest a-b path of at most max_edges edges.

    Deterministic: BFS visits neighbors in sorted node order, so the
    first path found is the lexicographically smallest shortest one.
    """
    if a == b:
        return []
    parent: dict[int, int] = {a: -1}
    queue = [a]
    depth = 0
    found = False
    while queue and depth < max_edges and not found:
        nxt = []
        for cur in queue:
            for nb in g.adjacency[cur]:
                if nb not in parent:
                    parent[nb] = cur
                    if nb == b:
                        found = True
                        break
                    nxt.append(nb)
            if found:
                break
        queue = nxt
        depth += 1
    if not found:
        return None
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    facts: list[int] = []
    for node_id in path:
        if g.nodes[node_id].kind is NodeKind.PREDICATE:
            # a predicate instance belongs to exactly one fact
            facts.extend(g.facts_of(node_id))
    return sorted(set(facts))


def initialize_context(
    g: KnowledgeGraph,
    q0_entities: Iterable[int],
    a0: Iterable[int],
    connect_cutoff: int = 4,
) -> ContextGraph:
    """Builds the first-turn context from question entities and answers.

    The context holds both node groups plus connecting facts: facts that
    contain a question entity together with an answer node, else the
    facts along one shortest path (within ``connect_cutoff`` edges, i.e.
    two fact hops by default). Unreachable pairs stay as bare nodes.
    """
    q0_list = list(dict.fromkeys(q0_entities))
    a0_list = list(dict.fromkeys(a0))
    if not q0_list:
        raise ValueError("q0 entity set must be non-empty")
    ctx = ContextGraph(set(), set(), [], turn=1)
    for node_id in q0_list + a0_list:
        g._check_node(node_id)
        ctx.node_set.add(node_id)
    for q in q0_list:
        for a in a0_list:
            if q == a:
                continue
            joint = [
                f for f in g.facts_of(q) if a in g.facts[f].nodes()
            ]
            if joint:
                for fact_id in joint:
                    _add_fact(ctx, g, fact_id)
                continue
            path_facts = _connecting_path_facts(g, q, a, connect_cutoff)
            if path_facts:
                for fact_id in path_facts:
                    _add_fact(ctx, g, fact_id)
            else:
                logger.warning(
                    "no connecting path within %d edges between %s and %s; "
                    "context keeps them as bare nodes",
                    connect_cutoff,
                    g.nodes[q].label,
                    g.nodes[a].label,
                )
    for q in q0_list:
        ctx.qa_registry.append(QaNode(q, QaRole.QUESTION, 0))
    for a in a0_list:
        ctx.qa_registry.append(QaNode(a, QaRole.ANSWER, 0))
    return ctx


def turn_weight(
    entry: QaNode, turn: int, mode: TurnWeightMode = TurnWeightMode.NORMALIZED
) -> float:
    """Recency weight of a QA registry entry when scoring ``turn``.

    The first question's entities are promoted to the maximum raw weight
    (turn - 1); everything else keeps the turn it was seen at. In
    normalized mode weights are divided by (turn - 1), which pins the
    promoted entries at 1.0 for every turn and zeroes turn-0 answers.
    """
    promoted = entry.role is QaRole.QUESTION and entry.turn_seen == 0
    raw = float(turn - 1) if promoted else float(entry.turn_seen)
    if mode is TurnWeightMode.LITERAL:
        return raw
    if promoted:
        return 1.0
    if turn <= 1:
        # only turn-0 answers can land here; their raw weight is 0
        return 0.0
    return raw / float(turn - 1)


def expand(
    ctx: ContextGraph, g: KnowledgeGraph, frontiers: Sequence["FrontierScore"]
) -> ContextGraph:
    """Returns the expanded context: all facts of every frontier added.

    Entity-kind frontiers become this turn's question entities in the
    registry. The input context is not mutated.
    """
    if not frontiers:
        raise ValueError("expand requires a non-empty frontier set")
    out = ctx.copy()
    for fs in frontiers:
        for fact_id in g.facts_of(fs.node):
            _add_fact(out, g, fact_id)
        out.node_set.add(fs.node)
        if g.nodes[fs.node].kind is NodeKind.ENTITY:
            out.qa_registry.append(QaNode(fs.node, QaRole.QUESTION, ctx.turn))
    return out


def context_snapshot(
    ctx: ContextGraph,
    g: KnowledgeGraph,
    frontiers: Sequence["FrontierScore"] = (),
    node_cap: int = 500,
) -> dict:
    """Exportable view of the context for the UI and debugging.

    Nodes beyond ``node_cap`` are dropped lowest-score-first, where a
    node's score is its best frontier score (frontier nodes always
    survive) and registry nodes outrank plain ones.
    """
    frontier_by_node = {fs.node: fs for fs in frontiers}
    roles: dict[int, list[dict]] = {}
    for entry in ctx.qa_registry:
        roles.setdefault(entry.node, []).append(
            {"role": entry.role.value, "turn": entry.turn_seen}
        )

    def sort_key(node_id: int) -> tuple:
        fs = frontier_by_node.get(node_id)
        return (
            0 if fs is not None else 1,
            -(fs.combined if fs is not None else 0.0),
            0 if node_id in roles else 1,
            node_id,
        )

    ordered = sorted(ctx.node_set, key=sort_key)
    kept = set(ordered[:node_cap])
    nodes = [
        {
            "id": node_id,
            "kind": g.nodes[node_id].kind.value,
            "label": g.nodes[node_id].label,
            "external_id": g.nodes[node_id].external_id,
            "qa_roles": roles.get(node_id, []),
            "frontier": node_id in frontier_by_node,
        }
        for node_id in sorted(kept)
    ]
    facts = []
    for fact_id in sorted(ctx.fact_set):
        f = g.facts[fact_id]
        if not kept.issuperset(f.nodes()):
            continue
        facts.append(
            {
                "id": fact_id,
                "subject": f.subject,
                "predicate": f.predicate,
                "object": f.object,
                "qualifiers": [list(q) for q in f.qualifiers],
            }
        )
    return {
        "turn": ctx.turn,
        "node_count": len(ctx.node_set),
        "fact_count": len(ctx.fact_set),
        "exported_nodes": len(nodes),
        "node_cap": node_cap,
        "nodes": nodes,
        "facts": facts,
        "frontiers": [
            {
                "node": fs.node,
                "label": g.nodes[fs.node].label,
                "match": fs.match,
                "proximity": fs.prox,
                "prior": fs.prior,
                "combined": fs.combined,
            }
            for fs in frontiers
        ],
    }
