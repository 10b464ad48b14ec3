"""Ranked-retrieval metrics and the benchmark evaluation harness.

Metrics use the deterministic total order (ties already broken by node
id inside the rankings): precision at rank one, reciprocal rank of the
best-ranked gold item, and a hit indicator for the top five. A gold
item matches a node by external id, else by normalized label/literal
equality. Evaluation averages uniformly over all follow-up turns
(turn 0 is excluded); a per-conversation mean is reported as the
alternative aggregation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .baselines import chain_answer, no_frontier_answer, star_answer
from .benchmark import BenchmarkConversation, expand_paraphrases
from .context import initialize_context
from .embeddings import WordVectorTable
from .engine import FirstTurnMode, SessionConfig, TurnFailure, start_session
from .kg import KnowledgeGraph, NodeKind
from .linking import FirstTurnError

logger = logging.getLogger(__name__)

__all__ = [
    "p_at_1",
    "mrr",
    "hit_at_5",
    "gold_matcher",
    "EvalReport",
    "evaluate",
    "STRATEGIES",
]


def _gold_rank(ranked_nodes: Sequence[int], gold_nodes: set[int]) -> Optional[int]:
    for position, node in enumerate(ranked_nodes, start=1):
        if node in gold_nodes:
            return position
    return None


def p_at_1(ranked_nodes: Sequence[int], gold_nodes: set[int]) -> float:
    """1 iff the rank-1 entry is a gold item."""
    return 1.0 if _gold_rank(ranked_nodes, gold_nodes) == 1 else 0.0


def mrr(ranked_nodes: Sequence[int], gold_nodes: set[int]) -> float:
    """Reciprocal rank of the best-ranked gold item, 0 if absent."""
    rank = _gold_rank(ranked_nodes, gold_nodes)
    return 0.0 if rank is None else 1.0 / rank


def hit_at_5(ranked_nodes: Sequence[int], gold_nodes: set[int]) -> float:
    """1 iff a gold item appears within the top five positions."""
    rank = _gold_rank(ranked_nodes, gold_nodes)
    return 1.0 if rank is not None and rank <= 5 else 0.0


def gold_matcher(g: KnowledgeGraph) -> Callable[[str], set[int]]:
    """Resolves a gold item (external id or literal/label text) to nodes."""
    by_external: dict[str, list[int]] = {}
    for node in g.nodes:
        if node.external_id:
            by_external.setdefault(node.external_id, []).append(node.node_id)

    def resolve(gold: str) -> set[int]:
        hits = set(by_external.get(gold, ()))
        if hits:
            return hits
        return {
            node_id
            for node_id in g.lookup_label(gold)
            if g.nodes[node_id].kind in (NodeKind.ENTITY, NodeKind.LITERAL)
        }

    return resolve


# ----------------------------------------------------------------------
# evaluation harness
# ----------------------------------------------------------------------

ERROR_NOT_IN_GRAPH = "answer_not_in_expanded_graph"
ERROR_NOT_TOP1 = "answer_in_graph_not_top1"
ERROR_FIRST_TURN = "first_turn_failure"


@dataclass
class TurnOutcome:
    conversation_id: str
    domain: str
    turn_index: int  # 1-based follow-up index
    p1: float
    rr: float
    hit5: float
    error_category: Optional[str] = None
    distance_from_seed: Optional[int] = None


@dataclass
class EvalReport:
    strategy: str
    outcomes: list[TurnOutcome] = field(default_factory=list)
    unresolved_golds: int = 0
    conversations: int = 0

    # ---- aggregations -------------------------------------------------

    @staticmethod
    def _mean(values: Sequence[float]) -> float:
        return sum(values) / len(values) if values else 0.0

    def metrics(self, rows: Optional[Sequence[TurnOutcome]] = None) -> dict[str, float]:
        rows = list(self.outcomes if rows is None else rows)
        return {
            "p_at_1": self._mean([r.p1 for r in rows]),
            "mrr": self._mean([r.rr for r in rows]),
            "hit_at_5": self._mean([r.hit5 for r in rows]),
            "turns": float(len(rows)),
        }

    def domains(self) -> list[str]:
        return sorted({r.domain for r in self.outcomes})

    def per_domain(self) -> dict[str, dict[str, float]]:
        return {
            d: self.metrics([r for r in self.outcomes if r.domain == d])
            for d in self.domains()
        }

    def per_turn(self) -> dict[int, dict[str, float]]:
        indexes = sorted({r.turn_index for r in self.outcomes})
        return {
            i: self.metrics([r for r in self.outcomes if r.turn_index == i])
            for i in indexes
        }

    def per_conversation_mean(self) -> dict[str, float]:
        """Alternative aggregation: average of per-conversation averages."""
        by_conv: dict[str, list[TurnOutcome]] = {}
        for r in self.outcomes:
            by_conv.setdefault(r.conversation_id, []).append(r)
        means = [self.metrics(rows) for rows in by_conv.values()]
        return {
            "p_at_1": self._mean([m["p_at_1"] for m in means]),
            "mrr": self._mean([m["mrr"] for m in means]),
            "hit_at_5": self._mean([m["hit_at_5"] for m in means]),
            "turns": float(len(means)),
        }

    def error_breakdown(self) -> dict[str, float]:
        """Percentages of total errors per category."""
        errors = [r for r in self.outcomes if r.p1 == 0.0]
        counts = {ERROR_NOT_IN_GRAPH: 0, ERROR_NOT_TOP1: 0, ERROR_FIRST_TURN: 0}
        for r in errors:
            if r.error_category in counts:
                counts[r.error_category] += 1
        total = len(errors)
        if total == 0:
            return {k: 0.0 for k in counts}
        return {k: 100.0 * v / total for k, v in counts.items()}


def _resolve_oracle(
    g: KnowledgeGraph,
    resolve: Callable[[str], set[int]],
    conv: BenchmarkConversation,
) -> tuple[list[int], list[int], int]:
    unresolved = 0
    seeds = sorted(resolve(conv.seed_external_id) or g.lookup_label(conv.seed_label))
    seeds = [n for n in seeds if g.nodes[n].kind is NodeKind.ENTITY]
    a0: list[int] = []
    for gold in conv.turns[0].gold:
        nodes = resolve(gold)
        if not nodes:
            unresolved += 1
        a0.extend(sorted(nodes))
    return seeds, a0, unresolved


def _engine_rankings(
    g, emb, cfg, conv, seeds, a0
) -> tuple[list[tuple[list[int], Optional[set[int]]]], Optional[str]]:
    """Per-follow-up (ranked nodes, expanded node set) for the engine."""
    try:
        if cfg.first_turn_mode is FirstTurnMode.ORACLE:
            session = start_session(g, emb, cfg, conv.turns[0].question, (seeds, a0))
        else:
            session = start_session(g, emb, cfg, conv.turns[0].question, None)
    except (FirstTurnError, ValueError) as exc:
        logger.warning("first turn failed for %s: %s", conv.conversation_id, exc)
        return [], ERROR_FIRST_TURN
    out = []
    for turn in conv.turns[1:]:
        try:
            record = session.ask(turn.question)
            out.append((list(record.top_nodes()), set(session.ctx.node_set)))
        except TurnFailure:
            out.append(([], set(session.ctx.node_set)))
    return out, None


def _single_shot_rankings(
    g, emb, cfg, conv, seeds, a0, flavor: str
) -> tuple[list[tuple[list[int], Optional[set[int]]]], Optional[str]]:
    previous = list(a0)
    out = []
    ctx = None
    if flavor == "no_frontier":
        try:
            ctx = initialize_context(g, seeds, a0)
        except ValueError:
            return [], ERROR_FIRST_TURN
    for turn in conv.turns[1:]:
        try:
            if flavor == "star":
                scored = star_answer(g, emb, seeds, turn.question)
            elif flavor == "chain":
                scored = chain_answer(g, emb, previous, turn.question)
            else:
                scored = no_frontier_answer(
                    g, emb, ctx, turn.question, cfg.frontier_hp,
                    cfg.turn_weight_mode, cfg.distance_cutoff,
                )
        except (FirstTurnError, ValueError):
            out.append(([], None))
            previous = []
            continue
        nodes = [n for n, _ in scored]
        if flavor in ("star", "chain"):
            # single-answer systems: P@1, MRR and Hit@5 coincide
            nodes = nodes[:1]
        out.append((nodes, None))
        previous = nodes[:1]
        if flavor == "no_frontier" and nodes:
            from .context import QaNode, QaRole

            ctx.qa_registry.append(QaNode(nodes[0], QaRole.ANSWER, ctx.turn))
            ctx.turn += 1
    return out, None


STRATEGIES = ("engine", "star", "chain", "no_frontier")


def evaluate(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    strategy: str,
    benchmark: Sequence[BenchmarkConversation],
    cfg: SessionConfig = SessionConfig(),
    expand_paraphrase_variants: bool = False,
) -> EvalReport:
    """Runs a strategy over every conversation and aggregates metrics."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if not benchmark:
        raise ValueError("empty benchmark")
    conversations: list[BenchmarkConversation] = []
    for conv in benchmark:
        if expand_paraphrase_variants:
            conversations.extend(expand_paraphrases(conv))
        else:
            conversations.append(conv)

    resolve = gold_matcher(g)
    report = EvalReport(strategy=strategy, conversations=len(conversations))
    for conv in conversations:
        seeds, a0, unresolved = _resolve_oracle(g, resolve, conv)
        report.unresolved_golds += unresolved
        if not seeds:
            report.unresolved_golds += 1
            seeds = []
        if strategy == "engine":
            rankings, failure = _engine_rankings(g, emb, cfg, conv, seeds, a0)
        else:
            if not seeds:
                rankings, failure = [], ERROR_FIRST_TURN
            else:
                rankings, failure = _single_shot_rankings(
                    g, emb, cfg, conv, seeds, a0, strategy
                )
        seed_maps = [g.distance_map(s, 32) for s in seeds]
        for idx, turn in enumerate(conv.turns[1:], start=1):
            gold_nodes: set[int] = set()
            for gold in turn.gold:
                nodes = resolve(gold)
                if not nodes:
                    report.unresolved_golds += 1
                gold_nodes.update(nodes)
            if failure is not None or idx > len(rankings):
                ranked_nodes: list[int] = []
                expanded = None
                category = failure or ERROR_FIRST_TURN
            else:
                ranked_nodes, expanded = rankings[idx - 1]
                category = None
            p1 = p_at_1(ranked_nodes, gold_nodes)
            if p1 == 0.0 and category is None:
                if expanded is not None:
                    category = (
                        ERROR_NOT_TOP1
                        if gold_nodes & expanded
                        else ERROR_NOT_IN_GRAPH
                    )
                else:
                    category = ERROR_NOT_TOP1
            dist = None
            if gold_nodes and seed_maps:
                ds = [
                    m[n] for m in seed_maps for n in gold_nodes if n in m
                ]
                dist = min(ds) if ds else None
            report.outcomes.append(
                TurnOutcome(
                    conversation_id=conv.conversation_id,
                    domain=conv.domain,
                    turn_index=idx,
                    p1=p1,
                    rr=mrr(ranked_nodes, gold_nodes),
                    hit5=hit_at_5(ranked_nodes, gold_nodes),
                    error_category=None if p1 == 1.0 else category,
                    distance_from_seed=dist,
                )
            )
    return report
