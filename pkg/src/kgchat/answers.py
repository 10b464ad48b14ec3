"""Answer ranking inside the expanded context.

Candidates are the entity and literal nodes of the expanded context,
minus the frontier nodes themselves (an entity frontier would trivially
dominate through the capped self-distance and hand the question's own
entity back as its answer). Each candidate is scored by weighted
proximity to the frontiers and to the registered question/answer nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .context import ContextGraph, TurnWeightMode, turn_weight
from .frontier import DEFAULT_DISTANCE_CUTOFF, FrontierScore, reciprocal
from .kg import KnowledgeGraph, NodeKind

logger = logging.getLogger(__name__)

__all__ = ["AnswerHyperparams", "RankedAnswer", "RankedAnswers", "rank_answers"]


@dataclass(frozen=True)
class AnswerHyperparams:
    h1: float = 0.85  # frontier proximity weight
    h2: float = 0.15  # context proximity weight

    def __post_init__(self):
        if min(self.h1, self.h2) < 0:
            raise ValueError("answer weights must be non-negative")
        if abs(self.h1 + self.h2 - 1.0) > 1e-9:
            raise ValueError("answer weights must sum to 1")


@dataclass(frozen=True)
class RankedAnswer:
    node: int
    score: float
    rank: int
    frontier_term: float
    context_term: float


@dataclass(frozen=True)
class RankedAnswers:
    entries: tuple[RankedAnswer, ...]
    top_group: frozenset[int]

    def top(self) -> Optional[RankedAnswer]:
        return self.entries[0] if self.entries else None

    def rank_of(self, node_id: int) -> Optional[int]:
        for entry in self.entries:
            if entry.node == node_id:
                return entry.rank
        return None


def rank_answers(
    g: KnowledgeGraph,
    ctx_expanded: ContextGraph,
    frontiers: Sequence[FrontierScore],
    hp: AnswerHyperparams = AnswerHyperparams(),
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
) -> RankedAnswers:
    """Scores every eligible node of the expanded context.

    score(a) = h1 * sum_i combined(F_i) / max(d(a, F_i), 1) / r
             + h2 * sum_x w(x) / max(d(a, x), 1) / |registry|

    Ranked descending with node-id tie-break; the top group is the set
    of entries tied at the maximum score.
    """
    if not frontiers:
        raise ValueError("rank_answers requires a non-empty frontier list")
    frontier_nodes = {fs.node for fs in frontiers}
    candidates = [
        node_id
        for node_id in sorted(ctx_expanded.node_set)
        if node_id not in frontier_nodes
        and g.nodes[node_id].kind in (NodeKind.ENTITY, NodeKind.LITERAL)
    ]
    if not candidates:
        logger.warning("expanded context has no entity/literal candidates")
        return RankedAnswers((), frozenset())

    frontier_maps = [(fs, g.distance_map(fs.node, cutoff)) for fs in frontiers]
    registry = ctx_expanded.scoring_registry()
    weighted_registry = [
        (entry, turn_weight(entry, ctx_expanded.turn, mode)) for entry in registry
    ]
    registry_maps = {
        entry.node: g.distance_map(entry.node, cutoff)
        for entry, weight in weighted_registry
        if weight > 0.0
    }

    scored: list[tuple[float, float, float, int]] = []
    for node_id in candidates:
        fterm = sum(
            fs.combined * reciprocal(dmap.get(node_id)) for fs, dmap in frontier_maps
        ) / len(frontiers)
        cterm = 0.0
        if weighted_registry:
            cterm = sum(
                weight * reciprocal(registry_maps[entry.node].get(node_id))
                for entry, weight in weighted_registry
                if weight > 0.0
            ) / len(weighted_registry)
        score = hp.h1 * fterm + hp.h2 * cterm
        scored.append((score, fterm, cterm, node_id))

    scored.sort(key=lambda row: (-row[0], row[3]))
    entries = tuple(
        RankedAnswer(node_id, score, rank, fterm, cterm)
        for rank, (score, fterm, cterm, node_id) in enumerate(scored, start=1)
    )
    best = entries[0].score
    top_group = frozenset(e.node for e in entries if e.score == best)
    return RankedAnswers(entries, top_group)
