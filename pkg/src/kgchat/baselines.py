"""Reference conversation strategies: star, chain, and frontier-less search.

Star fixes the reference entity to the first question's entities for
the whole conversation; chain always uses the previous answer. Both
reuse the naive answerer's predicate disambiguation. The frontier-less
variant scores the two-fact-hop neighborhood of the initial context
directly with the frontier objective and returns the top-r entities or
literals.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .context import ContextGraph, TurnWeightMode
from .embeddings import WordVectorTable, tokenize
from .frontier import (
    DEFAULT_DISTANCE_CUTOFF,
    FrontierHyperparams,
    LabelVectorCache,
    match_score,
    proximity_score,
    registry_distance_maps,
)
from .kg import KnowledgeGraph, NodeKind
from .linking import FirstTurnError, best_predicate_answer

__all__ = ["star_answer", "chain_answer", "no_frontier_answer", "no_frontier_exhaustive"]


def _question_vector(emb: WordVectorTable, question: str) -> Optional[np.ndarray]:
    vectors = [
        emb.vector(t)
        for t in tokenize(question)
        if not emb.is_stopword(t) and emb.vector(t) is not None
    ]
    return np.mean(vectors, axis=0) if vectors else None


def star_answer(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    q0_entities: Sequence[int],
    question: str,
) -> list[tuple[int, float]]:
    """Disambiguates a predicate around the first question's entities."""
    tokens = [t for t in tokenize(question) if not emb.is_stopword(t)]
    references = [(entity, tokens) for entity in q0_entities]
    return best_predicate_answer(g, emb, references, _question_vector(emb, question))


def chain_answer(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    previous_answers: Sequence[int],
    question: str,
) -> list[tuple[int, float]]:
    """Same procedure, but anchored at the previous turn's answer."""
    if not previous_answers:
        raise FirstTurnError("chain model requires a previous answer")
    tokens = [t for t in tokenize(question) if not emb.is_stopword(t)]
    references = [(entity, tokens) for entity in previous_answers]
    return best_predicate_answer(g, emb, references, _question_vector(emb, question))


def _answer_objective(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    tokens: Sequence[str],
    node_id: int,
    hp: FrontierHyperparams,
    mode: TurnWeightMode,
    cutoff: int,
    dist_maps,
    cache: LabelVectorCache,
) -> float:
    return (
        hp.h1 * match_score(g, emb, node_id, tokens, cache)
        + hp.h2 * proximity_score(g, ctx, node_id, mode, cutoff, dist_maps)
        + hp.h3 * g.prior(node_id)
    )


def no_frontier_answer(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    question: str,
    hp: FrontierHyperparams = FrontierHyperparams(),
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
    cache: Optional[LabelVectorCache] = None,
) -> list[tuple[int, float]]:
    """Branch-and-bound-style direct answer search, exact within 2 fact hops.

    Nodes are scored breadth-first outward from the context; the best
    score so far is a lower bound and exploration stops when the bounded
    neighborhood is exhausted. Match scores carry no depth information,
    so every reachable node within the bound is scored (pruning the
    traversal could silently drop the true optimum); the bound governs
    early reporting only. Returns the top-r entity/literal nodes.
    """
    if not ctx.node_set:
        raise ValueError("empty context")
    if cache is None:
        cache = LabelVectorCache(g, emb)
    tokens = tokenize(question)
    dist_maps = registry_distance_maps(g, ctx, cutoff)

    best: list[tuple[float, int]] = []  # (-score, node) heap-free small list
    bound = float("-inf")
    seen: set[int] = set(ctx.node_set)
    layer = sorted(ctx.node_set)
    depth = 0
    max_depth = 4  # two fact hops
    while layer:
        for node_id in layer:
            if g.nodes[node_id].kind not in (NodeKind.ENTITY, NodeKind.LITERAL):
                continue
            score = _answer_objective(
                g, emb, ctx, tokens, node_id, hp, mode, cutoff, dist_maps, cache
            )
            best.append((-score, node_id))
            best.sort()
            if len(best) > hp.r:
                best.pop()
            if len(best) == hp.r:
                bound = -best[-1][0]
        if depth >= max_depth:
            break
        nxt: list[int] = []
        for node_id in layer:
            for nb in g.adjacency[node_id]:
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        layer = sorted(nxt)
        depth += 1
    del bound  # stop criterion is neighborhood exhaustion within the hop bound
    return [(node, -neg) for neg, node in best]


def no_frontier_exhaustive(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    question: str,
    hp: FrontierHyperparams = FrontierHyperparams(),
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
) -> list[tuple[int, float]]:
    """Independent oracle: score the whole 4-edge neighborhood and sort."""
    tokens = tokenize(question)
    cache = LabelVectorCache(g, emb)
    dist_maps = registry_distance_maps(g, ctx, cutoff)
    candidates = [
        node_id
        for node_id in sorted(g.neighborhood(ctx.node_set, 4))
        if g.nodes[node_id].kind in (NodeKind.ENTITY, NodeKind.LITERAL)
    ]
    scored = [
        (
            node_id,
            _answer_objective(
                g, emb, ctx, tokens, node_id, hp, mode, cutoff, dist_maps, cache
            ),
        )
        for node_id in candidates
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[: hp.r]
