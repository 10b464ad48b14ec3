"""Frontier selection: three-signal scoring plus threshold aggregation.

Every candidate in the context neighborhood is scored by question match
(max over question words of normalized label/word cosine), proximity to
the registered question/answer nodes (turn-weighted reciprocal
distances), and a frequency prior. The top-r nodes under the weighted
linear combination are selected with a threshold algorithm over three
sorted lists; the result provably equals exhaustive scoring with the
same node-id tie-break.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .context import ContextGraph, TurnWeightMode, turn_weight
from .embeddings import WordVectorTable
from .kg import KnowledgeGraph

__all__ = [
    "FrontierHyperparams",
    "FrontierScore",
    "TaStats",
    "reciprocal",
    "LabelVectorCache",
    "match_score",
    "proximity_score",
    "candidate_set",
    "select_frontiers",
    "select_frontiers_with_stats",
    "threshold_top_r",
    "exhaustive_top_r",
    "EmptyCandidateSetError",
]

DEFAULT_DISTANCE_CUTOFF = 6  # edges; two fact hops plus qualifier slack


class EmptyCandidateSetError(RuntimeError):
    """The context has no neighborhood to expand into."""


@dataclass(frozen=True)
class FrontierHyperparams:
    h1: float = 0.55  # question match weight
    h2: float = 0.35  # context proximity weight
    h3: float = 0.10  # KG prior weight
    r: int = 3
    k: int = 4  # candidate neighborhood radius in edge hops

    def __post_init__(self):
        if min(self.h1, self.h2, self.h3) < 0:
            raise ValueError("frontier weights must be non-negative")
        if abs(self.h1 + self.h2 + self.h3 - 1.0) > 1e-9:
            raise ValueError("frontier weights must sum to 1")
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class FrontierScore:
    node: int
    match: float
    prox: float
    prior: float
    combined: float


@dataclass
class TaStats:
    candidates: int = 0
    sorted_accesses: int = 0
    random_accesses: int = 0


def reciprocal(distance: Optional[int]) -> float:
    """1/max(d, 1); 0 when the distance exceeded the cutoff (None)."""
    if distance is None:
        return 0.0
    return 1.0 / max(distance, 1)


class LabelVectorCache:
    """Per-(graph, vectors) cache of node label phrase vectors."""

    def __init__(self, g: KnowledgeGraph, emb: WordVectorTable):
        self.g = g
        self.emb = emb
        self._cache: dict[int, Optional[np.ndarray]] = {}

    def get(self, node_id: int) -> Optional[np.ndarray]:
        if node_id not in self._cache:
            self._cache[node_id] = self.emb.phrase_vector(self.g.nodes[node_id].label)
        return self._cache[node_id]


def match_score(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    node_id: int,
    question_tokens: Sequence[str],
    cache: Optional[LabelVectorCache] = None,
) -> float:
    """Max over content question words of similarity(label vector, word)."""
    label_vec = (
        cache.get(node_id) if cache is not None else emb.phrase_vector(g.nodes[node_id].label)
    )
    if label_vec is None:
        return 0.0
    best = 0.0
    for token in question_tokens:
        if emb.is_stopword(token):
            continue
        word_vec = emb.vector(token)
        if word_vec is None:
            continue
        score = emb.similarity(label_vec, word_vec)
        if score > best:
            best = score
    return best


def registry_distance_maps(
    g: KnowledgeGraph, ctx: ContextGraph, cutoff: int
) -> dict[int, dict[int, int]]:
    """One BFS distance map per distinct registry node (scoring entries only)."""
    maps: dict[int, dict[int, int]] = {}
    for entry in ctx.scoring_registry():
        if entry.node not in maps:
            maps[entry.node] = g.distance_map(entry.node, cutoff)
    return maps


def proximity_score(
    g: KnowledgeGraph,
    ctx: ContextGraph,
    node_id: int,
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
    dist_maps: Optional[dict[int, dict[int, int]]] = None,
) -> float:
    """Turn-weighted reciprocal distance to QA nodes, averaged over them."""
    registry = ctx.scoring_registry()
    if not registry:
        raise ValueError("context has no QA registry entries to score against")
    total = 0.0
    for entry in registry:
        weight = turn_weight(entry, ctx.turn, mode)
        if weight == 0.0:
            continue
        if dist_maps is not None:
            d = dist_maps[entry.node].get(node_id)
        else:
            d = g.distance(node_id, entry.node, cutoff)
        total += weight * reciprocal(d)
    return total / len(registry)


def candidate_set(g: KnowledgeGraph, ctx: ContextGraph, k: int) -> set[int]:
    """k-hop neighborhood of the context (context nodes subsumed)."""
    if not ctx.node_set:
        return set()
    return g.neighborhood(ctx.node_set, k)


# ----------------------------------------------------------------------
# threshold aggregation
# ----------------------------------------------------------------------


def _combine(weights: tuple[float, float, float], triple: tuple[float, float, float]) -> float:
    return weights[0] * triple[0] + weights[1] * triple[1] + weights[2] * triple[2]


def exhaustive_top_r(
    scored: dict[int, tuple[float, float, float]],
    weights: tuple[float, float, float],
    r: int,
) -> list[tuple[int, float]]:
    """Brute-force oracle: full sort by (-combined, node_id)."""
    combined = [(n, _combine(weights, t)) for n, t in scored.items()]
    combined.sort(key=lambda pair: (-pair[1], pair[0]))
    return combined[: min(r, len(combined))]


def threshold_top_r(
    scored: dict[int, tuple[float, float, float]],
    weights: tuple[float, float, float],
    r: int,
    stats: Optional[TaStats] = None,
) -> list[tuple[int, float]]:
    """Top-r by weighted sum via sorted + random access with early stop.

    Three lists sorted descending by each component are read round-robin;
    each newly seen node's missing components come from random access and
    its combined score is buffered. The threshold is the combination of
    the last scores seen under sorted access; once the buffer holds r
    nodes whose minimum exceeds it, no unseen node can enter the top r
    (strictly exceeds: an unseen node tying the threshold could still win
    the node-id tie-break, so equality keeps scanning).
    """
    if stats is None:
        stats = TaStats()
    stats.candidates = len(scored)
    if not scored:
        return []
    r = min(r, len(scored))
    lists = [
        sorted(((t[i], n) for n, t in scored.items()), key=lambda p: (-p[0], p[1]))
        for i in range(3)
    ]
    seen: dict[int, float] = {}
    # buffer of (combined, node) kept sorted best-first, at most r entries
    buffer: list[tuple[float, int]] = []
    positions = [0, 0, 0]
    last_seen = [lists[0][0][0], lists[1][0][0], lists[2][0][0]]
    exhausted = False
    while not exhausted:
        exhausted = True
        for i in range(3):
            pos = positions[i]
            if pos >= len(lists[i]):
                continue
            exhausted = False
            value, node = lists[i][pos]
            positions[i] = pos + 1
            stats.sorted_accesses += 1
            last_seen[i] = value
            if node not in seen:
                triple = scored[node]
                # the other two components come from random access
                stats.random_accesses += 2
                combined = _combine(weights, triple)
                seen[node] = combined
                buffer.append((combined, node))
                buffer.sort(key=lambda p: (-p[0], p[1]))
                if len(buffer) > r:
                    buffer.pop()
        thresh = _combine(weights, tuple(last_seen))
        if len(buffer) == r and buffer[-1][0] > thresh:
            break
    return [(node, combined) for combined, node in buffer]


def score_candidates(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    question_tokens: Sequence[str],
    candidates: Sequence[int],
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
    cache: Optional[LabelVectorCache] = None,
) -> dict[int, tuple[float, float, float]]:
    """(match, prox, prior) triple for every candidate node."""
    dist_maps = registry_distance_maps(g, ctx, cutoff)
    out: dict[int, tuple[float, float, float]] = {}
    for node_id in candidates:
        out[node_id] = (
            match_score(g, emb, node_id, question_tokens, cache),
            proximity_score(g, ctx, node_id, mode, cutoff, dist_maps),
            g.prior(node_id),
        )
    return out


def select_frontiers_with_stats(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    question_tokens: Sequence[str],
    hp: FrontierHyperparams,
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
    cache: Optional[LabelVectorCache] = None,
) -> tuple[list[FrontierScore], TaStats]:
    candidates = sorted(candidate_set(g, ctx, hp.k))
    if not candidates:
        raise EmptyCandidateSetError(
            "context neighborhood is empty; nothing to expand into"
        )
    scored = score_candidates(
        g, emb, ctx, question_tokens, candidates, mode, cutoff, cache
    )
    stats = TaStats()
    weights = (hp.h1, hp.h2, hp.h3)
    top = threshold_top_r(scored, weights, hp.r, stats)
    result = [
        FrontierScore(node, *scored[node], combined=combined)
        for node, combined in top
    ]
    return result, stats


def select_frontiers(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    ctx: ContextGraph,
    question_tokens: Sequence[str],
    hp: FrontierHyperparams,
    mode: TurnWeightMode = TurnWeightMode.NORMALIZED,
    cutoff: int = DEFAULT_DISTANCE_CUTOFF,
    cache: Optional[LabelVectorCache] = None,
) -> list[FrontierScore]:
    """Ranked top-r frontier nodes for the current question."""
    result, _ = select_frontiers_with_stats(
        g, emb, ctx, question_tokens, hp, mode, cutoff, cache
    )
    return result
