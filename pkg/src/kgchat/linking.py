"""First-turn machinery: label-based entity linking and the naive answerer.

Linking is a greedy longest-match of token n-grams against the entity
label index. The naive answerer jointly disambiguates an (entity,
predicate) pair around the linked entities by embedding similarity and
returns the other main argument of the winning fact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .embeddings import DEFAULT_STOPWORDS, WordVectorTable, tokenize
from .kg import KnowledgeGraph, NodeKind

logger = logging.getLogger(__name__)

__all__ = ["LinkedEntity", "link_entities", "naive_answer", "best_predicate_answer",
           "FirstTurnError"]


class FirstTurnError(RuntimeError):
    """The naive first-turn procedure could not produce an answer."""


@dataclass(frozen=True)
class LinkedEntity:
    node: int
    span: tuple[int, int]  # token positions [start, end)
    text: str


def link_entities(
    g: KnowledgeGraph, question: str, max_ngram: int = 5
) -> list[LinkedEntity]:
    """Greedy left-to-right longest n-gram match against entity labels.

    Matched spans are consumed; n-grams made only of stopwords are
    skipped. Only entity-kind nodes are produced, lowest node id first
    on a label collision.
    """
    tokens = tokenize(question)
    links: list[LinkedEntity] = []
    pos = 0
    while pos < len(tokens):
        matched = False
        for n in range(min(max_ngram, len(tokens) - pos), 0, -1):
            span_tokens = tokens[pos : pos + n]
            if all(t in DEFAULT_STOPWORDS for t in span_tokens):
                continue
            candidates = [
                node_id
                for node_id in sorted(g.lookup_label(" ".join(span_tokens)))
                if g.nodes[node_id].kind is NodeKind.ENTITY
            ]
            if candidates:
                links.append(
                    LinkedEntity(candidates[0], (pos, pos + n), " ".join(span_tokens))
                )
                pos += n
                matched = True
                break
        if not matched:
            pos += 1
    return links


def _adjacent_predicates(g: KnowledgeGraph, node_id: int) -> list[int]:
    return [
        nb for nb in g.adjacency[node_id] if g.nodes[nb].kind is NodeKind.PREDICATE
    ]


def _other_main_argument(g: KnowledgeGraph, fact_id: int, entity: int) -> int:
    f = g.facts[fact_id]
    if f.subject == entity:
        return f.object
    if f.object == entity:
        return f.subject
    # entity sits in a qualifier slot; the main object is the best stand-in
    return f.object


def _qualifier_affinity(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    fact_id: int,
    tokens: Sequence[str],
) -> float:
    """Best similarity between leftover question words and qualifier values."""
    best = 0.0
    for _, qv in g.facts[fact_id].qualifiers:
        vec = emb.phrase_vector(g.nodes[qv].label)
        if vec is None:
            continue
        for token in tokens:
            if emb.is_stopword(token):
                continue
            wv = emb.vector(token)
            if wv is None:
                continue
            best = max(best, emb.similarity(vec, wv))
    return best


def best_predicate_answer(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    references: Sequence[tuple[int, Sequence[str]]],
    question_vector: Optional[np.ndarray],
) -> list[tuple[int, float]]:
    """Joint (entity, predicate) disambiguation shared by naive/star/chain.

    ``references`` pairs each candidate reference entity with the
    leftover question words used to refine ties between instances of the
    same predicate name via their facts' qualifier values. The winning
    fact's other main argument is the answer; its qualifier values are
    appended as lower-ranked candidates. Ties end at the lowest
    predicate node id.
    """
    if not references:
        raise FirstTurnError("no reference entities to disambiguate around")
    best_key: Optional[tuple] = None
    best_fact: Optional[int] = None
    best_entity: Optional[int] = None
    for entity, leftover in references:
        for pred in _adjacent_predicates(g, entity):
            vec = emb.phrase_vector(g.nodes[pred].label)
            if vec is None or question_vector is None:
                sim = 0.0
            else:
                sim = emb.similarity(vec, question_vector)
            # a predicate instance belongs to exactly one fact
            fact_id = g.facts_of(pred)[0]
            affinity = _qualifier_affinity(g, emb, fact_id, leftover)
            key = (-sim, -affinity, pred)
            if best_key is None or key < best_key:
                best_key, best_fact, best_entity = key, fact_id, entity
    if best_fact is None or best_key is None:
        raise FirstTurnError("reference entities have no adjacent facts")
    top_sim = -best_key[0]
    answer = _other_main_argument(g, best_fact, best_entity)
    ranked = [(answer, top_sim)]
    for _, qv in g.facts[best_fact].qualifiers:
        if all(qv != node for node, _ in ranked):
            ranked.append((qv, top_sim / 2.0))
    return ranked


def naive_answer(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    question: str,
    entities: Sequence[int],
) -> list[tuple[int, float]]:
    """Stand-alone answerer for a well-formed first question.

    The question vector averages the non-entity, non-stopword words of
    the question; the best (entity, predicate) pair around the linked
    entities wins, and the fact's other main argument is the answer.
    """
    if not entities:
        raise FirstTurnError("naive answering requires linked entities")
    links = link_entities(g, question)
    consumed: set[int] = set()
    for link in links:
        consumed.update(range(*link.span))
    tokens = tokenize(question)
    free_tokens = [t for i, t in enumerate(tokens) if i not in consumed]
    vectors = [
        emb.vector(t)
        for t in free_tokens
        if not emb.is_stopword(t) and emb.vector(t) is not None
    ]
    question_vector = np.mean(vectors, axis=0) if vectors else None
    if question_vector is None:
        logger.warning("question %r has no usable content words", question)

    # leftover words per reference entity: only that entity's span is dropped
    span_by_node = {link.node: link.span for link in links}
    references = []
    for entity in entities:
        span = span_by_node.get(entity)
        leftover = [
            t
            for i, t in enumerate(tokens)
            if span is None or not (span[0] <= i < span[1])
        ]
        references.append((entity, leftover))
    return best_predicate_answer(g, emb, references, question_vector)
