"""Turn-loop orchestration: first-turn setup, then per-turn frontier
selection, expansion, answer ranking and state carry-over.

A session owns one context graph. Each follow-up runs:
candidate neighborhood -> top-r frontiers -> expansion -> answer
ranking; the top answer group joins the registry and the expanded
context becomes the next turn's context. A failed turn (no candidates
or no eligible answers) leaves the session untouched so the user can
rephrase.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .answers import AnswerHyperparams, RankedAnswer, RankedAnswers, rank_answers
from .context import (
    ContextGraph,
    QaNode,
    QaRole,
    TurnWeightMode,
    context_snapshot,
    expand,
    initialize_context,
)
from .embeddings import WordVectorTable, tokenize
from .frontier import (
    EmptyCandidateSetError,
    FrontierHyperparams,
    FrontierScore,
    LabelVectorCache,
    select_frontiers_with_stats,
)
from .kg import KnowledgeGraph
from .linking import FirstTurnError, link_entities, naive_answer

__all__ = [
    "FirstTurnMode",
    "SessionConfig",
    "TurnRecord",
    "TurnFailure",
    "Session",
    "start_session",
    "run_conversation",
]


class FirstTurnMode(Enum):
    ORACLE = "oracle"
    NAIVE = "naive"


class TurnFailure(RuntimeError):
    """The turn could not be answered; session state is unchanged."""


@dataclass(frozen=True)
class SessionConfig:
    frontier_hp: FrontierHyperparams = FrontierHyperparams()
    answer_hp: AnswerHyperparams = AnswerHyperparams()
    first_turn_mode: FirstTurnMode = FirstTurnMode.ORACLE
    turn_weight_mode: TurnWeightMode = TurnWeightMode.NORMALIZED
    distance_cutoff: int = 6

    def __post_init__(self):
        if self.distance_cutoff < 2:
            raise ValueError("distance cutoff must cover at least one fact (2 edges)")


@dataclass(frozen=True)
class TurnRecord:
    turn: int
    question: str
    frontiers: tuple[FrontierScore, ...]
    answers: RankedAnswers
    elapsed_ms: float
    ta_random_accesses: int = 0
    ta_candidates: int = 0

    def top_nodes(self) -> tuple[int, ...]:
        return tuple(e.node for e in self.answers.entries)


def _echo_ranking(nodes: Sequence[int]) -> RankedAnswers:
    entries = tuple(
        RankedAnswer(node, 1.0, rank, 1.0, 0.0)
        for rank, node in enumerate(nodes, start=1)
    )
    top = frozenset(e.node for e in entries if e.score == 1.0) if entries else frozenset()
    return RankedAnswers(entries, top)


def _scored_ranking(scored: Sequence[tuple[int, float]]) -> RankedAnswers:
    ordered = sorted(scored, key=lambda pair: (-pair[1], pair[0]))
    entries = tuple(
        RankedAnswer(node, score, rank, score, 0.0)
        for rank, (node, score) in enumerate(ordered, start=1)
    )
    if not entries:
        return RankedAnswers((), frozenset())
    best = entries[0].score
    return RankedAnswers(entries, frozenset(e.node for e in entries if e.score == best))


class Session:
    """One conversation; asks are strictly serialized by the caller."""

    def __init__(
        self,
        g: KnowledgeGraph,
        emb: WordVectorTable,
        cfg: SessionConfig,
        ctx: ContextGraph,
        first_record: TurnRecord,
        q0_entities: Sequence[int],
    ):
        self.g = g
        self.emb = emb
        self.cfg = cfg
        self.ctx = ctx
        self.records: list[TurnRecord] = [first_record]
        self.q0_entities = tuple(q0_entities)
        self._label_cache = LabelVectorCache(g, emb)
        self._last_frontiers: tuple[FrontierScore, ...] = ()

    @property
    def turn(self) -> int:
        return self.ctx.turn

    def ask(self, question: str) -> TurnRecord:
        """Runs one follow-up turn; raises TurnFailure on a dead end."""
        started = time.monotonic()
        tokens = tokenize(question)
        try:
            frontiers, stats = select_frontiers_with_stats(
                self.g,
                self.emb,
                self.ctx,
                tokens,
                self.cfg.frontier_hp,
                self.cfg.turn_weight_mode,
                self.cfg.distance_cutoff,
                self._label_cache,
            )
        except EmptyCandidateSetError as exc:
            raise TurnFailure(str(exc)) from exc
        expanded = expand(self.ctx, self.g, frontiers)
        ranked = rank_answers(
            self.g,
            expanded,
            frontiers,
            self.cfg.answer_hp,
            self.cfg.turn_weight_mode,
            self.cfg.distance_cutoff,
        )
        if not ranked.entries:
            raise TurnFailure("expanded context has no eligible answer candidates")
        turn = self.ctx.turn
        for node in sorted(ranked.top_group):
            expanded.qa_registry.append(QaNode(node, QaRole.ANSWER, turn))
        expanded.turn = turn + 1
        self.ctx = expanded
        self._last_frontiers = tuple(frontiers)
        record = TurnRecord(
            turn=turn,
            question=question,
            frontiers=tuple(frontiers),
            answers=ranked,
            elapsed_ms=(time.monotonic() - started) * 1000.0,
            ta_random_accesses=stats.random_accesses,
            ta_candidates=stats.candidates,
        )
        self.records.append(record)
        return record

    def snapshot(self, node_cap: int = 500) -> dict:
        return context_snapshot(self.ctx, self.g, self._last_frontiers, node_cap)


def start_session(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    cfg: SessionConfig,
    q0: str,
    oracle_inputs: Optional[tuple[Sequence[int], Sequence[int]]] = None,
) -> Session:
    """First-turn setup: oracle echo or the naive stand-alone answerer."""
    started = time.monotonic()
    if cfg.first_turn_mode is FirstTurnMode.ORACLE:
        if oracle_inputs is None:
            raise ValueError("oracle mode requires (question entities, answers)")
        q0_entities, a0 = oracle_inputs
        q0_entities = list(dict.fromkeys(q0_entities))
        a0 = list(dict.fromkeys(a0))
        for node_id in (*q0_entities, *a0):
            g._check_node(node_id)
        ranking = _echo_ranking(a0)
    else:
        links = link_entities(g, q0)
        if not links:
            raise FirstTurnError(f"no entities linked in {q0!r}")
        q0_entities = [link.node for link in links]
        scored = naive_answer(g, emb, q0, q0_entities)
        ranking = _scored_ranking(scored)
        a0 = sorted(ranking.top_group)
    ctx = initialize_context(g, q0_entities, a0)
    record = TurnRecord(
        turn=0,
        question=q0,
        frontiers=(),
        answers=ranking,
        elapsed_ms=(time.monotonic() - started) * 1000.0,
    )
    return Session(g, emb, cfg, ctx, record, q0_entities)


def run_conversation(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    cfg: SessionConfig,
    q0: str,
    oracle_inputs: Optional[tuple[Sequence[int], Sequence[int]]],
    follow_ups: Sequence[str],
) -> list[TurnRecord]:
    """Static-mode convenience: q0 plus follow-ups, all records returned."""
    session = start_session(g, emb, cfg, q0, oracle_inputs)
    for question in follow_ups:
        session.ask(question)
    return list(session.records)
