"""Conversational question answering over knowledge graphs.

The engine keeps a conversation anchored in a context subgraph, picks
top-r frontier nodes in its neighborhood by question match, context
proximity and graph priors, expands the context with the frontiers'
facts, and ranks answers by weighted proximity.
"""

from .answers import AnswerHyperparams, RankedAnswer, RankedAnswers, rank_answers
from .context import (
    ContextGraph,
    QaNode,
    QaRole,
    TurnWeightMode,
    expand,
    initialize_context,
    turn_weight,
)
from .embeddings import WordVectorTable, similarity, tokenize
from .engine import (
    FirstTurnMode,
    Session,
    SessionConfig,
    TurnFailure,
    TurnRecord,
    run_conversation,
    start_session,
)
from .frontier import (
    FrontierHyperparams,
    FrontierScore,
    candidate_set,
    match_score,
    proximity_score,
    select_frontiers,
)
from .kg import Fact, KgNode, KnowledgeGraph, NodeKind, load_graph

__version__ = "0.1.0"

__all__ = [
    "AnswerHyperparams",
    "ContextGraph",
    "Fact",
    "FirstTurnMode",
    "FrontierHyperparams",
    "FrontierScore",
    "KgNode",
    "KnowledgeGraph",
    "NodeKind",
    "QaNode",
    "QaRole",
    "RankedAnswer",
    "RankedAnswers",
    "Session",
    "SessionConfig",
    "TurnFailure",
    "TurnRecord",
    "TurnWeightMode",
    "WordVectorTable",
    "candidate_set",
    "expand",
    "initialize_context",
    "load_graph",
    "match_score",
    "proximity_score",
    "rank_answers",
    "run_conversation",
    "select_frontiers",
    "similarity",
    "start_session",
    "tokenize",
    "turn_weight",
    "__version__",
]
