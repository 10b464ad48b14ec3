"""Benchmark file loading and paraphrase expansion.

A benchmark is a JSON document::

    {"conversations": [
        {"conversation_id": "movies-01",
         "domain": "movies",
         "seed_entity": {"external_id": "Q1", "label": "..."},
         "turns": [
             {"question": "...", "paraphrase": "...", "gold": ["Q4"]},
             ...
         ]}
    ]}

Turn 0 is the well-formed first question; its gold answers double as
the oracle answers. Gold items are external ids or literal strings in
the KG's formats. When paraphrase expansion is on, a conversation with
paraphrases on all T turns yields 2^T variants.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, TextIO, Union

__all__ = ["BenchmarkTurn", "BenchmarkConversation", "load_benchmark", "expand_paraphrases"]


@dataclass(frozen=True)
class BenchmarkTurn:
    question: str
    gold: tuple[str, ...]
    paraphrase: Optional[str] = None


@dataclass(frozen=True)
class BenchmarkConversation:
    conversation_id: str
    domain: str
    seed_external_id: str
    seed_label: str
    turns: tuple[BenchmarkTurn, ...]

    def __post_init__(self):
        if not self.turns:
            raise ValueError(f"conversation {self.conversation_id} has no turns")
        for i, turn in enumerate(self.turns):
            if not 1 <= len(turn.gold) <= 3:
                raise ValueError(
                    f"conversation {self.conversation_id} turn {i}: "
                    f"{len(turn.gold)} gold answers (expected 1-3)"
                )


def load_benchmark(source: Union[str, TextIO]) -> list[BenchmarkConversation]:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return load_benchmark(fh)
    doc = json.load(source)
    conversations = []
    for raw in doc["conversations"]:
        turns = tuple(
            BenchmarkTurn(
                question=t["question"],
                gold=tuple(str(x) for x in t["gold"]),
                paraphrase=t.get("paraphrase"),
            )
            for t in raw["turns"]
        )
        conversations.append(
            BenchmarkConversation(
                conversation_id=str(raw["conversation_id"]),
                domain=str(raw.get("domain", "other")),
                seed_external_id=str(raw["seed_entity"]["external_id"]),
                seed_label=str(raw["seed_entity"].get("label", "")),
                turns=turns,
            )
        )
    return conversations


def expand_paraphrases(conv: BenchmarkConversation) -> list[BenchmarkConversation]:
    """All 2^p question/paraphrase combinations of one conversation."""
    options: list[list[str]] = [
        [t.question] if t.paraphrase is None else [t.question, t.paraphrase]
        for t in conv.turns
    ]
    variants = []
    for idx, combo in enumerate(itertools.product(*options)):
        turns = tuple(
            BenchmarkTurn(question=q, gold=t.gold, paraphrase=None)
            for q, t in zip(combo, conv.turns)
        )
        variants.append(
            BenchmarkConversation(
                conversation_id=f"{conv.conversation_id}#v{idx}",
                domain=conv.domain,
                seed_external_id=conv.seed_external_id,
                seed_label=conv.seed_label,
                turns=turns,
            )
        )
    return variants
