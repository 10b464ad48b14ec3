#!/usr/bin/env python3
"""Regenerates the bundled fixture data under src/kgchat/data/.

The word vector table is constructed from an explicit Gram matrix of
target pairwise cosines (Cholesky factorization), so tests can pin
exact values like cos(score, composer) = 0.6. The mini knowledge graph
covers an animated-film conversation neighborhood with distractors;
fact order is part of the fixture contract (node-id tie-breaks).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "kgchat" / "data"

# Each word pins cosines against specific earlier words only; the
# remaining cross terms take the minimal-norm interpolation values
# (printed by --show-cosines). Order matters: a word may only reference
# words above it.
def _names(value: float) -> dict[str, float]:
    return {"alan": value, "arkin": value, "mia": value, "farrow": value}


WORD_TARGETS: list[tuple[str, dict[str, float]]] = [
    ("alan", {}),
    ("arkin", {"alan": 0.9}),
    ("mia", {"alan": -0.1, "arkin": -0.1}),
    ("farrow", {"mia": 0.9, "alan": -0.1, "arkin": -0.1}),
    ("voice", _names(-0.25)),
    ("actor", {"voice": 0.9, **_names(-0.25)}),
    ("voiced", {"voice": 0.85, "actor": 0.85}),
    ("character", _names(0.15)),
    ("role", {"character": 0.8, **_names(0.15)}),
    ("last", _names(-0.3)),
    ("unicorn", {"last": 0.7, **_names(-0.3)}),
    ("soundtrack", {"last": 0.3, "unicorn": 0.3}),
    (
        "score",
        {
            "voice": -0.3,
            "actor": -0.3,
            "character": -0.25,
            "role": -0.25,
            "last": -0.25,
            "unicorn": -0.25,
            "soundtrack": 0.3,
            **_names(-0.15),
        },
    ),
    ("composer", {"score": 0.6, **_names(-0.2)}),
    ("performer", {"soundtrack": 0.2}),
    (
        "performed",
        {
            "performer": 0.7,
            "voice": -0.25,
            "actor": -0.25,
            "composer": -0.2,
            "character": -0.25,
            "role": -0.25,
            **_names(-0.15),
        },
    ),
    (
        "songs",
        {
            "performed": 0.4,
            "soundtrack": 0.6,
            "last": 0.1,
            "unicorn": 0.1,
            "voice": -0.25,
            "actor": -0.25,
            "composer": -0.2,
            **_names(-0.15),
        },
    ),
    ("genre", {"character": -0.25, "role": -0.25, "voice": -0.15, "actor": -0.15, **_names(-0.2)}),
    ("band", {"genre": 0.3, **_names(-0.2)}),
    ("music", {"band": 0.5, "genre": 0.3, "soundtrack": 0.5, "songs": 0.5}),
    ("america", {"band": 0.9, "music": 0.75}),
    (
        "director",
        {
            "composer": 0.15,
            "score": -0.1,
            "performed": -0.1,
            "songs": -0.1,
            "performer": -0.1,
            "voice": -0.1,
            "actor": -0.1,
            "character": -0.15,
            "role": -0.15,
            **_names(-0.2),
        },
    ),
]

VOCAB = [w for w, _ in WORD_TARGETS]


def build_vectors() -> dict[str, np.ndarray]:
    """Minimal-norm incremental construction: every pinned dot is exact."""
    dim = len(WORD_TARGETS)
    vectors: dict[str, np.ndarray] = {}
    order: list[str] = []
    for axis, (word, targets) in enumerate(WORD_TARGETS):
        v = np.zeros(dim)
        if targets:
            prev = list(targets)
            missing = [p for p in prev if p not in vectors]
            if missing:
                raise SystemExit(f"{word!r} references later words {missing}")
            basis = np.stack([vectors[p] for p in prev])
            gram = basis @ basis.T
            rhs = np.array([targets[p] for p in prev])
            coeff = np.linalg.solve(gram, rhs)
            v = coeff @ basis
            residual_sq = 1.0 - float(coeff @ rhs)
            if residual_sq < -1e-9:
                raise SystemExit(
                    f"targets for {word!r} are infeasible (|projection|^2 = "
                    f"{1.0 - residual_sq:.4f} > 1); reduce magnitudes"
                )
            v[axis] = np.sqrt(max(residual_sq, 0.0))
        else:
            v[axis] = 1.0
        vectors[word] = v
        order.append(word)
    return vectors


def print_cosines(vectors: dict[str, np.ndarray]) -> None:
    words = list(vectors)
    for i, a in enumerate(words):
        for b in words[i + 1 :]:
            va, vb = vectors[a], vectors[b]
            cos = float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb)))
            if abs(cos) > 0.05:
                print(f"  cos({a}, {b}) = {cos:+.3f}")


def write_vectors(path: Path) -> None:
    vectors = build_vectors()
    dim = len(VOCAB)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vectors)} {dim}\n")
        for word in VOCAB:
            row = " ".join(repr(float(x)) for x in vectors[word])
            fh.write(f"{word} {row}\n")


LABELS = {
    "Q1": "The Last Unicorn",
    "Q2": "Alan Arkin",
    "Q3": "Schmendrick",
    "Q4": "Mia Farrow",
    "Q5": "The Unicorn",
    "Q6": "Jeff Bridges",
    "Q7": "Prince Lir",
    "Q8": "Angela Lansbury",
    "Q9": "Mommy Fortuna",
    "Q10": "Christopher Lee",
    "Q11": "King Haggard",
    "Q12": "Tammy Grimes",
    "Q13": "Molly Grue",
    "Q14": "Jimmy Webb",
    "Q15": "The Last Unicorn Soundtrack",
    "Q16": "America",
    "Q17": "Folk rock",
    "Q18": "Soft rock",
    "Q19": "Homecoming",
    "Q20": "Rock",
    "Q21": "Jules Bass",
    "Q22": "The Hobbit",
    "Q23": "Orson Bean",
    "Q24": "Rosemary's Baby",
    "Q25": "The Great Gatsby",
    "Q26": "Mike Nichols",
    "Q27": "Catch-22",
    "Q28": "Peter S. Beagle",
    "Q29": "The Last Unicorn novel",
    "Q30": "United States",
    "Q31": "Roman Polanski",
    "C1": "animated feature film",
    "C2": "musical group",
    "C4": "studio album",
    "C5": "human",
    "P1": "voice actor",
    "P2": "character role",
    "P3": "composer",
    "P4": "performer",
    "P5": "genre",
    "P6": "director",
    "P7": "cast member",
    "P8": "publication date",
    "P10": "instance of",
    "P11": "based on",
    "P12": "author",
    "P13": "country of origin",
}

# Fact order is load order and therefore node-id order; several scoring
# ties between same-label predicate instances resolve to the earliest
# fact, so keep the follow-up target (Alan Arkin) first.
FACTS = [
    "Q1\tP1\tQ2\tP2=Q3",
    "Q1\tP1\tQ4\tP2=Q5",
    "Q1\tP1\tQ6\tP2=Q7",
    "Q1\tP1\tQ8\tP2=Q9",
    "Q1\tP1\tQ10\tP2=Q11",
    "Q1\tP1\tQ12\tP2=Q13",
    "Q1\tP3\tQ14",
    "Q15\tP3\tQ14",
    "Q15\tP4\tQ16",
    "Q16\tP5\tQ17",
    "Q16\tP5\tQ18",
    "Q19\tP4\tQ16",
    "Q19\tP5\tQ20",
    "Q1\tP6\tQ21",
    "Q22\tP6\tQ21",
    "Q24\tP7\tQ4",
    "Q25\tP7\tQ4",
    "Q27\tP7\tQ2",
    "Q22\tP7\tQ23",
    "Q24\tP6\tQ31",
    "Q27\tP6\tQ26",
    "Q2\tP10\tC5",
    "Q4\tP10\tC5",
    "Q6\tP10\tC5",
    "Q8\tP10\tC5",
    "Q10\tP10\tC5",
    "Q12\tP10\tC5",
    "Q14\tP10\tC5",
    "Q21\tP10\tC5",
    "Q23\tP10\tC5",
    "Q28\tP10\tC5",
    'Q1\tP8\t"19 November 1982"',
    "Q1\tP10\tC1",
    "Q1\tP11\tQ29",
    "Q29\tP12\tQ28",
    "Q1\tP13\tQ30",
    "Q16\tP10\tC2",
    "Q22\tP10\tC1",
    "Q15\tP10\tC4",
    "Q19\tP10\tC4",
    'Q29\tP8\t"1968"',
    'Q24\tP8\t"12 June 1968"',
    'Q15\tP8\t"1982"',
]


BENCHMARK = {
    "conversations": [
        {
            "conversation_id": "movies-unicorn",
            "domain": "movies",
            "seed_entity": {"external_id": "Q1", "label": "The Last Unicorn"},
            "turns": [
                {
                    "question": "Which actor voiced the Unicorn in The Last Unicorn?",
                    "paraphrase": "Who was the voice actor of the Unicorn in The Last Unicorn?",
                    "gold": ["Q4"],
                },
                {
                    "question": "And Alan Arkin was behind ...?",
                    "paraphrase": "And what about Alan Arkin?",
                    "gold": ["Q3"],
                },
                {
                    "question": "Who did the score?",
                    "paraphrase": "Who was the score by?",
                    "gold": ["Q14"],
                },
                {
                    "question": "So who performed the songs?",
                    "paraphrase": "So the songs were performed by whom?",
                    "gold": ["Q16"],
                },
                {
                    "question": "Genre of this band's music?",
                    "paraphrase": "Which genre is this band's music?",
                    "gold": ["Q17", "Q18"],
                },
                {
                    "question": "By the way, who was the director?",
                    "paraphrase": "By the way, who directed it?",
                    "gold": ["Q21"],
                },
            ],
        },
        {
            "conversation_id": "music-soundtrack",
            "domain": "music",
            "seed_entity": {"external_id": "Q15", "label": "The Last Unicorn Soundtrack"},
            "turns": [
                {"question": "Who composed The Last Unicorn Soundtrack?", "gold": ["Q14"]},
                {"question": "And who performed it?", "gold": ["Q16"]},
                {"question": "What genre is their music?", "gold": ["Q17", "Q18"]},
            ],
        },
        {
            "conversation_id": "movies-schmendrick",
            "domain": "movies",
            "seed_entity": {"external_id": "Q1", "label": "The Last Unicorn"},
            "turns": [
                {
                    "question": "Which actor voiced Schmendrick in The Last Unicorn?",
                    "gold": ["Q2"],
                },
                {"question": "Who did the score?", "gold": ["Q14"]},
                {"question": "By the way, who was the director?", "gold": ["Q21"]},
            ],
        },
        {
            "conversation_id": "music-america",
            "domain": "music",
            "seed_entity": {"external_id": "Q16", "label": "America"},
            "turns": [
                {"question": "What is the genre of the band America?", "gold": ["Q17", "Q18"]},
                {"question": "Who was the composer of their soundtrack?", "gold": ["Q14"]},
            ],
        },
        {
            "conversation_id": "books-beagle",
            "domain": "books",
            "seed_entity": {"external_id": "Q29", "label": "The Last Unicorn novel"},
            "turns": [
                {"question": "Who wrote The Last Unicorn novel?", "gold": ["Q28"]},
                {
                    "question": "Who was the director of the film based on it?",
                    "gold": ["Q21"],
                },
            ],
        },
    ]
}


def main() -> None:
    import sys

    DATA_DIR.mkdir(parents=True, exist_ok=True)
    if "--show-cosines" in sys.argv:
        print_cosines(build_vectors())
    write_vectors(DATA_DIR / "mini_vectors.txt")
    with open(DATA_DIR / "mini_kg.tsv", "w", encoding="utf-8") as fh:
        fh.write("# mini knowledge graph fixture; fact order is contractual\n")
        fh.write("\n".join(FACTS) + "\n")
    with open(DATA_DIR / "mini_labels.tsv", "w", encoding="utf-8") as fh:
        for key, label in LABELS.items():
            fh.write(f"{key}\t{label}\n")
    with open(DATA_DIR / "mini_benchmark.json", "w", encoding="utf-8") as fh:
        json.dump(BENCHMARK, fh, indent=2)
        fh.write("\n")
    print(f"wrote fixtures to {DATA_DIR}")


if __name__ == "__main__":
    main()
