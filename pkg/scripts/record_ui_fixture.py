#!/usr/bin/env python3
"""Records a service round-trip of the bundled conversation for UI tests.

Drives the HTTP app in-process and dumps every response body the web
client would see (session creation, per-turn ask, per-turn context
snapshot) to frontend/tests/fixtures/transcript.json.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from kgchat.embeddings import WordVectorTable
from kgchat.engine import SessionConfig
from kgchat.kg import load_graph
from kgchat.service import create_app

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "kgchat" / "data"
OUT = ROOT / "frontend" / "tests" / "fixtures" / "transcript.json"

FOLLOW_UPS = [
    "And Alan Arkin was behind ...?",
    "Who did the score?",
    "So who performed the songs?",
    "Genre of this band's music?",
    "By the way, who was the director?",
]


def main() -> None:
    g = load_graph(str(DATA / "mini_kg.tsv"), str(DATA / "mini_labels.tsv"))
    emb = WordVectorTable.load(str(DATA / "mini_vectors.txt"))
    client = TestClient(create_app(g, emb, SessionConfig()))

    create = client.post(
        "/sessions",
        json={
            "mode": "oracle",
            "q0": "Which actor voiced the Unicorn in The Last Unicorn?",
            "oracle_entities": ["Q1"],
            "oracle_answers": ["Q4"],
        },
    )
    create.raise_for_status()
    session_id = create.json()["session_id"]
    turns = []
    for question in FOLLOW_UPS:
        ask = client.post(f"/sessions/{session_id}/ask", json={"question": question})
        ask.raise_for_status()
        snapshot = client.get(f"/sessions/{session_id}/context")
        snapshot.raise_for_status()
        turns.append(
            {"question": question, "ask": ask.json(), "context": snapshot.json()}
        )
    doc = {
        "create": create.json(),
        "turns": turns,
        "history": client.get(f"/sessions/{session_id}/history").json(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
