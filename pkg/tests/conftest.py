import io
from pathlib import Path

import pytest

from kgchat.embeddings import WordVectorTable
from kgchat.kg import KnowledgeGraph, load_graph

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "kgchat" / "data"

RUNNING_EXAMPLE_FOLLOW_UPS = [
    ("And Alan Arkin was behind ...?", ["Q3"]),
    ("Who did the score?", ["Q14"]),
    ("So who performed the songs?", ["Q16"]),
    ("Genre of this band's music?", ["Q17", "Q18"]),
    ("By the way, who was the director?", ["Q21"]),
]


@pytest.fixture(scope="session")
def mini_graph() -> KnowledgeGraph:
    return load_graph(str(DATA_DIR / "mini_kg.tsv"), str(DATA_DIR / "mini_labels.tsv"))


@pytest.fixture(scope="session")
def vectors() -> WordVectorTable:
    return WordVectorTable.load(str(DATA_DIR / "mini_vectors.txt"))


@pytest.fixture(scope="session")
def benchmark_path() -> str:
    return str(DATA_DIR / "mini_benchmark.json")


@pytest.fixture(scope="session")
def node_by_external(mini_graph):
    index = {}
    for node in mini_graph.nodes:
        if node.external_id and node.external_id not in index:
            index[node.external_id] = node.node_id

    def lookup(external_id: str) -> int:
        return index[external_id]

    return lookup


def graph_from_text(text: str, labels=None) -> KnowledgeGraph:
    return load_graph(io.StringIO(text), labels or {})
