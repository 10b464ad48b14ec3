"""In-memory knowledge graph store.

The graph materializes subject-predicate-object facts (with optional
qualifier pairs) as an undirected node/edge graph:

* entities, classes and literals are shared nodes, deduplicated by
  external id (fallback: normalized label);
* every fact mints a FRESH predicate-instance node, and every qualifier
  mints a fresh qualifier-predicate node attached to it. Predicate
  instances are never shared between facts, so no path can jump from one
  fact's subject to another fact's object through a merged predicate.

Edges per fact: subject-predicate, predicate-object, plus for each
qualifier predicate-qualifier_predicate and
qualifier_predicate-qualifier_value.

File format (UTF-8, line based, ``#`` comments allowed)::

    subject_id<TAB>predicate_name<TAB>object[<TAB>qual_name=qual_value]...

``Q``-prefixed ids are entities, ``P``-prefixed names are predicates,
``C``-prefixed ids are KG classes; anything else (or a double-quoted
token) is a literal. An optional labels file maps ``id<TAB>label``.
Fact ids are assigned in file order.
"""

from __future__ import annotations

import io
import re
import string
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, TextIO, Union

__all__ = [
    "NodeKind",
    "KgNode",
    "Fact",
    "KnowledgeGraph",
    "GraphFormatError",
    "load_graph",
    "normalize_label",
]


class GraphFormatError(ValueError):
    """Malformed triples input; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class NodeKind(Enum):
    ENTITY = "entity"
    PREDICATE = "predicate"  # per-fact predicate instance
    KG_CLASS = "class"
    LITERAL = "literal"


@dataclass(frozen=True)
class KgNode:
    node_id: int
    kind: NodeKind
    label: str
    external_id: Optional[str] = None
    # canonical predicate identifier shared by all instances of the same
    # predicate; present iff kind is PREDICATE
    predicate_name: Optional[str] = None


@dataclass(frozen=True)
class Fact:
    fact_id: int
    subject: int
    predicate: int
    object: int
    qualifiers: tuple[tuple[int, int], ...] = ()

    def nodes(self) -> tuple[int, ...]:
        out = [self.subject, self.predicate, self.object]
        for qp, qv in self.qualifiers:
            out.append(qp)
            out.append(qv)
        return tuple(out)


_WS_RE = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    """Lowercase, collapse whitespace, strip surrounding punctuation."""
    text = _WS_RE.sub(" ", text.strip().lower())
    return text.strip(string.punctuation + " ")


class KnowledgeGraph:
    """Immutable after load; all query methods are pure and thread-safe."""

    def __init__(self, nodes: list[KgNode], facts: list[Fact]):
        self.nodes: list[KgNode] = nodes
        self.facts: list[Fact] = facts
        n = len(nodes)
        adjacency: list[list[int]] = [[] for _ in range(n)]
        node_facts: list[set[int]] = [set() for _ in range(n)]
        for f in facts:
            edges = [(f.subject, f.predicate), (f.predicate, f.object)]
            for qp, qv in f.qualifiers:
                edges.append((f.predicate, qp))
                edges.append((qp, qv))
            for a, b in edges:
                adjacency[a].append(b)
                adjacency[b].append(a)
            for node_id in f.nodes():
                node_facts[node_id].add(f.fact_id)
        self.adjacency: list[tuple[int, ...]] = [
            tuple(sorted(set(neigh))) for neigh in adjacency
        ]
        self.node_facts: list[tuple[int, ...]] = [
            tuple(sorted(fs)) for fs in node_facts
        ]

        label_index: dict[str, list[int]] = {}
        for node in nodes:
            key = normalize_label(node.label)
            if key:
                label_index.setdefault(key, []).append(node.node_id)
        self._label_index = {k: tuple(v) for k, v in label_index.items()}

        # raw frequency of a predicate concept = number of facts whose main
        # or qualifier predicate carries that predicate_name
        pred_fact_sets: dict[str, set[int]] = {}
        for f in facts:
            names = {nodes[f.predicate].predicate_name}
            names.update(nodes[qp].predicate_name for qp, _ in f.qualifiers)
            for name in names:
                if name is not None:
                    pred_fact_sets.setdefault(name, set()).add(f.fact_id)
        self._predicate_name_counts = {
            name: len(fs) for name, fs in pred_fact_sets.items()
        }

        kind_max: dict[NodeKind, int] = {}
        for node in nodes:
            freq = self._raw_frequency(node)
            if freq > kind_max.get(node.kind, 0):
                kind_max[node.kind] = freq
        self.kind_frequency_max = kind_max

    # ------------------------------------------------------------------
    # basic accessors
    # ------------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def fact_count(self) -> int:
        return len(self.facts)

    def node(self, node_id: int) -> KgNode:
        self._check_node(node_id)
        return self.nodes[node_id]

    def label(self, node_id: int) -> str:
        return self.node(node_id).label

    def _check_node(self, node_id: int) -> None:
        if not (0 <= node_id < len(self.nodes)):
            raise KeyError(f"unknown node id {node_id}")

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def neighborhood(self, seeds: Iterable[int], k: int) -> set[int]:
        """All nodes within <= k undirected edges of any seed (seeds included)."""
        if k < 0:
            raise ValueError("k must be >= 0")
        frontier = []
        seen: set[int] = set()
        for s in seeds:
            self._check_node(s)
            if s not in seen:
                seen.add(s)
                frontier.append(s)
        for _ in range(k):
            if not frontier:
                break
            nxt = []
            for node_id in frontier:
                for nb in self.adjacency[node_id]:
                    if nb not in seen:
                        seen.add(nb)
                        nxt.append(nb)
            frontier = nxt
        return seen

    def distance(self, a: int, b: int, cutoff: int) -> Optional[int]:
        """Shortest undirected path length in edges, or None beyond cutoff."""
        self._check_node(a)
        self._check_node(b)
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if a == b:
            return 0
        dist = {a: 0}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            d = dist[cur]
            if d >= cutoff:
                continue
            for nb in self.adjacency[cur]:
                if nb not in dist:
                    if nb == b:
                        return d + 1
                    dist[nb] = d + 1
                    queue.append(nb)
        return None

    def distance_map(self, source: int, cutoff: int) -> dict[int, int]:
        """BFS distances from source up to cutoff edges (source included)."""
        self._check_node(source)
        dist = {source: 0}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            d = dist[cur]
            if d >= cutoff:
                continue
            for nb in self.adjacency[cur]:
                if nb not in dist:
                    dist[nb] = d + 1
                    queue.append(nb)
        return dist

    def facts_of(self, node_id: int) -> tuple[int, ...]:
        """Facts containing the node in any position, ordered by fact id."""
        self._check_node(node_id)
        return self.node_facts[node_id]

    def _raw_frequency(self, node: KgNode) -> int:
        if node.kind is NodeKind.PREDICATE:
            return self._predicate_name_counts.get(node.predicate_name, 0)
        return len(self.node_facts[node.node_id])

    def prior(self, node_id: int) -> float:
        """Frequency of the node's concept normalized within its kind."""
        node = self.node(node_id)
        max_freq = self.kind_frequency_max.get(node.kind, 0)
        if max_freq == 0:
            return 0.0
        return self._raw_frequency(node) / max_freq

    def lookup_label(self, text: str) -> set[int]:
        return set(self._label_index.get(normalize_label(text), ()))

    def predicate_name_count(self, name: str) -> int:
        return self._predicate_name_counts.get(name, 0)

    # ------------------------------------------------------------------
    # integrity / serialization
    # ------------------------------------------------------------------

    def check_invariants(self) -> list[str]:
        """Returns a list of violation descriptions (empty = healthy)."""
        problems: list[str] = []
        for i, node in enumerate(self.nodes):
            if node.node_id != i:
                problems.append(f"node {i} carries id {node.node_id}")
            if not node.label:
                problems.append(f"node {i} has an empty label")
            if (node.predicate_name is not None) != (node.kind is NodeKind.PREDICATE):
                problems.append(f"node {i} predicate_name/kind mismatch")
        seen_predicates: set[int] = set()
        for f in self.facts:
            for node_id in f.nodes():
                if not (0 <= node_id < len(self.nodes)):
                    problems.append(f"fact {f.fact_id} references unknown node {node_id}")
            for p in (f.predicate, *(qp for qp, _ in f.qualifiers)):
                if p in seen_predicates:
                    problems.append(f"predicate instance {p} shared between facts")
                seen_predicates.add(p)
                if self.nodes[p].kind is not NodeKind.PREDICATE:
                    problems.append(f"fact {f.fact_id} predicate {p} has wrong kind")
        for node_id, adj in enumerate(self.adjacency):
            for nb in adj:
                if node_id not in self.adjacency[nb]:
                    problems.append(f"asymmetric edge {node_id}-{nb}")
        if self.facts:
            for node_id in range(len(self.nodes)):
                if not self.node_facts[node_id]:
                    problems.append(f"orphan node {node_id}")
        return problems

    def dump(self, stream: TextIO) -> None:
        """Writes the graph back in the triples file format (fact order)."""

        def token(node_id: int) -> str:
            node = self.nodes[node_id]
            if node.kind is NodeKind.LITERAL:
                return f'"{node.label}"'
            return node.external_id or node.label

        for f in self.facts:
            parts = [
                token(f.subject),
                self.nodes[f.predicate].predicate_name or "",
                token(f.object),
            ]
            for qp, qv in f.qualifiers:
                parts.append(f"{self.nodes[qp].predicate_name}={token(qv)}")
            stream.write("\t".join(parts) + "\n")

    def dump_labels(self, stream: TextIO) -> None:
        seen: set[str] = set()
        for node in self.nodes:
            key = node.external_id if node.kind is not NodeKind.PREDICATE else node.predicate_name
            if key and key not in seen:
                seen.add(key)
                stream.write(f"{key}\t{node.label}\n")


# ----------------------------------------------------------------------
# loading
# ----------------------------------------------------------------------


def _classify(token: str) -> NodeKind:
    if token.startswith('"'):
        return NodeKind.LITERAL
    if re.fullmatch(r"Q\S*", token):
        return NodeKind.ENTITY
    if re.fullmatch(r"C\S*", token):
        return NodeKind.KG_CLASS
    return NodeKind.LITERAL


def _strip_quotes(token: str) -> str:
    if len(token) >= 2 and token[0] == '"' and token[-1] == '"':
        return token[1:-1]
    return token


class _Builder:
    def __init__(self, labels: dict[str, str]):
        self.labels = labels
        self.nodes: list[KgNode] = []
        self.facts: list[Fact] = []
        self._shared: dict[tuple[NodeKind, str], int] = {}

    def shared_node(self, token: str) -> int:
        kind = _classify(token)
        if kind is NodeKind.LITERAL:
            value = _strip_quotes(token).strip()
            key = (kind, value)
            label = value
            external = None
        else:
            key = (kind, token)
            label = self.labels.get(token, token)
            external = token
        if key in self._shared:
            return self._shared[key]
        node = KgNode(len(self.nodes), kind, label, external_id=external)
        self.nodes.append(node)
        self._shared[key] = node.node_id
        return node.node_id

    def predicate_node(self, name: str) -> int:
        label = self.labels.get(name, name)
        node = KgNode(len(self.nodes), NodeKind.PREDICATE, label, predicate_name=name)
        self.nodes.append(node)
        return node.node_id


def load_labels(source: Union[str, TextIO]) -> dict[str, str]:
    """Reads an ``id<TAB>label`` file into a dict."""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return load_labels(fh)
    labels: dict[str, str] = {}
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise GraphFormatError("labels line must be 'id<TAB>label'", line_no)
        labels[parts[0].strip()] = parts[1].strip()
    return labels


def load_graph(
    source: Union[str, TextIO],
    labels: Optional[Union[dict[str, str], str, TextIO]] = None,
) -> KnowledgeGraph:
    """Parses a triples file (path or stream) into a KnowledgeGraph."""
    if isinstance(source, str):
        with open(source, encoding="utf-8") as fh:
            return load_graph(fh, labels)
    if labels is None:
        label_map: dict[str, str] = {}
    elif isinstance(labels, dict):
        label_map = labels
    else:
        label_map = load_labels(labels)

    builder = _Builder(label_map)
    seen_facts: set[tuple] = set()
    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t") if p.strip()]
        if "=" in parts[0]:
            raise GraphFormatError(
                "qualifier pair without a preceding fact on the same line", line_no
            )
        if len(parts) < 3:
            raise GraphFormatError(
                f"expected at least subject, predicate and object, got {len(parts)} fields",
                line_no,
            )
        subject_tok, predicate_name, object_tok = parts[0], parts[1], parts[2]
        if _classify(subject_tok) is not NodeKind.ENTITY:
            raise GraphFormatError(f"subject {subject_tok!r} is not an entity id", line_no)
        qualifiers: list[tuple[str, str]] = []
        for extra in parts[3:]:
            if "=" not in extra:
                raise GraphFormatError(
                    f"qualifier field {extra!r} must look like name=value", line_no
                )
            qname, qvalue = extra.split("=", 1)
            if not qname.strip() or not qvalue.strip():
                raise GraphFormatError(f"incomplete qualifier {extra!r}", line_no)
            qualifiers.append((qname.strip(), qvalue.strip()))

        key = (subject_tok, predicate_name, object_tok, tuple(sorted(qualifiers)))
        if key in seen_facts:
            raise GraphFormatError(f"duplicate fact {subject_tok} {predicate_name} {object_tok}", line_no)
        seen_facts.add(key)

        subject = builder.shared_node(subject_tok)
        predicate = builder.predicate_node(predicate_name)
        obj = builder.shared_node(object_tok)
        qual_nodes = tuple(
            (builder.predicate_node(qn), builder.shared_node(qv))
            for qn, qv in qualifiers
        )
        builder.facts.append(
            Fact(len(builder.facts), subject, predicate, obj, qual_nodes)
        )

    graph = KnowledgeGraph(builder.nodes, builder.facts)
    problems = graph.check_invariants()
    if problems:
        raise GraphFormatError("; ".join(problems))
    return graph


def loads_graph(text: str, labels: Optional[dict[str, str]] = None) -> KnowledgeGraph:
    """Convenience wrapper for tests: parse a graph from a string."""
    return load_graph(io.StringIO(text), labels)
