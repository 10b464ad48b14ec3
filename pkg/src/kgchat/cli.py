"""Command-line entry points: load, chat, eval, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .answers import AnswerHyperparams
from .benchmark import load_benchmark
from .context import TurnWeightMode
from .embeddings import WordVectorTable
from .engine import (
    FirstTurnMode,
    SessionConfig,
    TurnFailure,
    start_session,
)
from .evaluation import STRATEGIES, evaluate
from .frontier import FrontierHyperparams
from .kg import GraphFormatError, load_graph
from .linking import FirstTurnError
from .reporting import render_text, write_report

_data_dir = Path(__file__).parent / "data"


def _common_options(fn):
    fn = click.option("--kg", "kg_path", default=str(_data_dir / "mini_kg.tsv"),
                      show_default=True, help="Triples file.")(fn)
    fn = click.option("--labels", "labels_path", default=str(_data_dir / "mini_labels.tsv"),
                      show_default=True, help="Labels file (id<TAB>label).")(fn)
    fn = click.option("--vectors", "vectors_path", default=str(_data_dir / "mini_vectors.txt"),
                      show_default=True, help="Word vector text file.")(fn)
    fn = click.option("--stopwords", "stopwords_path", default=None,
                      help="Stopword file, one token per line (bundled set if omitted).")(fn)
    return fn


def _config_options(fn):
    fn = click.option("--r", "r", default=3, show_default=True, help="Frontier count.")(fn)
    fn = click.option("--hf1", default=0.55, show_default=True, help="Frontier match weight.")(fn)
    fn = click.option("--hf2", default=0.35, show_default=True, help="Frontier proximity weight.")(fn)
    fn = click.option("--hf3", default=0.10, show_default=True, help="Frontier prior weight.")(fn)
    fn = click.option("--ha1", default=0.85, show_default=True,
                      help="Answer frontier-proximity weight (context weight is 1-ha1).")(fn)
    fn = click.option("--k", "k", default=4, show_default=True,
                      help="Candidate neighborhood radius in edge hops.")(fn)
    fn = click.option("--cutoff", default=6, show_default=True,
                      help="Distance cutoff in edge hops.")(fn)
    fn = click.option("--mode", type=click.Choice(["oracle", "naive"]), default="oracle",
                      show_default=True, help="First-turn mode.")(fn)
    fn = click.option("--turn-weights", type=click.Choice(["normalized", "literal"]),
                      default="normalized", show_default=True)(fn)
    return fn


def _load(kg_path, labels_path, vectors_path, stopwords_path):
    g = load_graph(kg_path, labels_path)
    emb = WordVectorTable.load(vectors_path, stopwords_path)
    return g, emb


def _config(r, hf1, hf2, hf3, ha1, k, cutoff, mode, turn_weights) -> SessionConfig:
    return SessionConfig(
        frontier_hp=FrontierHyperparams(h1=hf1, h2=hf2, h3=hf3, r=r, k=k),
        answer_hp=AnswerHyperparams(h1=ha1, h2=1.0 - ha1),
        first_turn_mode=FirstTurnMode(mode),
        turn_weight_mode=TurnWeightMode(turn_weights),
        distance_cutoff=cutoff,
    )


@click.group(context_settings={"auto_envvar_prefix": "KGCHAT"})
@click.version_option(__version__)
def main():
    """Conversational question answering over a knowledge graph."""


@main.command("load")
@_common_options
def cmd_load(kg_path, labels_path, vectors_path, stopwords_path):
    """Parse all inputs, print counts and invariant-check results."""
    try:
        g = load_graph(kg_path, labels_path)
    except GraphFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    emb = WordVectorTable.load(vectors_path, stopwords_path)
    problems = g.check_invariants()
    kind_counts = {}
    for node in g.nodes:
        kind_counts[node.kind.value] = kind_counts.get(node.kind.value, 0) + 1
    click.echo(f"nodes: {g.node_count}")
    for kind, count in sorted(kind_counts.items()):
        click.echo(f"  {kind}: {count}")
    click.echo(f"facts: {g.fact_count}")
    click.echo(f"vocabulary: {len(emb)} ({emb.dim}-dim)")
    click.echo(f"invariants: {'OK' if not problems else 'VIOLATED'}")
    for p in problems:
        click.echo(f"  - {p}", err=True)
    if problems:
        sys.exit(1)


@main.command("chat")
@_common_options
@_config_options
def cmd_chat(kg_path, labels_path, vectors_path, stopwords_path, **cfg_kwargs):
    """Interactive conversation loop on stdin/stdout.

    Meta-commands: :reset, :oracle <entity-ids>; <answer-ids>, :dump, :quit.
    """
    g, emb = _load(kg_path, labels_path, vectors_path, stopwords_path)
    cfg = _config(**cfg_kwargs)
    session = None
    oracle = None

    def describe(record):
        if record.frontiers:
            names = ", ".join(g.nodes[f.node].label for f in record.frontiers)
            click.echo(f"  frontiers: {names}")
        for e in record.answers.entries[:5]:
            mark = "*" if e.node in record.answers.top_group else " "
            click.echo(
                f"  {mark}{e.rank}. {g.nodes[e.node].label}  score={e.score:.4f}"
            )

    click.echo("ready. first question starts a session; :help for commands")
    for raw in sys.stdin:
        line = raw.strip()
        if not line:
            continue
        if line in {":quit", ":q"}:
            break
        if line == ":help":
            click.echo(":reset | :oracle Q1,Q2; Q3 | :dump | :quit")
            continue
        if line == ":reset":
            session = None
            oracle = None
            click.echo("session cleared")
            continue
        if line.startswith(":oracle"):
            body = line[len(":oracle"):].strip()
            try:
                ent_part, ans_part = body.split(";")
                resolve = lambda tok: sorted(
                    n.node_id for n in g.nodes if n.external_id == tok.strip()
                )[0]
                oracle = (
                    [resolve(t) for t in ent_part.split(",") if t.strip()],
                    [resolve(t) for t in ans_part.split(",") if t.strip()],
                )
                click.echo("oracle inputs staged for the next first question")
            except (ValueError, IndexError):
                click.echo("usage: :oracle Q1,Q2; Q3", err=True)
            continue
        if line == ":dump":
            if session is None:
                click.echo("no session", err=True)
            else:
                click.echo(json.dumps(session.snapshot(), indent=2))
            continue
        try:
            if session is None:
                mode = cfg.first_turn_mode
                if oracle is None and mode is FirstTurnMode.ORACLE:
                    click.echo("(no :oracle given; using naive first turn)")
                    from dataclasses import replace

                    session_cfg = replace(cfg, first_turn_mode=FirstTurnMode.NAIVE)
                    session = start_session(g, emb, session_cfg, line, None)
                else:
                    session = start_session(g, emb, cfg, line, oracle)
                click.echo(f"turn 0: {line}")
                describe(session.records[0])
            else:
                record = session.ask(line)
                click.echo(
                    f"turn {record.turn} ({record.elapsed_ms:.0f} ms, "
                    f"context {len(session.ctx.node_set)} nodes)"
                )
                describe(record)
        except (TurnFailure, FirstTurnError, ValueError) as exc:
            click.echo(f"turn failed: {exc}", err=True)


@main.command("eval")
@_common_options
@_config_options
@click.option("--benchmark", "benchmark_path", default=str(_data_dir / "mini_benchmark.json"),
              show_default=True, help="Benchmark JSON document.")
@click.option("--strategy", type=click.Choice(list(STRATEGIES)), default="engine",
              show_default=True)
@click.option("--paraphrases/--no-paraphrases", default=False,
              help="Expand question/paraphrase variants (2^T per conversation).")
@click.option("--out", "out_dir", default=None,
              help="Directory for report.txt/json, metrics.tsv and figures.")
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.option("--min-p1", default=None, type=float,
              help="Exit nonzero if overall P@1 falls below this threshold.")
def cmd_eval(kg_path, labels_path, vectors_path, stopwords_path, benchmark_path,
             strategy, paraphrases, out_dir, figures, min_p1, **cfg_kwargs):
    """Run a strategy over a benchmark and report P@1 / MRR / Hit@5."""
    g, emb = _load(kg_path, labels_path, vectors_path, stopwords_path)
    cfg = _config(**cfg_kwargs)
    benchmark = load_benchmark(benchmark_path)
    report = evaluate(g, emb, strategy, benchmark, cfg, paraphrases)
    click.echo(render_text(report), nl=False)
    if out_dir:
        written = write_report(report, Path(out_dir), figures=figures)
        for kind, paths in written.items():
            for p in paths:
                click.echo(f"wrote {kind}: {p}")
    if min_p1 is not None and report.metrics()["p_at_1"] < min_p1:
        click.echo(
            f"P@1 {report.metrics()['p_at_1']:.3f} below threshold {min_p1}", err=True
        )
        sys.exit(2)


@main.command("serve")
@_common_options
@_config_options
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ttl", default=1800, show_default=True, help="Session idle TTL seconds.")
@click.option("--static", "static_dir", default=None,
              help="Directory of web client assets to serve at /.")
def cmd_serve(kg_path, labels_path, vectors_path, stopwords_path, port, host, ttl,
              static_dir, **cfg_kwargs):
    """Start the HTTP session service."""
    import uvicorn

    from .service import create_app

    g, emb = _load(kg_path, labels_path, vectors_path, stopwords_path)
    cfg = _config(**cfg_kwargs)
    app = create_app(g, emb, cfg, ttl_seconds=ttl, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":  # pragma: no cover
    main()
