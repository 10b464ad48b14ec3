"""Evaluation report rendering: aligned text, TSV, JSON, and figures."""

from __future__ import annotations

import json
from pathlib import Path
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .evaluation import EvalReport

__all__ = ["render_text", "write_tsv", "write_json", "render_figures", "write_report"]

_METRICS = ("p_at_1", "mrr", "hit_at_5")


def render_text(report: EvalReport) -> str:
    lines = []
    lines.append(f"strategy: {report.strategy}")
    lines.append(f"conversations: {report.conversations}")
    lines.append(f"unresolved golds: {report.unresolved_golds}")
    lines.append("")
    header = f"{'scope':<18}{'P@1':>8}{'MRR':>8}{'Hit@5':>8}{'turns':>8}"
    lines.append(header)
    lines.append("-" * len(header))

    def row(name: str, metrics: dict[str, float]) -> str:
        return (
            f"{name:<18}{metrics['p_at_1']:>8.3f}{metrics['mrr']:>8.3f}"
            f"{metrics['hit_at_5']:>8.3f}{int(metrics['turns']):>8d}"
        )

    lines.append(row("overall", report.metrics()))
    lines.append(row("per-conv mean", report.per_conversation_mean()))
    for domain, metrics in report.per_domain().items():
        lines.append(row(f"domain:{domain}", metrics))
    for turn, metrics in report.per_turn().items():
        lines.append(row(f"turn {turn}", metrics))
    lines.append("")
    lines.append("error categories (% of total errors)")
    for name, pct in report.error_breakdown().items():
        lines.append(f"  {name:<34}{pct:>7.1f}")
    return "\n".join(lines) + "\n"


def write_tsv(report: EvalReport, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("scope\tp_at_1\tmrr\thit_at_5\tturns\n")

        def row(name: str, metrics: dict[str, float]) -> None:
            fh.write(
                f"{name}\t{metrics['p_at_1']:.6f}\t{metrics['mrr']:.6f}"
                f"\t{metrics['hit_at_5']:.6f}\t{int(metrics['turns'])}\n"
            )

        row("overall", report.metrics())
        for domain, metrics in report.per_domain().items():
            row(f"domain:{domain}", metrics)
        for turn, metrics in report.per_turn().items():
            row(f"turn:{turn}", metrics)


def write_json(report: EvalReport, path: Path) -> None:
    doc = {
        "strategy": report.strategy,
        "conversations": report.conversations,
        "unresolved_golds": report.unresolved_golds,
        "overall": report.metrics(),
        "per_conversation_mean": report.per_conversation_mean(),
        "per_domain": report.per_domain(),
        "per_turn": {str(k): v for k, v in report.per_turn().items()},
        "error_categories_pct": report.error_breakdown(),
        "turns": [
            {
                "conversation_id": o.conversation_id,
                "domain": o.domain,
                "turn_index": o.turn_index,
                "p_at_1": o.p1,
                "mrr": o.rr,
                "hit_at_5": o.hit5,
                "error_category": o.error_category,
                "distance_from_seed": o.distance_from_seed,
            }
            for o in report.outcomes
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def render_figures(report: EvalReport, outdir: Path) -> list[Path]:
    """Bar chart of per-domain metrics and a per-turn MRR line plot."""
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    per_domain = report.per_domain()
    domains = list(per_domain) or ["overall"]
    values = {
        m: [per_domain.get(d, report.metrics())[m] for d in domains] for m in _METRICS
    }
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(domains), 3.4))
    width = 0.26
    for i, metric in enumerate(_METRICS):
        xs = [j + (i - 1) * width for j in range(len(domains))]
        ax.bar(xs, values[metric], width=width, label=metric.replace("_at_", "@").upper())
    ax.set_xticks(range(len(domains)))
    ax.set_xticklabels(domains, rotation=20, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(f"{report.strategy}: metrics by domain")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / f"metrics_by_domain_{report.strategy}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    per_turn = report.per_turn()
    if per_turn:
        fig, ax = plt.subplots(figsize=(4.8, 3.2))
        turns = sorted(per_turn)
        for metric, marker in zip(_METRICS, "o^s"):
            ax.plot(
                turns,
                [per_turn[t][metric] for t in turns],
                marker=marker,
                label=metric.replace("_at_", "@").upper(),
            )
        ax.set_xticks(turns)
        ax.set_xlabel("follow-up turn")
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("score")
        ax.set_title(f"{report.strategy}: metrics over turns")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = outdir / f"metrics_by_turn_{report.strategy}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written


def write_report(
    report: EvalReport, outdir: Path, figures: bool = True
) -> dict[str, list[str]]:
    """Writes report.txt, report.json, metrics.tsv and PNG figures."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.txt").write_text(render_text(report), encoding="utf-8")
    write_tsv(report, outdir / "metrics.tsv")
    write_json(report, outdir / "report.json")
    out = {
        "text": [str(outdir / "report.txt")],
        "tsv": [str(outdir / "metrics.tsv")],
        "json": [str(outdir / "report.json")],
        "figures": [],
    }
    if figures:
        out["figures"] = [str(p) for p in render_figures(report, outdir)]
    return out
