"""Render result-table sweeps as figures next to the delimited report.

For every metric and scorer: when a sweep axis (injected-node count or
per-node degree) has more than one value, draw mean metric vs. that axis
with one line per attack; otherwise fall back to a bar chart across
attacks.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import ResultTable


def _metric_label(metric: str, n: int | None) -> str:
    if metric == "p@n":
        return f"P@{n}"
    return metric.upper() if metric in ("map", "auc") else metric.capitalize()


def _slug(text: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in text.lower()).strip("_")


def render_report_figures(table: ResultTable, outdir: str | Path) -> list[Path]:
    """Write one PNG per (metric, scorer) view; returns the created paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [r for r in table.rows if r.mean is not None]
    if not rows:
        return []
    scorers = sorted({r.scorer for r in rows})
    attacks = list(dict.fromkeys(r.attack for r in rows))
    metric_ids = sorted({(r.metric, r.n) for r in rows},
                        key=lambda mn: (mn[0], mn[1] if mn[1] is not None else -1))
    node_values = sorted({r.nodes for r in rows})
    degree_values = sorted({r.degree for r in rows})
    sides_values = sorted({r.sides for r in rows})
    if len(node_values) > 1:
        axis_name, axis_of = "injected nodes", (lambda r: r.nodes)
        axis_values = node_values
    elif len(degree_values) > 1:
        axis_name, axis_of = "links per injected node", (lambda r: r.degree)
        axis_values = degree_values
    else:
        axis_name, axis_values, axis_of = None, [], None

    created: list[Path] = []
    for metric, n in metric_ids:
        for scorer in scorers:
            sub = [r for r in rows
                   if r.metric == metric and r.n == n and r.scorer == scorer
                   and r.sides == sides_values[0]]
            if not sub:
                continue
            label = _metric_label(metric, n)
            fig, ax = plt.subplots(figsize=(5.0, 3.4))
            if axis_name is not None:
                for attack in attacks:
                    series = {axis_of(r): r.mean for r in sub if r.attack == attack}
                    if not series:
                        continue
                    xs = [x for x in axis_values if x in series]
                    ax.plot(xs, [series[x] for x in xs], marker="o",
                            label=attack)
                ax.set_xlabel(axis_name)
            else:
                means = [next((r.mean for r in sub if r.attack == a), None)
                         for a in attacks]
                xs = [i for i, v in enumerate(means) if v is not None]
                ax.bar(xs, [means[i] for i in xs])
                ax.set_xticks(xs)
                ax.set_xticklabels([attacks[i] for i in xs],
                                   rotation=45, ha="right", fontsize=7)
            ax.set_ylabel(label)
            ax.set_title(f"{label} under attack ({scorer})", fontsize=10)
            if axis_name is not None:
                ax.legend(fontsize=6)
            fig.tight_layout()
            path = outdir / f"{_slug(label)}__{_slug(scorer)}.png"
            fig.savefig(path, dpi=130)
            plt.close(fig)
            created.append(path)
    return created
