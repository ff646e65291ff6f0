"""Figure rendering for run logs, suite matrices, and habituation curves.

Everything draws to files (Agg backend); the CLI writes these next to the
JSONL/CSV output so a run leaves both a machine-readable and a visual trail.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .habituation import HabituationParams, simulate_trace
from .harness import RunLog, SuiteResult


def habituation_figure(
    param_sets: list[HabituationParams],
    schedule: list[tuple[int, float]],
    path: str | Path,
    labels: list[str] | None = None,
) -> Path:
    """Efficacy-versus-time curves for one stimulus schedule."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, params in enumerate(param_sets):
        trace = simulate_trace(params, schedule)
        label = labels[i] if labels else f"alpha={params.alpha}, tau={params.tau}"
        ax.plot(range(1, len(trace) + 1), trace, label=label)
    boundaries = []
    t = 0
    for duration, stimulus in schedule[:-1]:
        t += duration
        boundaries.append(t)
    for b in boundaries:
        ax.axvline(b, color="grey", linestyle=":", linewidth=0.8)
    ax.set_xlabel("tick")
    ax.set_ylabel("synaptic efficacy")
    ax.set_ylim(-0.02, 1.05)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def run_figure(log: RunLog, boredom_threshold: float, path: str | Path) -> Path:
    """Heading and per-sensor novelty over one scenario run."""
    ticks = [r["tick"] for r in log.records]
    headings = [r["heading_after"] for r in log.records]
    fig, (ax_h, ax_n) = plt.subplots(
        2, 1, figsize=(9, 6), sharex=True, height_ratios=[1, 2]
    )
    ax_h.step(ticks, headings, where="post", color="black", linewidth=1)
    ax_h.set_ylabel("heading (deg)")
    ax_h.set_yticks([0, 90, 180, 270, 360])
    for sensor in range(4):
        xs, ys = [], []
        for r in log.records:
            rep = r["reports"][sensor]
            if rep is not None:
                xs.append(r["tick"])
                ys.append(rep["novelty"])
        ax_n.plot(xs, ys, linewidth=0.8, label=f"sensor {sensor}")
    ax_n.axhline(boredom_threshold, color="red", linestyle="--", linewidth=0.8,
                 label="boredom threshold")
    for r in log.records:
        if r["decision"]["action"] in ("turn", "calibrate_scan"):
            ax_n.axvline(r["tick"], color="grey", alpha=0.15, linewidth=0.5)
    ax_n.set_xlabel("tick")
    ax_n.set_ylabel("reported novelty")
    ax_n.legend(loc="upper right", fontsize=8)
    fig.suptitle(f"{log.scenario} [{log.kind}] seed={log.seed}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def suite_figure(result: SuiteResult, path: str | Path) -> Path:
    """Pass/fail matrix, scenarios by clusterer kind."""
    kinds = sorted({c.kind for c in result.cells})
    names = list(dict.fromkeys(c.scenario for c in result.cells))
    by_key = {(c.scenario, c.kind): c for c in result.cells}
    fig, ax = plt.subplots(
        figsize=(2 + 1.6 * len(kinds), 1 + 0.45 * len(names))
    )
    for y, name in enumerate(names):
        for x, kind in enumerate(kinds):
            cell = by_key.get((name, kind))
            if cell is None:
                color = "lightgrey"
            elif cell.passed:
                color = "#4caf50"
            else:
                color = "#f44336" if cell.gating else "#ff9800"
            ax.add_patch(plt.Rectangle((x, y), 0.94, 0.88, color=color))
            if cell is not None:
                mark = "pass" if cell.passed else ("FAIL" if cell.gating else "fail*")
                ax.text(x + 0.47, y + 0.44, mark, ha="center", va="center", fontsize=8)
    ax.set_xlim(0, len(kinds))
    ax.set_ylim(len(names), 0)
    ax.set_xticks([x + 0.47 for x in range(len(kinds))], kinds)
    ax.set_yticks([y + 0.44 for y in range(len(names))], names, fontsize=8)
    ax.tick_params(length=0)
    for spine in ax.spines.values():
        spine.set_visible(False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
