"""Figures for the ``bench`` report."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def golden_figsize(width=6.0):
    return (width, width * (5 ** 0.5 - 1) / 2)


def plot_bench(rows: list[dict], path: str, title: str = "") -> str:
    """Per-trial wall time of both engines (log scale), yes-instances filled."""
    with plt.rc_context(RC):
        fig, (ax_t, ax_v) = plt.subplots(1, 2, figsize=golden_figsize(8.0))
        trials = [r["trial"] for r in rows]
        for key, color, label in (("fast_ms", "C0", "fast"), ("brute_ms", "C1", "brute")):
            for yes in (True, False):
                pts = [(t, max(r[key], 1e-3)) for t, r in zip(trials, rows) if bool(r["apath"]) == yes]
                if not pts:
                    continue
                ax_t.scatter(*zip(*pts), s=18, edgecolors=color,
                             facecolors=color if yes else "none",
                             label=f"{label} ({'yes' if yes else 'no'})")
        ax_t.set_yscale("log")
        ax_t.set_xlabel("trial")
        ax_t.set_ylabel("wall time [ms]")
        ax_t.legend(frameon=False)

        ax_v.scatter([r["states"] for r in rows], [r["brute_visits"] for r in rows],
                     s=18, color="C1", label="brute (node, state) visits")
        ax_v.scatter([r["states"] for r in rows], [r["fast_visits"] for r in rows],
                     s=18, color="C0", label="fast cluster visits")
        ax_v.set_xlabel("model states")
        ax_v.set_ylabel("visits")
        ax_v.legend(frameon=False)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return path
