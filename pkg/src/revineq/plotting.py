"""Figure rendering for sweep tables.

Kept separate so the numeric core has no plotting dependency at import time;
matplotlib is pulled in lazily with the Agg backend (file output only).
"""
from __future__ import annotations


def render_sweep_figure(sweep_result, path: str, title: str | None = None) -> str:
    """Render empirical constants vs n on a log2 x-axis and save to ``path``.

    The file format follows the extension (png, pdf, svg).  Returns the path.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = sweep_result.rows
    xs = [row["n"] for row in rows]
    ys = [float(row["empirical_C"]) for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, ys, marker="o", lw=1.2)
    if len(xs) > 1 and min(xs) > 0:
        ax.set_xscale("log", base=2)
    ax.set_xlabel("n")
    ax.set_ylabel("empirical constant")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
