"""Figures and drawings: SVG export and matplotlib report plots.

SVG is written by hand so that exports need nothing beyond the standard
library.  Matplotlib is imported lazily and always with the Agg backend.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .graph import UDGraph

_PALETTE = ("#f7fbff", "#c6dbef", "#6baed6", "#2171b5", "#08306b")


def _weight_colour(x: float, top: float) -> str:
    if top <= 0:
        return _PALETTE[0]
    k = min(len(_PALETTE) - 1, int(x / top * (len(_PALETTE) - 1) + 0.5))
    return _PALETTE[k]


def to_svg(g: UDGraph, weights: Sequence | None = None, size: int = 600,
           title: str | None = None) -> str:
    """One <circle> per vertex, one <line> per unit edge.

    With ``weights`` (one per vertex) vertices are shaded by weight.
    """
    pts = [p.to_float() for p in g.vertices]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    else:
        lo_x = hi_x = lo_y = hi_y = 0.0
    span = max(hi_x - lo_x, hi_y - lo_y, 1.0)
    pad = 20
    scale = (size - 2 * pad) / span

    def tx(x, y):
        # svg y grows downwards
        return pad + (x - lo_x) * scale, size - pad - (y - lo_y) * scale

    r = max(1.5, min(6.0, 0.08 * scale))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g stroke="#444" stroke-width="0.6">')
    for i, j in g.edges():
        x1, y1 = tx(*pts[i])
        x2, y2 = tx(*pts[j])
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')
    out.append("</g>")
    wf = [float(x) for x in weights] if weights is not None else None
    top = max(wf) if wf else 0.0
    out.append('<g stroke="#000" stroke-width="0.5">')
    for i, (x, y) in enumerate(pts):
        cx, cy = tx(x, y)
        fill = _weight_colour(wf[i], top) if wf else "#fff"
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_graph(g: UDGraph, path, weights: Sequence | None = None, title: str | None = None) -> Path:
    plt = _pyplot()
    from matplotlib.collections import LineCollection

    xy = g.float_coords()
    fig, ax = plt.subplots(figsize=(7, 7))
    segs = [(xy[i], xy[j]) for i, j in g.edges()]
    ax.add_collection(LineCollection(segs, colors="0.35", linewidths=0.4, zorder=1))
    if len(xy):
        if weights is not None:
            sc = ax.scatter(xy[:, 0], xy[:, 1], c=[float(x) for x in weights], cmap="Blues",
                            s=14, edgecolors="k", linewidths=0.3, zorder=2)
            fig.colorbar(sc, ax=ax, shrink=0.7, label="vertex weight")
        else:
            ax.scatter(xy[:, 0], xy[:, 1], c="w", s=14, edgecolors="k", linewidths=0.3, zorder=2)
    ax.set_aspect("equal")
    ax.autoscale()
    ax.set_title(title or f"{g.n} vertices, {g.num_edges()} edges")
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_convergence(trace, path, title: str = "alpha* bounds") -> Path:
    """Lower bound per iteration, best upper bound so far, each exact optup and capped bound."""
    plt = _pyplot()
    idx = [it.index for it in trace]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(idx, [float(it.optlow) for it in trace], label="optlow (LP over S)")
    up = [(it.index, float(it.best_up)) for it in trace if it.best_up < 1]
    if up:
        ax.step(*zip(*up), where="post", label="best optup")
    pts = [(it.index, float(it.optup)) for it in trace if it.optup is not None]
    if pts:
        ax.plot(*zip(*pts), "x", ms=4, label="optup (exact MWIS)")
    capped = [(it.index, float(it.bound)) for it in trace if getattr(it, "bound", None) is not None]
    if capped:
        ax.plot(*zip(*capped), "v", ms=4, label="bound (capped MWIS)")
    ax.set_xlabel("iteration")
    ax.set_ylabel("weighted independence ratio")
    ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3)
    path = Path(path)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def write_figures(g: UDGraph, out_path, weights=None, trace=None) -> list[Path]:
    """Render figures next to ``out_path`` (same stem, -graph.png / -convergence.png)."""
    out_path = Path(out_path)
    stem = out_path.with_suffix("")
    made = [plot_graph(g, f"{stem}-graph.png", weights)]
    if trace:
        made.append(plot_convergence(trace, f"{stem}-convergence.png"))
    return made


def fraction_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
