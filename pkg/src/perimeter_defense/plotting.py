"""Matplotlib figures for reports and simulation snapshots.

Everything renders to files through the Agg backend; nothing opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .engagement1v1 import breaching_points, solo_from_breach  # noqa: E402
from .engagement2v1 import evaluate_duo  # noqa: E402
from .geometry import PerimeterCurve  # noqa: E402

DEFENDER_COLOR = "tab:blue"
INTRUDER_COLOR = "tab:red"


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def draw_perimeter(ax, c: PerimeterCurve) -> None:
    v = np.vstack([c.vertices, c.vertices[:1]])
    ax.fill(v[:, 0], v[:, 1], color="#dde6f0", zorder=0)
    ax.plot(v[:, 0], v[:, 1], "k-", lw=1.2)
    ax.set_aspect("equal")


def draw_agents(ax, c: PerimeterCurve, s_D: Sequence[float], x_A: Sequence) -> None:
    if len(s_D):
        p = c.points_at(np.asarray(s_D, dtype=float))
        ax.plot(p[:, 0], p[:, 1], "o", color=DEFENDER_COLOR, ms=7, label="defenders")
        for i, q in enumerate(p):
            ax.annotate(f"D{i}", q, textcoords="offset points", xytext=(4, 4), fontsize=8)
    pts = [x for x in x_A if x is not None]
    if pts:
        a = np.asarray(pts, dtype=float)
        ax.plot(a[:, 0], a[:, 1], "^", color=INTRUDER_COLOR, ms=7, label="intruders")
    for k, x in enumerate(x_A):
        if x is not None:
            ax.annotate(f"A{k}", x, textcoords="offset points", xytext=(4, -10), fontsize=8)


def plot_value_field(path, c: PerimeterCurve, xs, ys, V, title: str = "",
                     barrier: np.ndarray | None = None, s_D: Sequence[float] = (),
                     x_A: Sequence = ()) -> Path:
    """Filled level sets with the zero contour (the barrier) emphasized."""
    fig, ax = plt.subplots(figsize=(6, 6))
    lim = np.nanmax(np.abs(V)) if np.any(np.isfinite(V)) else 1.0
    cs = ax.contourf(xs, ys, V, levels=21, cmap="RdBu_r", vmin=-lim, vmax=lim)
    ax.contour(xs, ys, V, levels=[0.0], colors="k", linewidths=1.5)
    fig.colorbar(cs, ax=ax, shrink=0.8)
    draw_perimeter(ax, c)
    if barrier is not None and len(barrier):
        ax.plot(barrier[:, 0], barrier[:, 1], "--", color="tab:orange", lw=1.2, label="barrier")
    draw_agents(ax, c, s_D, x_A)
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def plot_barrier(path, c: PerimeterCurve, barrier: np.ndarray, s_D: float) -> Path:
    fig, ax = plt.subplots(figsize=(6, 6))
    draw_perimeter(ax, c)
    ax.plot(barrier[:, 0], barrier[:, 1], "-", color="tab:red", lw=1.5, label="barrier")
    draw_agents(ax, c, [s_D], [])
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def _draw_assignment(ax, c: PerimeterCurve, s_D, x_A, edges, nu: float) -> None:
    """Dash-dotted lines for 1v1 edges, solid for pairs; stars at breaching targets."""
    for node, k in edges:
        x = x_A[k]
        if x is None:
            continue
        bp = breaching_points(c, x, nu)
        if len(node) == 1:
            ev = solo_from_breach(c, s_D[node[0]], bp)
            target = ev.target_point
            style = "-."
        else:
            ev = evaluate_duo(c, s_D[node[0]], s_D[node[1]], x, nu, bp)
            target = c.point_at(ev.s_opt)
            style = "-"
        for i in node:
            p = c.point_at(s_D[i])
            ax.plot([p[0], x[0]], [p[1], x[1]], style, color="0.4", lw=0.9)
        ax.plot(*target, "*", color="gold", mec="k", mew=0.5, ms=11)


def plot_assignment(path, c: PerimeterCurve, s_D, x_A, edges, nu: float, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6, 6))
    draw_perimeter(ax, c)
    _draw_assignment(ax, c, list(s_D), list(x_A), edges, nu)
    draw_agents(ax, c, list(s_D), list(x_A))
    ax.set_title(title)
    return _save(fig, path)


def plot_trace(path, c: PerimeterCurve, trace, title: str = "") -> Path:
    """Paths of all agents over the run; breaches and captures marked."""
    fig, ax = plt.subplots(figsize=(6, 6))
    draw_perimeter(ax, c)
    recs = trace.records
    if recs:
        n_int = len(recs[0]["x_A"])
        for k in range(n_int):
            pts = np.array([r["x_A"][k] for r in recs if r["x_A"][k] is not None])
            if len(pts):
                ax.plot(pts[:, 0], pts[:, 1], "-", color=INTRUDER_COLOR, lw=0.8)
        s0 = recs[0]["s_D"]
        for i in range(len(s0)):
            p = c.points_at(np.array([r["s_D"][i] for r in recs]))
            ax.plot(p[:, 0], p[:, 1], ".", color=DEFENDER_COLOR, ms=1.5)
        draw_agents(ax, c, s0, recs[0]["x_A"])
    for e in trace.events:
        if e.kind == "BREACH" and e.s_B is not None:
            ax.plot(*c.point_at(e.s_B), "x", color="k", ms=9, mew=2)
        elif e.kind == "CAPTURE" and e.intruder is not None:
            last = [r["x_A"][e.intruder] for r in recs if r["x_A"][e.intruder] is not None]
            if last:
                ax.plot(*last[-1], "s", mfc="none", color="green", ms=9)
    ax.set_title(title or f"Q = {trace.Q}")
    return _save(fig, path)


def snapshot_frames(out_dir, c: PerimeterCurve, trace, nu: float, n_frames: int = 8) -> list[Path]:
    """Evenly spaced SVG snapshots of a run."""
    recs = trace.records
    if not recs:
        return []
    idx = np.unique(np.linspace(0, len(recs) - 1, max(n_frames, 1)).round().astype(int))
    paths = []
    for m, j in enumerate(idx):
        r = recs[j]
        fig, ax = plt.subplots(figsize=(5, 5))
        draw_perimeter(ax, c)
        edges = [(tuple(node), k) for node, k in r.get("assign", [])]
        _draw_assignment(ax, c, r["s_D"], r["x_A"], edges, nu)
        draw_agents(ax, c, r["s_D"], r["x_A"])
        ax.set_title(f"t = {r['t']:.3f}")
        paths.append(_save(fig, Path(out_dir) / f"frame_{m:03d}.svg"))
    return paths


def plot_histograms(path, columns: dict, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    data = [np.asarray(v, dtype=float) for v in columns.values()]
    top = int(max((d.max() for d in data if d.size), default=0))
    bins = np.arange(-0.5, top + 1.5)
    ax.hist(data, bins=bins, label=list(columns), histtype="bar")
    ax.set_xlabel("score")
    ax.set_ylabel("instances")
    ax.legend(fontsize=8)
    ax.set_title(title)
    return _save(fig, path)


def plot_scatter(path, x, y, xlabel: str, ylabel: str, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(x, y, ".", ms=3)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.axvline(0.0, color="k", lw=0.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)
