"""File output: JSON/JSONL, CSV grids and polylines, plain SVG paths."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .engagement1v1 import breaching_points, solo_from_breach
from .engagement2v1 import evaluate_duo
from .geometry import PerimeterCurve, is_exterior


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def to_json(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, default=_default, indent=indent)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(obj) + "\n")
    return path


def write_jsonl(path, records: Iterable) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, default=_default) + "\n")
    return path


def write_rows_csv(path, rows: Sequence[dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    keys: list = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        w.writerows(rows)
    return path


# --- sampled value fields ----------------------------------------------------------

def grid_box(c: PerimeterCurve, pad: float = 0.75) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = c.vertices.min(axis=0), c.vertices.max(axis=0)
    ext = float(np.max(hi - lo))
    return lo - pad * ext, hi + pad * ext


def sample_field(c: PerimeterCurve, fn: Callable, grid_n: int = 81,
                 box: tuple | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate ``fn(x)`` on a regular grid; NaN at non-exterior nodes.

    Returns ``(xs, ys, V)`` with ``V[j, i]`` the value at ``(xs[i], ys[j])``.
    """
    lo, hi = box if box is not None else grid_box(c)
    xs = np.linspace(lo[0], hi[0], grid_n)
    ys = np.linspace(lo[1], hi[1], grid_n)
    V = np.full((grid_n, grid_n), np.nan)
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            p = (x, y)
            if is_exterior(c, p):
                V[j, i] = fn(np.array(p))
    return xs, ys, V


def solo_value_field(c: PerimeterCurve, s_D: float, nu: float, which: str = "V"):
    """Callable for :func:`sample_field`: ``V``, ``J_L`` or ``J_R`` of the 1v1 game."""
    key = {"V": "value", "J_L": "J_L_star", "J_R": "J_R_star"}[which]

    def fn(x):
        return getattr(solo_from_breach(c, s_D, breaching_points(c, x, nu)), key)
    return fn


def duo_value_field(c: PerimeterCurve, s_D1: float, s_D2: float, nu: float):
    def fn(x):
        return evaluate_duo(c, s_D1, s_D2, x, nu).value
    return fn


def write_grid_csv(path, xs, ys, V, name: str = "value") -> Path:
    rows = [{"x": float(x), "y": float(y), name: (None if np.isnan(V[j, i]) else float(V[j, i]))}
            for j, y in enumerate(ys) for i, x in enumerate(xs)]
    return write_rows_csv(path, rows)


def write_polyline_csv(path, pts: np.ndarray) -> Path:
    return write_rows_csv(path, [{"x": float(p[0]), "y": float(p[1])} for p in np.asarray(pts)])


# --- SVG ---------------------------------------------------------------------------

def svg_path_d(pts: np.ndarray, closed: bool = False, flip_y: bool = True) -> str:
    pts = np.asarray(pts, dtype=float)
    sy = -1.0 if flip_y else 1.0
    parts = [f"M {pts[0, 0]:.6g} {sy * pts[0, 1]:.6g}"]
    parts += [f"L {x:.6g} {sy * y:.6g}" for x, y in pts[1:]]
    if closed:
        parts.append("Z")
    return " ".join(parts)


def barrier_svg(c: PerimeterCurve, barrier: np.ndarray, defender: Sequence[float] | None = None,
                stroke: float | None = None) -> str:
    """Standalone SVG with the perimeter and a barrier curve, y axis up."""
    allpts = np.vstack([c.vertices, barrier])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    pad = 0.05 * float(np.max(hi - lo))
    lo, hi = lo - pad, hi + pad
    w = stroke or 0.004 * float(np.max(hi - lo))
    vb = f"{lo[0]:.6g} {-hi[1]:.6g} {hi[0] - lo[0]:.6g} {hi[1] - lo[1]:.6g}"
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb}" width="600" height="600">',
           f'<path d="{svg_path_d(c.vertices, closed=True)}" fill="#dde6f0" stroke="black" stroke-width="{w:.4g}"/>',
           f'<path id="barrier" d="{svg_path_d(barrier)}" fill="none" stroke="#c0392b" stroke-width="{w:.4g}"/>']
    if defender is not None:
        out.append(f'<circle cx="{defender[0]:.6g}" cy="{-defender[1]:.6g}" r="{3 * w:.4g}" fill="blue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = [
    "barrier_svg", "duo_value_field", "grid_box", "sample_field", "solo_value_field", "svg_path_d",
    "to_json", "write_grid_csv", "write_json", "write_jsonl", "write_polyline_csv", "write_rows_csv",
]
