"""Convex perimeter geometry.

Every perimeter is stored as a counter-clockwise convex polygon with
cumulative arc lengths. Smooth shapes (circle, piecewise ellipse) are
densified into polygons at construction time, so one code path serves
polygons and curves alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

DEFAULT_RESOLUTION = 2048
CORNER_TOL = 1e-6
GEOMETRY_EPS = 1e-9

# quadrant semi-axes [a, b] for polar angle ranges [0, pi/2], [pi/2, pi], ...
PIECEWISE_ELLIPSE_AXES = ((5.0, 2.0), (2.0, 2.0), (2.0, 3.0), (5.0, 3.0))


class GeometryError(ValueError):
    """Raised for degenerate perimeters or queries outside an operation's domain."""


class PerimeterCurve:
    """Arc-length parameterized convex polygon.

    Attributes:
        vertices: (n, 2) array, counter-clockwise, ``vertices[0]`` sits at s=0.
        cum_length: (n,) arc length of each vertex, ``cum_length[0] == 0``.
        total_length: perimeter length L.
        vertex_is_corner: (n,) bool, True where the turning angle exceeds
            ``corner_tol`` (tangent discontinuity).
        eps: absolute geometry tolerance, ``GEOMETRY_EPS * L``.
    """

    def __init__(self, vertices: np.ndarray, corner_tol: float = CORNER_TOL):
        v = np.ascontiguousarray(vertices, dtype=float)
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        if np.any(lengths <= 0.0):
            raise GeometryError("perimeter has repeated vertices")
        tangents = edges / lengths[:, None]
        prev_t = np.roll(tangents, 1, axis=0)
        turn = np.arctan2(
            prev_t[:, 0] * tangents[:, 1] - prev_t[:, 1] * tangents[:, 0],
            np.sum(prev_t * tangents, axis=1),
        )
        if np.any(turn < -1e-12) or np.count_nonzero(turn > 1e-12) < 3:
            raise GeometryError("vertices do not form a strictly convex ccw polygon")

        self.vertices = v
        self.edges = edges
        self.edge_length = lengths
        self.tangents = tangents
        self.turn_angle = turn
        self.cum_length = np.concatenate(([0.0], np.cumsum(lengths)[:-1]))
        self.total_length = float(np.sum(lengths))
        self.vertex_is_corner = turn > corner_tol
        self.eps = GEOMETRY_EPS * self.total_length
        # sd_k(x) = tx_k * y - ty_k * x - offset_k, positive on the interior side
        self._tx = np.ascontiguousarray(tangents[:, 0])
        self._ty = np.ascontiguousarray(tangents[:, 1])
        self._offset = tangents[:, 0] * v[:, 1] - tangents[:, 1] * v[:, 0]
        for arr in (self.vertices, self.edges, self.edge_length, self.tangents,
                    self.turn_angle, self.cum_length, self.vertex_is_corner):
            arr.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def L(self) -> float:
        return self.total_length

    def __repr__(self) -> str:
        return f"PerimeterCurve(n={self.n}, L={self.total_length:.6g})"

    def reduce(self, s: float) -> float:
        """Map an arc position into [0, L)."""
        L = self.total_length
        r = s % L
        if r >= L:
            r -= L
        return r

    def edge_index(self, s: float) -> int:
        """Index of the edge containing reduced arc position ``s``."""
        k = int(np.searchsorted(self.cum_length, s, side="right")) - 1
        return min(max(k, 0), self.n - 1)

    def point_at(self, s: float) -> np.ndarray:
        s = self.reduce(s)
        k = self.edge_index(s)
        return self.vertices[k] + (s - self.cum_length[k]) * self.tangents[k]

    def points_at(self, s: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`point_at`."""
        s = np.mod(np.asarray(s, dtype=float), self.total_length)
        k = np.clip(np.searchsorted(self.cum_length, s, side="right") - 1, 0, self.n - 1)
        return self.vertices[k] + (s - self.cum_length[k])[:, None] * self.tangents[k]

    def tangent_at(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        """One-sided unit tangents ``(T_minus, T_plus)`` at ``s``.

        The two agree on edge interiors and differ at vertices.
        """
        s = self.reduce(s)
        k = self.edge_index(s)
        if s - self.cum_length[k] <= self.eps:
            return self.tangents[k - 1], self.tangents[k]
        end = self.cum_length[k] + self.edge_length[k]
        if end - s <= self.eps:
            k_next = (k + 1) % self.n
            return self.tangents[k], self.tangents[k_next]
        return self.tangents[k], self.tangents[k]

    def signed_distances(self, x: Sequence[float]) -> np.ndarray:
        """Signed distance from ``x`` to every edge line (positive inside)."""
        return self._tx * x[1] - self._ty * x[0] - self._offset


def arc_distance_ccw(c: PerimeterCurve, a: float, b: float) -> float:
    """Counter-clockwise arc length from ``a`` to ``b``: ``(b - a) mod L``."""
    return c.reduce(b - a)


def in_ccw_segment(c: PerimeterCurve, s: float, start: float, end: float,
                   tol: float = 0.0) -> bool:
    """True iff ``s`` lies on the closed ccw segment from ``start`` to ``end``."""
    return arc_distance_ccw(c, start, s) <= arc_distance_ccw(c, start, end) + tol


def build_perimeter(points: Iterable[Sequence[float]], corner_tol: float = CORNER_TOL) -> PerimeterCurve:
    """Convex hull of ``points`` as a :class:`PerimeterCurve`.

    Concave inputs are hulled without complaint. Orientation is normalized
    to ccw, and the first input point that survives hulling becomes s=0.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise GeometryError("points must be a sequence of 2D coordinates")
    if len(np.unique(pts, axis=0)) < 3:
        raise GeometryError("need at least three distinct points")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise GeometryError("points are collinear; no enclosed region") from exc
    idx = list(hull.vertices)  # ccw for 2D input
    on_hull = set(idx)
    first = next(i for i in range(len(pts)) if i in on_hull)
    start = idx.index(first)
    idx = idx[start:] + idx[:start]
    return PerimeterCurve(pts[idx], corner_tol=corner_tol)


def circle(radius: float = 1.0, n: int = DEFAULT_RESOLUTION,
           center: Sequence[float] = (0.0, 0.0)) -> PerimeterCurve:
    """Regular n-gon inscribed in a circle, first vertex at polar angle 0."""
    if radius <= 0:
        raise GeometryError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack((center[0] + radius * np.cos(theta),
                           center[1] + radius * np.sin(theta)))
    return PerimeterCurve(pts)


def piecewise_ellipse(axes: Sequence[Sequence[float]] = PIECEWISE_ELLIPSE_AXES,
                      n: int = DEFAULT_RESOLUTION) -> PerimeterCurve:
    """Four quarter-ellipses glued at the axes, ``[a cos t, b sin t]`` per quadrant."""
    axes = np.asarray(axes, dtype=float)
    if axes.shape != (4, 2) or np.any(axes <= 0):
        raise GeometryError("axes must be four positive [a, b] pairs")
    theta = 2.0 * np.pi * np.arange(n) / n
    quadrant = np.minimum((theta // (np.pi / 2)).astype(int), 3)
    a, b = axes[quadrant, 0], axes[quadrant, 1]
    return PerimeterCurve(np.column_stack((a * np.cos(theta), b * np.sin(theta))))


def perimeter_from_spec(spec: dict) -> PerimeterCurve:
    """Build a perimeter from a scenario ``perimeter`` block.

    Accepted forms::

        {"vertices": [[x, y], ...]}
        {"shape": "circle", "radius": R, "n": N}
        {"shape": "piecewise-ellipse", "axes": [[a, b]] * 4, "n": N}
    """
    if "vertices" in spec:
        return build_perimeter(spec["vertices"])
    shape = spec.get("shape")
    n = int(spec.get("n", DEFAULT_RESOLUTION))
    if shape == "circle":
        return circle(float(spec.get("radius", 1.0)), n=n,
                      center=spec.get("center", (0.0, 0.0)))
    if shape == "piecewise-ellipse":
        return piecewise_ellipse(spec.get("axes", PIECEWISE_ELLIPSE_AXES), n=n)
    raise GeometryError(f"unknown perimeter shape {shape!r}")


def outward_point(c: PerimeterCurve, s: float, offset: float) -> np.ndarray:
    """Point at distance ``offset`` along the outward normal of the edge leaving ``s``."""
    t = c.tangent_at(s)[1]
    return c.point_at(s) + offset * np.array([t[1], -t[0]])


def is_exterior(c: PerimeterCurve, x: Sequence[float]) -> bool:
    """Strictly outside the closed region; boundary points are not exterior."""
    return bool(np.min(c.signed_distances(x)) < -c.eps)


@dataclass(frozen=True)
class TangentFan:
    """Visible boundary from an exterior point.

    ``s_tan_R`` and ``s_tan_L`` are the touch points of the two supporting
    lines; the visible segment runs ccw from ``s_tan_R`` to ``s_tan_L``.
    ``first_edge`` and ``n_edges`` index the visible edges.
    """

    s_tan_R: float
    s_tan_L: float
    first_edge: int
    n_edges: int

    def width(self, c: PerimeterCurve) -> float:
        return arc_distance_ccw(c, self.s_tan_R, self.s_tan_L)

    def contains(self, c: PerimeterCurve, s: float) -> bool:
        return in_ccw_segment(c, c.reduce(s), self.s_tan_R, self.s_tan_L, tol=c.eps)


def visible_edges(c: PerimeterCurve, x: Sequence[float]) -> tuple[int, int]:
    """``(first_edge, count)`` of the contiguous run of edges visible from ``x``."""
    vis = c.signed_distances(x) < -c.eps
    if not vis.any():
        raise GeometryError(f"point {tuple(map(float, x))} is not exterior to the perimeter")
    starts = np.flatnonzero(vis & ~np.roll(vis, 1))
    k0 = int(starts[0])
    return k0, int(np.count_nonzero(vis))


def tangent_points(c: PerimeterCurve, x: Sequence[float]) -> TangentFan:
    """Supporting-line touch points seen from the exterior point ``x``."""
    k0, m = visible_edges(c, x)
    k1 = (k0 + m) % c.n
    return TangentFan(float(c.cum_length[k0]), float(c.cum_length[k1]), k0, m)


def approach_angle(c: PerimeterCurve, x: Sequence[float], s: float) -> tuple[float, float]:
    """One-sided approach angles ``(phi_minus, phi_plus)`` at visible point ``s``.

    The approach angle is the angle between the direction from ``x`` to the
    boundary point and the boundary tangent there, in [0, pi].
    """
    fan = tangent_points(c, x)
    if not fan.contains(c, s):
        raise GeometryError(f"arc position {s} is not visible from {tuple(map(float, x))}")
    d = c.point_at(s) - np.asarray(x, dtype=float)
    d /= math.hypot(d[0], d[1])
    t_minus, t_plus = c.tangent_at(s)
    phi_m = math.acos(min(1.0, max(-1.0, float(d @ t_minus))))
    phi_p = math.acos(min(1.0, max(-1.0, float(d @ t_plus))))
    return phi_m, phi_p


def closest_point(c: PerimeterCurve, x: Sequence[float]) -> tuple[float, np.ndarray, float]:
    """Nearest boundary point to ``x`` as ``(s, point, distance)``."""
    x = np.asarray(x, dtype=float)
    rel = x - c.vertices
    t = np.clip(np.einsum("ij,ij->i", rel, c.tangents), 0.0, c.edge_length)
    foot = c.vertices + t[:, None] * c.tangents
    dist = np.hypot(foot[:, 0] - x[0], foot[:, 1] - x[1])
    k = int(np.argmin(dist))
    return c.reduce(c.cum_length[k] + t[k]), foot[k], float(dist[k])


def segment_entry(c: PerimeterCurve, x0: Sequence[float], x1: Sequence[float]) -> float | None:
    """Fraction along ``x0 -> x1`` at which the segment first touches the region.

    Returns None when the segment stays strictly exterior. ``x0`` must be
    exterior.
    """
    sd0 = c.signed_distances(x0) + c.eps
    sd1 = c.signed_distances(x1) + c.eps
    enter, leave = 0.0, 1.0
    outside = sd0 < 0.0
    grow = sd1 - sd0
    if np.any(outside & (grow <= 0.0)):
        return None
    if outside.any():
        enter = float(np.max(-sd0[outside] / grow[outside]))
    shrinking = ~outside & (sd1 < 0.0)
    if shrinking.any():
        leave = float(np.min(sd0[shrinking] / (sd0[shrinking] - sd1[shrinking])))
    if enter <= leave and enter <= 1.0:
        return enter
    return None
