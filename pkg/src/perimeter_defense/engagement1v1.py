"""One defender against one intruder.

The intruder's two candidate breaching points depend only on its own
position and the speed ratio; the defender position enters through arc
distances alone. :func:`breaching_points` therefore does the geometric
work once and :func:`solo_from_breach` turns it into payoffs, region and
value for any defender position.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import (
    GeometryError,
    PerimeterCurve,
    TangentFan,
    arc_distance_ccw,
    closest_point,
    visible_edges,
)

SINGULAR_TOL = 1e-9  # relative to L


def check_speed_ratio(nu: float) -> float:
    nu = float(nu)
    if not (0.0 < nu <= 1.0):
        raise ValueError(f"nu must lie in (0,1], got {nu}")
    return nu


class Region(str, enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"
    SINGULAR = "SINGULAR"


@dataclass(frozen=True)
class BreachPoints:
    """Left/right breaching points of an intruder at ``x``."""

    x: np.ndarray
    nu: float
    s_L: float
    s_R: float
    point_L: np.ndarray
    point_R: np.ndarray
    dist_L: float
    dist_R: float
    fan: TangentFan

    @property
    def dir_L(self) -> np.ndarray:
        return (self.point_L - self.x) / self.dist_L

    @property
    def dir_R(self) -> np.ndarray:
        return (self.point_R - self.x) / self.dist_R


def _solve_on_fan(c: PerimeterCurve, x: np.ndarray, k0: int, m: int,
                  targets: Sequence[float]) -> list[float]:
    # cos(phi) along the visible edges is non-decreasing ccw: continuous along
    # each edge, jumping up at vertices. The fan ends are clamped to -1 / +1.
    vidx = k0 + np.arange(m + 1)
    vidx[vidx >= c.n] -= c.n
    rel = c.vertices[vidx] - x
    unit = rel / np.hypot(rel[:, 0], rel[:, 1])[:, None]
    tan = c.tangents[vidx[:-1]]
    along = np.einsum("ij,ij->i", rel[:-1], tan)
    seq = np.empty(2 * m + 2)
    seq[0], seq[-1] = -1.0, 1.0
    seq[1:-1:2] = np.einsum("ij,ij->i", unit[:-1], tan)
    seq[2:-1:2] = np.einsum("ij,ij->i", unit[1:], tan)
    np.maximum.accumulate(seq, out=seq)
    out = []
    for target, j in zip(targets, np.searchsorted(seq, targets, side="left")):
        j = int(j)
        if j == 0:
            out.append(float(c.cum_length[k0]))
        elif j == 2 * m + 1:
            out.append(float(c.cum_length[vidx[-1]]))
        elif j % 2 == 1:  # jump at the vertex opening edge k
            out.append(float(c.cum_length[vidx[(j - 1) // 2]]))
        else:
            k = (j - 1) // 2
            e = int(vidx[k])
            h = abs(rel[k, 0] * tan[k, 1] - rel[k, 1] * tan[k, 0])
            t = target * h / math.sqrt(1.0 - target * target) - along[k]
            t = min(max(t, 0.0), float(c.edge_length[e]))
            out.append(float(c.reduce(float(c.cum_length[e]) + t)))
    return out


def breaching_points(c: PerimeterCurve, x: Sequence[float], nu: float) -> BreachPoints:
    """Left and right breaching points for an intruder at ``x``.

    The left point satisfies ``cos(phi) = nu`` on a smooth part of the
    visible segment, or brackets it between the one-sided angles at a
    vertex; the right point does the same for ``cos(phi) = -nu``. With
    ``nu == 1`` they are the tangent points.
    """
    nu = check_speed_ratio(nu)
    x = np.asarray(x, dtype=float)
    k0, m = visible_edges(c, x)
    fan = TangentFan(float(c.cum_length[k0]), float(c.cum_length[(k0 + m) % c.n]), k0, m)
    if nu == 1.0:
        s_L, s_R = fan.s_tan_L, fan.s_tan_R
    else:
        s_L, s_R = _solve_on_fan(c, x, k0, m, (nu, -nu))
    p_L, p_R = c.point_at(s_L), c.point_at(s_R)
    d_L = math.hypot(p_L[0] - x[0], p_L[1] - x[1])
    d_R = math.hypot(p_R[0] - x[0], p_R[1] - x[1])
    return BreachPoints(x, nu, s_L, s_R, p_L, p_R, d_L, d_R, fan)


def left_breaching_point(c: PerimeterCurve, x: Sequence[float], nu: float) -> float:
    return breaching_points(c, x, nu).s_L


def right_breaching_point(c: PerimeterCurve, x: Sequence[float], nu: float) -> float:
    return breaching_points(c, x, nu).s_R


def payoff_left(c: PerimeterCurve, s_B: float, s_D: float, x: Sequence[float], nu: float) -> float:
    """Arc-length lead of the intruder at ``s_B`` over a ccw-moving defender."""
    p = c.point_at(s_B)
    return arc_distance_ccw(c, s_D, s_B) - math.hypot(p[0] - x[0], p[1] - x[1]) / nu


def payoff_right(c: PerimeterCurve, s_B: float, s_D: float, x: Sequence[float], nu: float) -> float:
    """Arc-length lead of the intruder at ``s_B`` over a cw-moving defender."""
    p = c.point_at(s_B)
    return arc_distance_ccw(c, s_B, s_D) - math.hypot(p[0] - x[0], p[1] - x[1]) / nu


@dataclass(frozen=True)
class SoloEvaluation:
    s_D: float
    s_D_op: float
    s_L: float
    s_R: float
    J_L_star: float
    J_R_star: float
    region: Region
    value: float
    breach: BreachPoints

    @property
    def is_left(self) -> bool:
        return self.region is Region.LEFT

    @property
    def intruder_wins(self) -> bool:
        return self.value > 0.0

    @property
    def target_point(self) -> np.ndarray:
        """Boundary point the optimal intruder heads for (singular counts as right)."""
        return self.breach.point_L if self.is_left else self.breach.point_R

    def to_dict(self) -> dict:
        return {
            "s_D": float(self.s_D), "s_D_op": float(self.s_D_op),
            "s_L": float(self.s_L), "s_R": float(self.s_R),
            "J_L_star": float(self.J_L_star), "J_R_star": float(self.J_R_star),
            "region": self.region.value, "value": float(self.value),
        }


def solo_from_breach(c: PerimeterCurve, s_D: float, bp: BreachPoints) -> SoloEvaluation:
    s_D = c.reduce(s_D)
    L = c.total_length
    half = 0.5 * L
    d_DL = arc_distance_ccw(c, s_D, bp.s_L)
    d_RD = arc_distance_ccw(c, bp.s_R, s_D)
    J_L = d_DL - bp.dist_L / bp.nu
    J_R = d_RD - bp.dist_R / bp.nu
    tol = c.eps
    l_in = d_DL <= half + tol
    r_in = d_RD <= half + tol
    if abs(J_L - J_R) <= SINGULAR_TOL * L:
        region = Region.SINGULAR
    elif (l_in and r_in and J_L > J_R) or (l_in and not r_in) or (not l_in and not r_in and J_L < J_R):
        region = Region.LEFT
    else:
        region = Region.RIGHT
    value = J_L if region is Region.LEFT else J_R
    return SoloEvaluation(s_D, c.reduce(s_D + half), bp.s_L, bp.s_R, J_L, J_R, region, value, bp)


def evaluate_solo(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float) -> SoloEvaluation:
    """Breaching points, payoffs, region and value of the 1v1 game."""
    return solo_from_breach(c, s_D, breaching_points(c, x, nu))


def intruder_control_1v1(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float,
                         ev: SoloEvaluation | None = None) -> np.ndarray:
    """Optimal intruder velocity: full speed toward the active breaching point."""
    ev = ev or evaluate_solo(c, s_D, x, nu)
    bp = ev.breach
    return nu * (bp.dir_L if ev.is_left else bp.dir_R)


def defender_control_1v1(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float,
                         ev: SoloEvaluation | None = None, hysteresis: float = 0.0,
                         previous: int | None = None) -> int:
    """Optimal defender direction: +1 (ccw) in the left region, -1 otherwise.

    With ``hysteresis > 0`` and a ``previous`` command, the direction only
    changes once ``|J_L* - J_R*|`` leaves the band.
    """
    ev = ev or evaluate_solo(c, s_D, x, nu)
    if previous is not None and previous != 0 and abs(ev.J_L_star - ev.J_R_star) <= hysteresis:
        return previous
    return 1 if ev.is_left else -1


def singular_distance(ev: SoloEvaluation) -> float:
    """First-order distance from the intruder to the surface ``J_L* = J_R*``.

    The gradients of J_L* and J_R* with respect to the intruder position are
    the unit approach directions over nu.
    """
    bp = ev.breach
    grad = np.hypot(*(bp.dir_L - bp.dir_R)) / bp.nu
    e = abs(ev.J_L_star - ev.J_R_star)
    if grad < 1e-12:
        return math.inf if e > 0 else 0.0
    return e / grad


def is_afferent_side(c: PerimeterCurve, s_D: float, x: Sequence[float]) -> bool:
    """True when ``x`` is nearer (in arc terms) to the defender than to its antipode.

    Separates the afferent branch of the singular surface (rooted at the
    defender) from the dispersal branch (rooted at the antipode).
    """
    s_near, _, _ = closest_point(c, x)
    d = arc_distance_ccw(c, s_D, s_near)
    return min(d, c.total_length - d) < 0.25 * c.total_length


def _branch_samples(c: PerimeterCurve, s_D: float, nu: float, side: int,
                    n_samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Unwound distance and approach angle along one barrier branch.

    ``side = +1`` sweeps ccw (left branch), ``-1`` cw (right branch). The
    approach angle is constant along an edge and rotates through the
    exterior angle at a vertex, so linear interpolation of both arrays
    between samples traces the branch exactly.
    """
    L = c.total_length
    phi = math.acos(nu) if side > 0 else math.pi - math.acos(nu)
    grid = np.linspace(0.0, L, n_samples, endpoint=False)
    if side > 0:
        vert = np.mod(c.cum_length - s_D, L)
    else:
        vert = np.mod(s_D - c.cum_length, L)
    vert = vert[vert > c.eps]
    d_all = np.union1d(grid, vert)
    s_all = np.mod(s_D + side * d_all, L)
    # edge along which the sweep is travelling at each sample
    k = np.clip(np.searchsorted(c.cum_length, s_all, side="right") - 1, 0, c.n - 1)
    if side < 0:
        at_vertex = np.abs(s_all - c.cum_length[k]) <= c.eps
        k = np.where(at_vertex, k - 1, k) % c.n
    base = np.arctan2(c.tangents[k, 1], c.tangents[k, 0])
    ang = base + phi
    d_out, a_out = [0.0], [ang[0]]
    is_vertex = np.isin(d_all, vert)
    dth = 2.0 * math.pi / n_samples
    for i in range(len(d_all)):
        if is_vertex[i]:
            # fan through the exterior angle before moving on; the branch is a
            # circular arc about the vertex there, so sample it
            if side > 0:
                k_in = (k[i] - 1) % c.n
            else:
                k_in = (k[i] + 1) % c.n
            a_in = math.atan2(c.tangents[k_in, 1], c.tangents[k_in, 0]) + phi
            turn = math.remainder(ang[i] - a_in, 2.0 * math.pi)
            m = max(1, int(math.ceil(abs(turn) / dth)))
            for t in np.arange(m) / m:
                d_out.append(d_all[i])
                a_out.append(a_in + t * turn)
        d_out.append(d_all[i])
        a_out.append(ang[i])
    d_out = np.asarray(d_out)
    a_out = np.unwrap(np.asarray(a_out))
    return d_out, a_out


def _branch_point(c: PerimeterCurve, s_D: float, nu: float, side: int, d: float, a: float) -> np.ndarray:
    p = c.point_at(s_D + side * d)
    return p - nu * d * np.array([math.cos(a), math.sin(a)])


def _on_branch(c: PerimeterCurve, s_D: float, nu: float, side: int, x: np.ndarray) -> bool:
    if np.min(c.signed_distances(x)) >= -10.0 * c.eps:
        return True
    ev = evaluate_solo(c, s_D, x, nu)
    return ev.region is not (Region.RIGHT if side > 0 else Region.LEFT)


def _trace_branch(c: PerimeterCurve, s_D: float, nu: float, side: int, n_samples: int) -> np.ndarray:
    d, a = _branch_samples(c, s_D, nu, side, n_samples)
    pts = np.array([_branch_point(c, s_D, nu, side, d[i], a[i]) for i in range(len(d))])

    def ok(i: int) -> bool:
        return _on_branch(c, s_D, nu, side, pts[i])

    # coarse scan for the first sample past the dispersal junction
    step = max(1, len(d) // 128)
    hi = None
    last_ok = 0
    for i in range(step, len(d), step):
        if ok(i):
            last_ok = i
        else:
            hi = i
            break
    if hi is None:
        return pts
    lo = last_ok
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    # continuous refinement inside the final interval
    t_lo, t_hi = 0.0, 1.0
    for _ in range(60):
        t = 0.5 * (t_lo + t_hi)
        x = _branch_point(c, s_D, nu, side, d[lo] + t * (d[hi] - d[lo]), a[lo] + t * (a[hi] - a[lo]))
        if _on_branch(c, s_D, nu, side, x):
            t_lo = t
        else:
            t_hi = t
    junction = _branch_point(c, s_D, nu, side, d[lo] + t_lo * (d[hi] - d[lo]), a[lo] + t_lo * (a[hi] - a[lo]))
    return np.vstack((pts[: lo + 1], junction))


def barrier_sample(c: PerimeterCurve, s_D: float, nu: float, n_samples: int = 1024) -> np.ndarray:
    """Closed polyline of the zero level set of the value.

    Built by unwinding each branch from the defender: a boundary point at
    unwound arc distance d pulls back along its optimal approach direction
    by ``nu * d``. The branches are cut where they cross the dispersal
    surface. Returns an (N, 2) array whose last row repeats the first.
    """
    nu = float(nu)
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    s_D = c.reduce(s_D)
    left = _trace_branch(c, s_D, nu, +1, n_samples)
    right = _trace_branch(c, s_D, nu, -1, n_samples)
    return np.vstack((left, right[::-1]))


def distance_to_barrier(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float) -> float:
    """Distance from a defender-winning state to the intruder-winning region."""
    ev = evaluate_solo(c, s_D, x, nu)
    if ev.value > SINGULAR_TOL * c.total_length:
        raise ValueError(f"state is intruder-winning (V={ev.value:.6g}); barrier distance undefined")
    return -nu * ev.value if ev.value < 0 else 0.0


def polyline_distance(poly: np.ndarray, x: Sequence[float]) -> float:
    """Minimum Euclidean distance from ``x`` to a polyline."""
    x = np.asarray(x, dtype=float)
    a, b = poly[:-1], poly[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom[denom == 0] = 1.0
    t = np.clip(np.einsum("ij,ij->i", x - a, ab) / denom, 0.0, 1.0)
    foot = a + t[:, None] * ab
    return float(np.min(np.hypot(foot[:, 0] - x[0], foot[:, 1] - x[1])))


__all__ = [
    "BreachPoints", "GeometryError", "Region", "SoloEvaluation", "barrier_sample",
    "breaching_points", "check_speed_ratio", "defender_control_1v1", "distance_to_barrier",
    "evaluate_solo", "intruder_control_1v1", "is_afferent_side", "left_breaching_point",
    "payoff_left", "payoff_right", "polyline_distance", "right_breaching_point",
    "singular_distance", "solo_from_breach",
]
