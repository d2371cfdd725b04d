"""Two defenders against one intruder.

A defender pair splits the game space in two; within the part that holds
the intruder, the cw-side defender D_i and ccw-side defender D_j guard the
arc [s_Di, s_Dj]. The intruder plays the 1v1 game against whichever
defender is active, or aims at the arc midpoint when neither alone is.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engagement1v1 import (
    SINGULAR_TOL,
    BreachPoints,
    Region,
    SoloEvaluation,
    breaching_points,
    defender_control_1v1,
    solo_from_breach,
)
from .geometry import PerimeterCurve, arc_distance_ccw


class DuoRegion(str, enum.Enum):
    R_I = "R_I"
    R_J = "R_J"
    R_MID = "R_MID"


def is_degenerate_pair(c: PerimeterCurve, s_D1: float, s_D2: float) -> bool:
    d = arc_distance_ccw(c, s_D1, s_D2)
    return min(d, c.total_length - d) <= c.eps


@dataclass(frozen=True)
class DuoEvaluation:
    """Ordered-pair evaluation. ``order`` maps (i_cw, j_ccw) to input slots 0/1."""

    order: tuple[int, int]
    s_Di: float
    s_Dj: float
    s_mid: float
    region: DuoRegion
    s_opt: float
    value: float
    c_radius: float
    J_mid: float
    breach: BreachPoints
    degenerate: bool = False

    @property
    def i_cw(self) -> int:
        return self.order[0]

    @property
    def j_ccw(self) -> int:
        return self.order[1]

    def to_dict(self) -> dict:
        return {
            "i_cw": self.i_cw, "j_ccw": self.j_ccw,
            "s_Di": float(self.s_Di), "s_Dj": float(self.s_Dj), "s_mid": float(self.s_mid),
            "region": self.region.value, "s_opt": float(self.s_opt), "value": float(self.value),
            "c_radius": float(self.c_radius), "J_mid": float(self.J_mid),
            "degenerate": self.degenerate,
        }


def relevant_region(c: PerimeterCurve, s_D1: float, s_D2: float, x: Sequence[float], nu: float,
                    bp: BreachPoints | None = None) -> bool:
    """True when the intruder sits on the [s_D1 -> s_D2] ccw side of the pair."""
    if is_degenerate_pair(c, s_D1, s_D2):
        raise ValueError("degenerate defender pair (coincident positions)")
    bp = bp or breaching_points(c, x, nu)
    left1 = solo_from_breach(c, s_D1, bp).is_left
    left2 = solo_from_breach(c, s_D2, bp).is_left
    if arc_distance_ccw(c, s_D1, s_D2) < 0.5 * c.total_length:
        return left1 and not left2
    return left1 or not left2


def evaluate_duo_ordered(c: PerimeterCurve, s_Di: float, s_Dj: float, bp: BreachPoints,
                         order: tuple[int, int] = (0, 1)) -> DuoEvaluation:
    """Evaluate with D_i (cw side) and D_j (ccw side) already fixed."""
    s_Di, s_Dj = c.reduce(s_Di), c.reduce(s_Dj)
    nu = bp.nu
    half = 0.5 * arc_distance_ccw(c, s_Di, s_Dj)
    s_mid = c.reduce(s_Di + half)
    p_mid = c.point_at(s_mid)
    J_mid = half - math.hypot(p_mid[0] - bp.x[0], p_mid[1] - bp.x[1]) / nu
    if arc_distance_ccw(c, s_Di, bp.s_L) < half:
        region, s_opt = DuoRegion.R_I, bp.s_L
        value = arc_distance_ccw(c, s_Di, bp.s_L) - bp.dist_L / nu
    elif arc_distance_ccw(c, bp.s_R, s_Dj) < half:
        region, s_opt = DuoRegion.R_J, bp.s_R
        value = arc_distance_ccw(c, bp.s_R, s_Dj) - bp.dist_R / nu
    else:
        region, s_opt, value = DuoRegion.R_MID, s_mid, J_mid
    return DuoEvaluation(order, s_Di, s_Dj, s_mid, region, s_opt, value, nu * half, J_mid, bp)


def _degenerate(c: PerimeterCurve, s_D: float, bp: BreachPoints) -> DuoEvaluation:
    ev = solo_from_breach(c, s_D, bp)
    if ev.is_left:
        region, s_opt = DuoRegion.R_I, ev.s_L
    else:
        region, s_opt = DuoRegion.R_J, ev.s_R
    half = 0.5 * c.total_length
    p_op = c.point_at(ev.s_D_op)
    J_mid = half - math.hypot(p_op[0] - bp.x[0], p_op[1] - bp.x[1]) / bp.nu
    return DuoEvaluation((0, 1), ev.s_D, ev.s_D, ev.s_D_op, region, s_opt, ev.value,
                         bp.nu * half, J_mid, bp, degenerate=True)


def evaluate_duo(c: PerimeterCurve, s_D1: float, s_D2: float, x: Sequence[float], nu: float,
                 bp: BreachPoints | None = None) -> DuoEvaluation:
    """Order the pair by the relevant region, then evaluate.

    A coincident pair reduces to the 1v1 game against that defender.
    """
    bp = bp or breaching_points(c, x, nu)
    if is_degenerate_pair(c, s_D1, s_D2):
        return _degenerate(c, s_D1, bp)
    if relevant_region(c, s_D1, s_D2, x, nu, bp):
        return evaluate_duo_ordered(c, s_D1, s_D2, bp, (0, 1))
    return evaluate_duo_ordered(c, s_D2, s_D1, bp, (1, 0))


def duo_beta(c: PerimeterCurve, ev: DuoEvaluation) -> float:
    """cos(phi(s_mid)) / nu; strictly inside (-1, 1) on R_MID."""
    bp = ev.breach
    d = c.point_at(ev.s_mid) - bp.x
    return float(np.dot(d, c.tangent_at(ev.s_mid)[1]) / np.hypot(*d) / bp.nu)


def intruder_control_2v1(c: PerimeterCurve, s_D1: float, s_D2: float, x: Sequence[float], nu: float,
                         ev: DuoEvaluation | None = None) -> np.ndarray:
    """Full speed toward the optimal breaching point of the pair game."""
    ev = ev or evaluate_duo(c, s_D1, s_D2, x, nu)
    bp = ev.breach
    if ev.region is DuoRegion.R_I:
        return nu * bp.dir_L
    if ev.region is DuoRegion.R_J:
        return nu * bp.dir_R
    d = c.point_at(ev.s_mid) - bp.x
    return nu * d / np.hypot(*d)


def defender_control_2v1(c: PerimeterCurve, s_D1: float, s_D2: float, x: Sequence[float], nu: float,
                         bp: BreachPoints | None = None, dwin_margin: float = 0.0,
                         hysteresis: float = 0.0,
                         previous: tuple[int, int] | None = None) -> tuple[int, int]:
    """Defender commands (omega_D1, omega_D2) in input order.

    If one defender alone wins, it plays its 1v1 control and the other
    holds. Otherwise the pair closes in from both sides (pincer). A
    positive ``dwin_margin`` requires ``V <= -dwin_margin`` before a lone
    defender takes over, which keeps the pincer engaged in the thin band
    where a discrete-time solo defense would be marginal.
    """
    bp = bp or breaching_points(c, x, nu)
    if is_degenerate_pair(c, s_D1, s_D2):
        prev = previous[0] if previous else None
        w = defender_control_1v1(c, s_D1, x, nu, solo_from_breach(c, s_D1, bp), hysteresis, prev)
        return w, 0
    ev1 = solo_from_breach(c, s_D1, bp)
    if ev1.value < -dwin_margin:
        prev = previous[0] if previous else None
        return defender_control_1v1(c, s_D1, x, nu, ev1, hysteresis, prev), 0
    ev2 = solo_from_breach(c, s_D2, bp)
    if ev2.value < -dwin_margin:
        prev = previous[1] if previous else None
        return 0, defender_control_1v1(c, s_D2, x, nu, ev2, hysteresis, prev)
    if relevant_region(c, s_D1, s_D2, x, nu, bp):
        return 1, -1
    return -1, 1


@dataclass(frozen=True)
class DuoRegionReport:
    in_A_C: bool
    in_A_I: bool
    in_R_pair: bool
    value_pair: float
    value_1: float
    value_2: float

    def to_dict(self) -> dict:
        return {
            "in_A_C": self.in_A_C, "in_A_I": self.in_A_I, "in_R_pair": self.in_R_pair,
            "V_ij": float(self.value_pair), "V_1": float(self.value_1), "V_2": float(self.value_2),
        }


def duo_region_report(c: PerimeterCurve, s_D1: float, s_D2: float, x: Sequence[float], nu: float,
                      bp: BreachPoints | None = None) -> DuoRegionReport:
    """Pair-level and independent winning flags plus the paired-defense flag."""
    bp = bp or breaching_points(c, x, nu)
    tol = SINGULAR_TOL * c.total_length
    ev = evaluate_duo(c, s_D1, s_D2, bp.x, nu, bp)
    v1 = solo_from_breach(c, s_D1, bp).value
    v2 = solo_from_breach(c, s_D2, bp).value
    in_A_C = ev.value > tol
    in_A_I = v1 > 0 and v2 > 0
    return DuoRegionReport(in_A_C, in_A_I, in_A_I and not in_A_C, ev.value, v1, v2)


__all__ = [
    "DuoEvaluation", "DuoRegion", "DuoRegionReport", "Region", "SoloEvaluation",
    "defender_control_2v1", "duo_beta", "duo_region_report", "evaluate_duo",
    "evaluate_duo_ordered", "intruder_control_2v1", "is_degenerate_pair", "relevant_region",
]
