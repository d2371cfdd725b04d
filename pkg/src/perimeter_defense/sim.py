"""Fixed-step simulation of defenders on the perimeter against exterior intruders.

Every step computes all controls from the same pre-step state, advances
everyone by explicit Euler, then adjudicates boundary contact and capture.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .engagement1v1 import (
    BreachPoints,
    breaching_points,
    check_speed_ratio,
    defender_control_1v1,
    is_afferent_side,
    singular_distance,
    solo_from_breach,
)
from .engagement2v1 import defender_control_2v1, evaluate_duo, intruder_control_2v1
from .geometry import PerimeterCurve, closest_point, is_exterior, segment_entry
from .team import (
    Assignment,
    CapacityError,
    GreedyIntruderState,
    build_engagement_graph,
    intruder_team_greedy,
    lgr_bounds,
    lgr_defense_assignment,
    mis_assignment,
    mm_assignment,
)

log = logging.getLogger(__name__)

DEFENDER_POLICIES = ("mm", "mis", "lgr", "solo-optimal", "pair-optimal", "stationary",
                     "cw", "ccw", "random", "scripted")
INTRUDER_POLICIES = ("greedy-team", "solo-optimal", "closest-point", "tangent-point",
                     "pair-optimal", "random-heading", "stationary", "scripted")
TEAM_POLICIES = ("mm", "mis", "lgr")
PRETEND_NU = {"closest-point": 0.01, "tangent-point": 1.0}

ALIVE, BREACH, CAPTURE = "ALIVE", "BREACH", "CAPTURE"


class ControlBoundError(ValueError):
    pass


@dataclass
class SimConfig:
    """Scenario for one run. Unset numeric fields scale with the perimeter length L."""

    perimeter: PerimeterCurve
    nu: float
    defenders: Sequence[float]
    intruders: Sequence[Sequence[float]]
    defender_policy: str = "mm"
    intruder_policy: str = "greedy-team"
    dt: float | None = None
    t_max: float | None = None
    capture_eps: float | None = None
    reassign_period: int = 10
    seed: int = 0
    hysteresis: float | None = None
    dwin_margin: float | None = None
    record_every: int = 1
    defender_script: Callable | None = None
    intruder_script: Callable | None = None

    def resolved(self) -> dict:
        L = self.perimeter.total_length
        return {
            "dt": self.dt if self.dt is not None else 1e-3 * L,
            "t_max": self.t_max if self.t_max is not None else 3.0 * L,
            "capture_eps": self.capture_eps if self.capture_eps is not None else 1e-3 * L,
            "hysteresis": self.hysteresis if self.hysteresis is not None else 1e-3 * L,
            "dwin_margin": self.dwin_margin if self.dwin_margin is not None else 0.0,
        }

    def validate(self) -> None:
        check_speed_ratio(self.nu)
        r = self.resolved()
        if r["dt"] <= 0:
            raise ValueError("dt must be positive")
        if r["capture_eps"] <= 0:
            raise ValueError("capture_eps must be positive")
        if r["t_max"] < 0:
            raise ValueError("t_max must be non-negative")
        if self.reassign_period < 1:
            raise ValueError("reassign_period must be at least 1")
        if self.defender_policy not in DEFENDER_POLICIES:
            raise ValueError(f"unknown defender policy {self.defender_policy!r}")
        if self.intruder_policy not in INTRUDER_POLICIES:
            raise ValueError(f"unknown intruder policy {self.intruder_policy!r}")
        if self.defender_policy == "scripted" and self.defender_script is None:
            raise ValueError("scripted defender policy needs defender_script")
        if self.intruder_policy == "scripted" and self.intruder_script is None:
            raise ValueError("scripted intruder policy needs intruder_script")
        L = self.perimeter.total_length
        for i, s in enumerate(self.defenders):
            if not (0.0 <= s < L):
                raise ValueError(f"defenders[{i}]: arc position must lie in [0, L)")
        for k, x in enumerate(self.intruders):
            if not is_exterior(self.perimeter, x):
                raise ValueError(f"intruders[{k}]: initial position must be exterior")
        if self.defender_policy == "pair-optimal" and len(self.defenders) < 2:
            raise ValueError("pair-optimal defense needs two defenders")
        if self.intruder_policy == "pair-optimal" and len(self.defenders) < 2:
            raise ValueError("pair-optimal intrusion needs two defenders")


@dataclass
class SimState:
    t: float
    s_D: np.ndarray
    x_A: np.ndarray
    status: list

    def copy(self) -> "SimState":
        return SimState(self.t, self.s_D.copy(), self.x_A.copy(), list(self.status))

    def alive(self) -> list[int]:
        return [k for k, st in enumerate(self.status) if st == ALIVE]


@dataclass
class Event:
    kind: str
    t: float
    intruder: int | None = None
    defenders: tuple = ()
    s_B: float | None = None
    safe_distance: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "t": self.t}
        if self.intruder is not None:
            d["intruder"] = self.intruder
        if self.defenders:
            d["defenders"] = list(self.defenders)
        if self.s_B is not None:
            d["s_B"] = self.s_B
        if self.safe_distance is not None:
            d["safe_distance"] = self.safe_distance
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class SimTrace:
    records: list = field(default_factory=list)
    events: list = field(default_factory=list)
    status: list = field(default_factory=list)
    t_final: float = 0.0
    bounds: dict | None = None
    params: dict = field(default_factory=dict)

    @property
    def Q(self) -> int:
        return sum(1 for e in self.events if e.kind == BREACH)

    def first(self, kind: str, intruder: int | None = None) -> Event | None:
        for e in self.events:
            if e.kind == kind and (intruder is None or e.intruder == intruder):
                return e
        return None

    def values(self, defender: int, intruder: int) -> np.ndarray:
        """Recorded 1v1 values of an engaged (defender, intruder) pair."""
        key = f"D{defender}-A{intruder}"
        return np.array([r["V"][key] for r in self.records if key in r["V"]])

    def summary(self) -> dict:
        return {
            "Q": self.Q,
            "t_final": self.t_final,
            "status": list(self.status),
            "events": [e.to_dict() for e in self.events],
            "bounds": self.bounds,
            "params": self.params,
        }


def step(c: PerimeterCurve, state: SimState, omega: np.ndarray, u: np.ndarray, dt: float,
         nu: float) -> tuple[SimState, dict]:
    """Advance one explicit Euler step.

    Returns the new state and, for each intruder that touched the boundary
    during the step, the step fraction at contact. Touching intruders are
    placed on the boundary point where they made contact.
    """
    omega = np.asarray(omega, dtype=float)
    u = np.asarray(u, dtype=float).reshape(-1, 2)
    if omega.size and np.max(np.abs(omega)) > 1.0 + 1e-12:
        raise ControlBoundError("defender control exceeds unit speed")
    if u.size and np.max(np.hypot(u[:, 0], u[:, 1])) > nu * (1.0 + 1e-9):
        raise ControlBoundError("intruder control exceeds speed ratio nu")
    new = state.copy()
    new.t = state.t + dt
    new.s_D = np.mod(state.s_D + omega * dt, c.total_length)
    contact = {}
    for k in state.alive():
        x0 = state.x_A[k]
        x1 = x0 + u[k] * dt
        f = segment_entry(c, x0, x1)
        if f is None and not is_exterior(c, x1):
            f = 1.0
        if f is not None:
            s_B, p, _ = closest_point(c, x0 + f * (x1 - x0))
            contact[k] = (f, s_B)
            x1 = p
        new.x_A[k] = x1
    return new, contact


def _min_arc(c: PerimeterCurve, s_B: float, s_D: np.ndarray) -> tuple[float, int]:
    d = np.mod(s_D - s_B, c.total_length)
    d = np.minimum(d, c.total_length - d)
    i = int(np.argmin(d))
    return float(d[i]), i


def adjudicate(c: PerimeterCurve, before: SimState, after: SimState, omega: np.ndarray,
               contact: dict, dt: float, eps: float) -> list[Event]:
    """Boundary contact and proximity events after a step.

    Contact within ``eps`` of a defender (positions interpolated to the
    contact time) is a capture; otherwise it is a breach whose safe
    distance is the arc distance to the nearest defender.
    """
    events = []
    t0 = before.t
    for k in before.alive():
        if k in contact:
            f, s_B = contact[k]
            s_sub = np.mod(before.s_D + f * dt * np.asarray(omega), c.total_length)
            if len(s_sub) == 0:
                events.append(Event(BREACH, t0 + f * dt, k, (), s_B, math.inf))
                continue
            d, i = _min_arc(c, s_B, s_sub)
            if d <= eps:
                close = tuple(int(m) for m in np.flatnonzero(
                    np.minimum(np.mod(s_sub - s_B, c.total_length),
                               np.mod(s_B - s_sub, c.total_length)) <= eps))
                events.append(Event(CAPTURE, t0 + f * dt, k, close, s_B, None, "boundary"))
            else:
                events.append(Event(BREACH, t0 + f * dt, k, (i,), s_B, d))
            continue
        x = after.x_A[k]
        if len(after.s_D):
            pts = c.points_at(after.s_D)
            dist = np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1])
            close = np.flatnonzero(dist <= eps)
            if close.size:
                events.append(Event(CAPTURE, after.t, k, tuple(int(m) for m in close), None, None, "proximity"))
    return events


def _afferent_capture(c: PerimeterCurve, s_D: float, bp: BreachPoints, eps: float, dt: float,
                      prev_e: float | None) -> tuple[bool, float, float]:
    ev = solo_from_breach(c, s_D, bp)
    e = ev.J_L_star - ev.J_R_star
    if ev.value > 0 or not is_afferent_side(c, s_D, bp.x):
        return False, e, ev.value
    if singular_distance(ev) <= eps:
        return True, e, ev.value
    if prev_e is not None and (e == 0 or np.sign(e) != np.sign(prev_e)) and abs(e - prev_e) <= 4 * dt + 1e-12:
        return True, e, ev.value
    return False, e, ev.value


class _Runner:
    def __init__(self, cfg: SimConfig):
        cfg.validate()
        self.cfg = cfg
        self.c = cfg.perimeter
        self.p = cfg.resolved()
        self.nu = float(cfg.nu)
        self.rng = np.random.default_rng(cfg.seed)
        self.greedy = GreedyIntruderState()
        self.assignment: Assignment | None = None
        self.prev_omega = np.zeros(len(cfg.defenders), dtype=int)
        self.prev_e: dict = {}

    # --- engagement bookkeeping -------------------------------------------------

    def _assign(self, state: SimState, bps: dict) -> list:
        cfg, c = self.cfg, self.c
        alive = state.alive()
        pol = cfg.defender_policy
        n_def = len(state.s_D)
        if not alive or n_def == 0:
            return Assignment()
        if pol in TEAM_POLICIES:
            xs = [state.x_A[k] for k in alive]
            g = build_engagement_graph(c, list(state.s_D), xs, self.nu, with_pairs=pol != "mm")
            prev = None
            if self.assignment is not None:
                back = {k: m for m, k in enumerate(alive)}
                prev = Assignment(tuple((n, back[k]) for n, k in self.assignment.edges if k in back))
            if pol == "mm":
                a, _ = mm_assignment(c, None, xs, self.nu, g, prev)
            elif pol == "mis":
                a, _ = mis_assignment(c, None, xs, self.nu, g, prev)
            else:
                a = lgr_defense_assignment(c, list(state.s_D), xs, self.nu, g)
            a = Assignment(tuple((n, alive[k]) for n, k in a.edges),
                           tuple((n, alive[k]) for n, k in a.secondary))
            return a
        if pol == "pair-optimal":
            return Assignment((((0, 1), alive[0]),))
        # one defender per intruder: its namesake if alive, else the one it beats most easily
        edges = []
        for i in range(n_def):
            if i < len(state.status) and state.status[i] == ALIVE:
                k = i
            else:
                k = min(alive, key=lambda m: solo_from_breach(c, state.s_D[i], bps[m]).value)
            edges.append(((i,), k))
        return Assignment(tuple(edges))

    def _engaged(self) -> list:
        a = self.assignment
        return [] if a is None else list(a.edges) + list(a.secondary)

    # --- controls ------------------------------------------------------------------

    def _defender_controls(self, state: SimState, bps: dict) -> np.ndarray:
        cfg, c = self.cfg, self.c
        n_def = len(state.s_D)
        omega = np.zeros(n_def)
        pol = cfg.defender_policy
        if pol == "stationary" or n_def == 0:
            return omega
        if pol == "cw":
            return -np.ones(n_def)
        if pol == "ccw":
            return np.ones(n_def)
        if pol == "random":
            return self.rng.uniform(-1.0, 1.0, n_def)
        if pol == "scripted":
            return np.clip(np.asarray(cfg.defender_script(state.t, state), dtype=float), -1.0, 1.0)
        h = self.p["hysteresis"]
        for node, k in self._engaged():
            if k not in bps:
                continue
            bp = bps[k]
            if len(node) == 1:
                i = node[0]
                prev = int(self.prev_omega[i]) or None
                ev = solo_from_breach(c, state.s_D[i], bp)
                omega[i] = defender_control_1v1(c, state.s_D[i], bp.x, self.nu, ev, h, prev)
            else:
                i, j = node
                prev = (int(self.prev_omega[i]) or None, int(self.prev_omega[j]) or None)
                prev = prev if all(prev) else None
                omega[i], omega[j] = defender_control_2v1(
                    c, state.s_D[i], state.s_D[j], bp.x, self.nu, bp,
                    dwin_margin=self.p["dwin_margin"], hysteresis=h, previous=prev)
        return omega

    def _intruder_controls(self, state: SimState, bps: dict) -> np.ndarray:
        cfg, c, nu = self.cfg, self.c, self.nu
        u = np.zeros_like(state.x_A)
        alive = state.alive()
        pol = cfg.intruder_policy
        if not alive or pol == "stationary":
            return u
        if pol == "scripted":
            v = np.asarray(cfg.intruder_script(state.t, state), dtype=float).reshape(-1, 2)
            norm = np.hypot(v[:, 0], v[:, 1])
            scale = np.where(norm > nu, nu / np.maximum(norm, 1e-300), 1.0)
            return v * scale[:, None]
        if pol == "random-heading":
            th = self.rng.uniform(0.0, 2 * math.pi, len(alive))
            u[alive] = nu * np.column_stack((np.cos(th), np.sin(th)))
            return u
        s_D = list(state.s_D)
        if pol == "greedy-team":
            ctl = intruder_team_greedy(c, s_D, [state.x_A[k] for k in alive], nu, self.greedy,
                                       [bps[k] for k in alive], alive)
            u[alive] = ctl
            return u
        if pol == "pair-optimal":
            for k in alive:
                ev = evaluate_duo(c, s_D[0], s_D[1], None, nu, bps[k])
                u[k] = intruder_control_2v1(c, s_D[0], s_D[1], bps[k].x, nu, ev)
            return u
        # solo variants play the 1v1 game against the most threatening defender
        for k in alive:
            if not s_D:
                _, p, d = closest_point(c, state.x_A[k])
                u[k] = nu * (p - state.x_A[k]) / d
                continue
            bp = bps[k]
            if pol in PRETEND_NU:
                bp = breaching_points(c, bp.x, PRETEND_NU[pol])
            evs = [solo_from_breach(c, s, bp) for s in s_D]
            ev = min(evs, key=lambda e: e.value)
            d = (bp.point_L if ev.is_left else bp.point_R) - bp.x
            u[k] = nu * d / math.hypot(d[0], d[1])
        return u

    # --- main loop -------------------------------------------------------------------

    def run(self) -> SimTrace:
        cfg, c = self.cfg, self.c
        dt, eps = self.p["dt"], self.p["capture_eps"]
        n_int = len(cfg.intruders)
        state = SimState(0.0, np.asarray(cfg.defenders, dtype=float).copy(),
                         np.asarray(cfg.intruders, dtype=float).reshape(-1, 2).copy(), [ALIVE] * n_int)
        trace = SimTrace(params={**self.p, "nu": self.nu, "seed": cfg.seed,
                                 "defender_policy": cfg.defender_policy,
                                 "intruder_policy": cfg.intruder_policy,
                                 "reassign_period": cfg.reassign_period})
        if cfg.defender_policy in TEAM_POLICIES and n_int and len(cfg.defenders):
            try:
                trace.bounds = lgr_bounds(c, list(state.s_D), list(state.x_A), self.nu).to_dict()
            except CapacityError as exc:
                log.warning("score bounds skipped: %s", exc)
        n_steps = int(math.ceil(self.p["t_max"] / dt - 1e-9))
        for it in range(n_steps + 1):
            alive = state.alive()
            if not alive:
                break
            bps = {k: breaching_points(c, state.x_A[k], self.nu) for k in alive}
            if it % cfg.reassign_period == 0 or self.assignment is None:
                new = self._assign(state, bps)
                if self.assignment is None or set(new.edges) != set(self.assignment.edges):
                    trace.events.append(Event("REASSIGN", state.t, detail=json.dumps(new.to_dict())))
                self.assignment = new
            # afferent capture: the intruder sits on (or just crossed) an engaged
            # defender's afferent singular surface while that defender wins
            values = {}
            for node, k in self._engaged():
                if state.status[k] != ALIVE:
                    continue
                for i in node:
                    hit, e, v = _afferent_capture(c, state.s_D[i], bps[k], eps, dt, self.prev_e.get((i, k)))
                    self.prev_e[(i, k)] = e
                    values[f"D{i}-A{k}"] = v
                    if hit:
                        state.status[k] = CAPTURE
                        trace.events.append(Event(CAPTURE, state.t, k, (i,), None, None, "afferent"))
                        break
                if len(node) == 2 and state.status[k] == ALIVE:
                    values[f"D{node[0]}D{node[1]}-A{k}"] = evaluate_duo(
                        c, state.s_D[node[0]], state.s_D[node[1]], None, self.nu, bps[k]).value
            if not state.alive() or it == n_steps:
                break
            omega = self._defender_controls(state, bps)
            u = self._intruder_controls(state, bps)
            if it % cfg.record_every == 0:
                trace.records.append({
                    "t": state.t, "s_D": state.s_D.tolist(),
                    "x_A": [state.x_A[k].tolist() if state.status[k] == ALIVE else None for k in range(n_int)],
                    "omega": omega.tolist(), "u_A": u.tolist(), "V": values,
                    "assign": [[list(node), k] for node, k in self._engaged()],
                })
            new, contact = step(c, state, omega, u, dt, self.nu)
            evs = adjudicate(c, state, new, omega, contact, dt, eps)
            for e in evs:
                new.status[e.intruder] = e.kind
            trace.events.extend(evs)
            self.prev_omega = np.sign(omega).astype(int)
            state = new
        trace.status = list(state.status)
        trace.t_final = state.t
        return trace


def run(config: SimConfig) -> SimTrace:
    """Simulate until every intruder is resolved or t_max elapses."""
    return _Runner(config).run()


__all__ = [
    "ALIVE", "BREACH", "CAPTURE", "ControlBoundError", "DEFENDER_POLICIES", "Event",
    "INTRUDER_POLICIES", "SimConfig", "SimState", "SimTrace", "adjudicate", "run", "step",
]
