"""Independent checks on the analytic solution.

* closed-form value and strategies for a circular perimeter,
* the straight-line dominance test (sufficient, not necessary, for an
  intruder win),
* a discretized minimax value iteration over (defender arc, intruder
  position) that estimates the winner without using any of the
  breaching-point machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engagement1v1 import evaluate_solo
from .geometry import PerimeterCurve, circle, closest_point, outward_point, segment_entry, tangent_points


def _F(R: float, r: float, nu: float) -> float:
    q = (R + r) / (nu * R)
    return math.sqrt(max(q * q - 1.0, 0.0)) - math.acos(min(1.0, nu * R / (R + r)))


def circle_value(R: float, r: float, theta: float, nu: float) -> float:
    """Value of the 1v1 game on a circle of radius ``R``, in length units.

    ``r`` is the intruder's height above the circle and ``theta`` its polar
    angle measured ccw from the defender. For R = 1 this is the familiar
    ``|theta| - F(r) + F(0)``.
    """
    if not 0.0 < nu <= 1.0:
        raise ValueError("nu must lie in (0,1]")
    if r < 0:
        raise ValueError("r must be non-negative")
    th = math.remainder(theta, 2.0 * math.pi)
    return R * (abs(th) - _F(R, r, nu) + _F(R, 0.0, nu))


def circle_strategy(R: float, r: float, theta: float, nu: float) -> tuple[int, float]:
    """Closed-form (omega_D, psi_A) on a circle.

    ``psi_A`` is the intruder heading measured from the inward radial
    direction, positive toward the ccw side.
    """
    th = math.remainder(theta, 2.0 * math.pi)
    if th == 0.0:
        raise ValueError("theta = 0 is singular: both directions are optimal")
    sgn = 1 if th > 0 else -1
    return sgn, sgn * math.asin(nu * R / (R + r))


def circle_heading(R: float, r: float, theta_abs: float, psi: float) -> np.ndarray:
    """Unit heading vector for intruder at polar angle ``theta_abs`` (world frame)."""
    inward = -np.array([math.cos(theta_abs), math.sin(theta_abs)])
    e_theta = np.array([-math.sin(theta_abs), math.cos(theta_abs)])
    return math.cos(psi) * inward + math.sin(psi) * e_theta


def dominance_test(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float, grid_n: int = 512) -> bool:
    """True if some visible boundary point is reached by the intruder before
    the defender, whichever way the defender runs."""
    x = np.asarray(x, dtype=float)
    fan = tangent_points(c, x)
    L = c.total_length
    width = fan.width(c)
    s = np.mod(fan.s_tan_R + np.linspace(0.0, width, grid_n), L)
    pts = c.points_at(s)
    t_A = np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1]) / nu
    d = np.mod(s - s_D, L)
    t_D = np.minimum(d, L - d)
    return bool(np.any(t_D > t_A))


@dataclass(frozen=True)
class RolloutResult:
    intruder_wins: bool
    value: float
    truncated: bool


class MinimaxSolver:
    """Value iteration for the discretized game of (defender arc, intruder point).

    Time advances in steps of ``tau = L / n_s`` so that a unit-speed defender
    moves exactly one arc bin per step. The intruder moves ``nu * tau`` along
    one of ``branching`` headings or stays; positions off the grid are read
    by bilinear interpolation. Each step the intruder picks its heading and
    the defender answers. Reaching the boundary pays the arc distance from
    the defender to the contact point; running out of time pays zero.
    Grid nodes inside the perimeter carry the payoff of their nearest
    boundary point so that interpolation near the boundary stays sensible.
    """

    MAX_DEPTH = 200

    def __init__(self, c: PerimeterCurve, nu: float, depth: int = 120, branching: int = 16,
                 n_s: int = 48, grid_n: int = 81, margin: float | None = None):
        if not 0.0 < nu <= 1.0:
            raise ValueError("nu must lie in (0,1]")
        if branching < 3 or branching > 32:
            raise ValueError("branching must lie in [3, 32]")
        self.c, self.nu = c, float(nu)
        self.branching = int(branching)
        self.truncated_depth = depth > self.MAX_DEPTH
        self.depth = min(int(depth), self.MAX_DEPTH)
        self.n_s = int(n_s)
        L = c.total_length
        self.tau = L / self.n_s
        lo, hi = c.vertices.min(axis=0), c.vertices.max(axis=0)
        if margin is None:
            margin = 1.1 * float(np.max(hi - lo))
        self.lo = lo - margin
        self.hi = hi + margin
        self.gx = np.linspace(self.lo[0], self.hi[0], grid_n)
        self.gy = np.linspace(self.lo[1], self.hi[1], grid_n)
        X, Y = np.meshgrid(self.gx, self.gy, indexing="ij")
        self.nodes = np.column_stack((X.ravel(), Y.ravel()))
        self.grid_n = grid_n
        self.s_bins = np.arange(self.n_s) * self.tau
        self._prepare()
        self.W, self.converged = self._solve()

    # interpolation helpers ------------------------------------------------------

    def _bilinear(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.grid_n
        fx = (np.clip(pts[:, 0], self.lo[0], self.hi[0]) - self.lo[0]) / (self.hi[0] - self.lo[0]) * (n - 1)
        fy = (np.clip(pts[:, 1], self.lo[1], self.hi[1]) - self.lo[1]) / (self.hi[1] - self.lo[1]) * (n - 1)
        ix = np.minimum(fx.astype(int), n - 2)
        iy = np.minimum(fy.astype(int), n - 2)
        ax, ay = fx - ix, fy - iy
        idx = np.stack([ix * n + iy, (ix + 1) * n + iy, ix * n + iy + 1, (ix + 1) * n + iy + 1], axis=1)
        w = np.stack([(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay], axis=1)
        return idx, w

    def _arc(self, s_D: np.ndarray, s_B: np.ndarray) -> np.ndarray:
        L = self.c.total_length
        d = np.mod(s_D - s_B, L)
        return np.minimum(d, L - d)

    def _prepare(self) -> None:
        c = self.c
        n_nodes = len(self.nodes)
        near = np.empty(n_nodes)
        s_near = np.empty(n_nodes)
        inside = np.zeros(n_nodes, dtype=bool)
        for m, p in enumerate(self.nodes):
            s, _, d = closest_point(c, p)
            s_near[m], near[m] = s, d
            inside[m] = np.min(c.signed_distances(p)) >= -c.eps
        self.inside = inside
        self.interior_payoff = self._arc(self.s_bins[:, None], s_near[inside][None, :])
        step = self.nu * self.tau
        ang = 2 * math.pi * np.arange(self.branching) / self.branching
        dirs = [np.zeros(2)] + [step * np.array([math.cos(a), math.sin(a)]) for a in ang]
        self.moves = []
        outside = np.flatnonzero(~inside)
        band = outside[near[outside] <= step * (1 + 1e-9) + c.eps]
        hx = self.gx[1] - self.gx[0]
        hy = self.gy[1] - self.gy[0]
        for u in dirs:
            shift = self._shift_weights(u[0] / hx, u[1] / hy)
            cross_nodes, cross_f, cross_s = [], [], []
            if np.any(u):
                for m in band:
                    f = segment_entry(c, self.nodes[m], self.nodes[m] + u)
                    if f is not None:
                        s_B, _, _ = closest_point(c, self.nodes[m] + f * u)
                        cross_nodes.append(m)
                        cross_f.append(f)
                        cross_s.append(s_B)
            cross_nodes = np.asarray(cross_nodes, dtype=int)
            cross_f = np.asarray(cross_f)
            cross_s = np.asarray(cross_s)
            if cross_nodes.size:
                # payoff for defender action w: arc distance after moving f*w*tau
                pay = np.stack([
                    self._arc(self.s_bins[:, None] + wd * cross_f[None, :] * self.tau, cross_s[None, :])
                    for wd in (-1.0, 0.0, 1.0)
                ]).min(axis=0)
            else:
                pay = np.zeros((self.n_s, 0))
            self.moves.append((shift, cross_nodes, pay))

    @staticmethod
    def _shift_weights(fx: float, fy: float) -> list[tuple[int, int, float]]:
        ix, iy = math.floor(fx), math.floor(fy)
        ax, ay = fx - ix, fy - iy
        out = [(ix, iy, (1 - ax) * (1 - ay)), (ix + 1, iy, ax * (1 - ay)),
               (ix, iy + 1, (1 - ax) * ay), (ix + 1, iy + 1, ax * ay)]
        return [t for t in out if t[2] > 0.0]

    def _solve(self) -> tuple[np.ndarray, bool]:
        n = self.grid_n
        W = np.zeros((self.n_s, len(self.nodes)))
        W[:, self.inside] = self.interior_payoff
        pad = 2 + max(abs(d) for shift, _, _ in self.moves for d, _, _ in shift)
        pad = max(pad, 2 + max(abs(d) for shift, _, _ in self.moves for _, d, _ in shift))
        tol = 1e-6 * self.c.total_length
        for _ in range(self.depth):
            Wg = W.reshape(self.n_s, n, n)
            P = np.pad(Wg, ((0, 0), (pad, pad), (pad, pad)), mode="edge")
            Wn = np.full_like(W, -np.inf)
            for shift, cross_nodes, pay in self.moves:
                Wi = np.zeros_like(Wg)
                for dx, dy, wt in shift:
                    Wi += wt * P[:, pad + dx: pad + dx + n, pad + dy: pad + dy + n]
                Wi = Wi.reshape(self.n_s, -1)
                cand = np.minimum(np.minimum(np.roll(Wi, -1, axis=0), Wi), np.roll(Wi, 1, axis=0))
                if cross_nodes.size:
                    cand[:, cross_nodes] = pay
                np.maximum(Wn, cand, out=Wn)
            Wn[:, self.inside] = self.interior_payoff
            delta = float(np.max(np.abs(Wn - W)))
            W = Wn
            if delta < tol:
                return W, True
        return W, False

    def value(self, s_D: float, x: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float).reshape(1, 2)
        idx, w = self._bilinear(x)
        f = (self.c.reduce(s_D) / self.tau) % self.n_s
        k0 = int(f) % self.n_s
        k1 = (k0 + 1) % self.n_s
        a = f - int(f)
        v0 = float(self.W[k0, idx[0]] @ w[0])
        v1 = float(self.W[k1, idx[0]] @ w[0])
        return (1 - a) * v0 + a * v1

    @property
    def threshold(self) -> float:
        """Smallest safe distance the arc discretization resolves."""
        return self.tau

    def query(self, s_D: float, x: Sequence[float]) -> RolloutResult:
        v = self.value(s_D, x)
        return RolloutResult(v > self.threshold, v, self.truncated_depth or not self.converged)


_SOLVERS: dict = {}


def minimax_rollout(c: PerimeterCurve, s_D: float, x: Sequence[float], nu: float, depth: int = 120,
                    branching: int = 16, n_s: int = 48, grid_n: int = 81) -> RolloutResult:
    """Winner estimate from the discretized minimax game.

    The value table depends only on the shape, ``nu`` and the resolution, so
    it is built once and reused across queries.
    """
    key = (id(c), float(nu), depth, branching, n_s, grid_n)
    solver = _SOLVERS.get(key)
    if solver is None or solver.c is not c:
        solver = MinimaxSolver(c, nu, depth, branching, n_s, grid_n)
        _SOLVERS[key] = solver
    return solver.query(s_D, x)


# --- batch checks ------------------------------------------------------------------

def sample_states(c: PerimeterCurve, rng: np.random.Generator, offset: tuple = (0.05, 2.0)):
    """Endless (s_D, x) stream; offsets are in units of L / (2 pi)."""
    L = c.total_length
    scale = L / (2.0 * math.pi)
    while True:
        s_D = rng.uniform(0.0, L)
        x = outward_point(c, rng.uniform(0.0, L), scale * rng.uniform(*offset))
        yield s_D, x


def circle_agreement(nus: Sequence[float] = (0.3, 0.5, 0.8, 1.0), n: int = 100, seed: int = 0,
                     R: float = 1.0, n_vertices: int = 2048, r_max: float = 2.0) -> dict:
    """Max |V_general - V_closed_form| over random (r, theta) per nu on an n-gon circle."""
    c = circle(R, n_vertices)
    rng = np.random.default_rng(seed)
    out = {}
    for nu in nus:
        err = 0.0
        for _ in range(n):
            r = rng.uniform(0.0, r_max * R)
            th = rng.uniform(-math.pi, math.pi)
            s_D = rng.uniform(0.0, c.total_length)
            ang = s_D / R + th
            x = ((R + r) * math.cos(ang), (R + r) * math.sin(ang))
            if r == 0.0 or not np.min(c.signed_distances(x)) < -c.eps:
                continue
            v = evaluate_solo(c, s_D, x, nu).value
            err = max(err, abs(v - circle_value(R, r, th, nu)))
        out[str(nu)] = err
    return {"max_abs_error": out, "samples_per_nu": n}


def dominance_agreement(c: PerimeterCurve, nu: float, n: int = 500, seed: int = 0) -> dict:
    """Counts of the sufficient test firing, and of it firing on a V <= 0 state (must be 0)."""
    rng = np.random.default_rng(seed)
    gen = sample_states(c, rng)
    fired = violations = positive = 0
    for _ in range(n):
        s_D, x = next(gen)
        v = evaluate_solo(c, s_D, x, nu).value
        positive += v > 0
        if dominance_test(c, s_D, x, nu):
            fired += 1
            violations += v <= 0
    return {"samples": n, "V_positive": positive, "dominance_true": fired, "violations": violations}


def minimax_agreement(c: PerimeterCurve, nu: float, n: int = 500, seed: int = 0, band: float = 0.05,
                      **solver_kw) -> dict:
    """Fraction of sampled states with |V| > band * L where the rollout sign matches V."""
    import time

    t0 = time.perf_counter()
    solver = MinimaxSolver(c, nu, **solver_kw)
    rng = np.random.default_rng(seed)
    gen = sample_states(c, rng)
    L = c.total_length
    rows = []
    while len(rows) < n:
        s_D, x = next(gen)
        v = evaluate_solo(c, s_D, x, nu).value
        if abs(v) <= band * L:
            continue
        q = solver.query(s_D, x)
        rows.append((v, q.value, q.intruder_wins == (v > 0)))
    agree = sum(r[2] for r in rows)
    return {
        "samples": n, "agreement": agree / n if n else 1.0,
        "converged": solver.converged, "truncated": solver.truncated_depth,
        "seconds": time.perf_counter() - t0,
        "V": [r[0] for r in rows], "oracle_value": [r[1] for r in rows],
    }


__all__ = [
    "MinimaxSolver", "RolloutResult", "circle_agreement", "circle_heading", "circle_strategy",
    "circle_value", "dominance_agreement", "dominance_test", "minimax_agreement", "minimax_rollout",
    "sample_states",
]
