"""Team-level assignment: matching, independent-set and local-game-region bounds.

All three policies start from the same pairwise win/loss table, built once
per configuration by :func:`build_engagement_graph`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .engagement1v1 import BreachPoints, breaching_points, solo_from_breach
from .engagement2v1 import (
    DuoEvaluation,
    evaluate_duo,
    evaluate_duo_ordered,
    intruder_control_2v1,
    is_degenerate_pair,
)
from .geometry import PerimeterCurve, arc_distance_ccw, closest_point

MIS_NODE_CAP = 64
PREFER_PREVIOUS = 1e-3


class CapacityError(RuntimeError):
    """Instance too large for the exact solver."""


Node = tuple  # (i,) or (i, j)


@dataclass
class EngagementGraph:
    """Pairwise outcomes for every defender (and defender pair) against every intruder.

    ``solo_value[i, k]`` is the 1v1 value of D_i vs A_k; a solo edge exists
    when it is negative. ``pair_value[(i, j)][k]`` is the 2v1 value with
    i < j; a pair edge exists when A_k is in the paired-defense region.
    """

    n_def: int
    n_int: int
    solo_value: np.ndarray
    pair_value: dict = field(default_factory=dict)
    pair_edges: list = field(default_factory=list)
    breach: list = field(default_factory=list)

    @property
    def solo_edges(self) -> list[tuple[int, int]]:
        ii, kk = np.nonzero(self.solo_value < 0)
        return list(zip(ii.tolist(), kk.tolist()))

    def nodes(self) -> list[tuple[Node, int]]:
        return [((i,), k) for i, k in self.solo_edges] + list(self.pair_edges)


def _nu_per_defender(nu, n_def: int) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(nu, dtype=float), (n_def,)).copy()
    if np.any(arr <= 0) or np.any(arr > 1):
        raise ValueError("nu must lie in (0,1]")
    return arr


def build_engagement_graph(c: PerimeterCurve, defenders: Sequence[float], intruders: Sequence,
                           nu, with_pairs: bool = True) -> EngagementGraph:
    """Evaluate every solo and (optionally) pair engagement.

    ``nu`` may be per-defender for solo edges; pair edges need a shared ratio.
    """
    n_def, n_int = len(defenders), len(intruders)
    nus = _nu_per_defender(nu, max(n_def, 1))[:n_def]
    shared = n_def == 0 or bool(np.all(nus == nus[0]))
    cache: dict[float, list[BreachPoints]] = {}
    for v in set(nus.tolist()):
        cache[v] = [breaching_points(c, x, v) for x in intruders]
    solo = np.zeros((n_def, n_int))
    for i, s in enumerate(defenders):
        for k in range(n_int):
            solo[i, k] = solo_from_breach(c, s, cache[nus[i]][k]).value
    g = EngagementGraph(n_def, n_int, solo)
    if n_def:
        g.breach = cache[nus[0]]
    if with_pairs and n_def >= 2:
        if not shared:
            raise ValueError("pair engagements need a homogeneous speed ratio")
        for i, j in itertools.combinations(range(n_def), 2):
            vals = np.full(n_int, -np.inf)
            for k in range(n_int):
                vals[k] = evaluate_duo(c, defenders[i], defenders[j], None, nus[0], g.breach[k]).value
                if solo[i, k] > 0 and solo[j, k] > 0 and vals[k] <= 0:
                    g.pair_edges.append(((i, j), k))
            g.pair_value[(i, j)] = vals
    return g


@dataclass(frozen=True)
class Assignment:
    """Defender-or-pair to intruder edges; ``secondary`` edges carry no guarantee."""

    edges: tuple = ()
    secondary: tuple = ()

    def defenders_used(self) -> set[int]:
        return {i for node, _ in self.edges + self.secondary for i in node}

    def intruders_used(self) -> set[int]:
        return {k for _, k in self.edges + self.secondary}

    def is_conflict_free(self) -> bool:
        seen_d: set[int] = set()
        seen_a: set[int] = set()
        for node, k in self.edges + self.secondary:
            if k in seen_a or seen_d.intersection(node):
                return False
            seen_a.add(k)
            seen_d.update(node)
        return True

    def to_dict(self) -> dict:
        return {
            "edges": [{"defenders": list(n), "intruder": k} for n, k in self.edges],
            "secondary": [{"defenders": list(n), "intruder": k} for n, k in self.secondary],
        }


def _secondary_matching(g: EngagementGraph, free_d: Iterable[int], free_a: Iterable[int]) -> list:
    free_d, free_a = sorted(free_d), sorted(free_a)
    if not free_d or not free_a:
        return []
    cost = g.solo_value[np.ix_(free_d, free_a)]
    rows, cols = linear_sum_assignment(cost)
    return [((free_d[r],), free_a[q]) for r, q in zip(rows, cols)]


def mm_assignment(c: PerimeterCurve, defenders, intruders, nu, graph: EngagementGraph | None = None,
                  previous: Assignment | None = None,
                  secondary: bool = True) -> tuple[Assignment, int]:
    """Maximum-cardinality matching on the solo win graph.

    Returns the assignment and Q_MM = N_A - |matching|. Edges of a
    ``previous`` assignment get a tiny bonus so that ties keep them.
    """
    g = graph or build_engagement_graph(c, defenders, intruders, nu, with_pairs=False)
    if g.n_def == 0 or g.n_int == 0:
        return Assignment(), g.n_int
    win = g.solo_value < 0
    weight = win.astype(float)
    if previous is not None:
        for node, k in previous.edges:
            if len(node) == 1 and win[node[0], k]:
                weight[node[0], k] += PREFER_PREVIOUS
    rows, cols = linear_sum_assignment(weight, maximize=True)
    edges = [((int(r),), int(q)) for r, q in zip(rows, cols) if win[r, q]]
    sec = []
    if secondary:
        used_d = {n[0] for n, _ in edges}
        used_a = {k for _, k in edges}
        sec = _secondary_matching(g, set(range(g.n_def)) - used_d, set(range(g.n_int)) - used_a)
    return Assignment(tuple(edges), tuple(sec)), g.n_int - len(edges)


def _conflict_adjacency(nodes: list[tuple[Node, int]]) -> list[int]:
    n = len(nodes)
    adj = [0] * n
    for a in range(n):
        da, ka = nodes[a]
        for b in range(a + 1, n):
            db, kb = nodes[b]
            if ka == kb or set(da).intersection(db):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return adj


def maximum_independent_set(adj: list[int], prefer: list[float] | None = None) -> list[int]:
    """Exact maximum independent set by branch and bound over bitmasks.

    ``prefer`` gives per-node tie-break weights (strictly below 1/n in total
    effect) used to choose among maximum sets.
    """
    n = len(adj)
    if n > MIS_NODE_CAP:
        raise CapacityError(f"MIS instance has {n} nodes (cap {MIS_NODE_CAP})")
    w = prefer or [0.0] * n
    best = [-1.0, 0]

    def color_bound(cand: int) -> int:
        # greedy clique cover of the candidate set bounds the independent set size
        k = 0
        while cand:
            k += 1
            v = (cand & -cand).bit_length() - 1
            clique = 1 << v
            rest = cand & adj[v]
            while rest:
                u = (rest & -rest).bit_length() - 1
                clique |= 1 << u
                rest &= adj[u]
            cand &= ~clique
        return k

    def score(mask: int) -> float:
        return bin(mask).count("1") + sum(w[i] for i in range(n) if mask >> i & 1)

    def rec(cand: int, chosen: int, size: int) -> None:
        if not cand:
            s = score(chosen)
            if s > best[0]:
                best[0], best[1] = s, chosen
            return
        if size + color_bound(cand) + 0.999 < best[0]:
            return
        # branch on the candidate with the most conflicts inside the candidate set
        v = max((i for i in range(n) if cand >> i & 1), key=lambda i: bin(adj[i] & cand).count("1"))
        rec(cand & ~adj[v] & ~(1 << v), chosen | (1 << v), size + 1)
        if adj[v] & cand:
            rec(cand & ~(1 << v), chosen, size)

    rec((1 << n) - 1, 0, 0)
    return [i for i in range(n) if best[1] >> i & 1]


def mis_assignment(c: PerimeterCurve, defenders, intruders, nu, graph: EngagementGraph | None = None,
                   previous: Assignment | None = None,
                   secondary: bool = True) -> tuple[Assignment, int]:
    """Exact MIS over the conflict graph of solo and pair engagement edges.

    Returns the assignment and Q_MIS = N_A - |MIS|.
    """
    g = graph or build_engagement_graph(c, defenders, intruders, nu)
    nodes = g.nodes()
    prev = set(previous.edges) if previous is not None else set()
    prefer = [PREFER_PREVIOUS / (len(nodes) + 1) if nd in prev else 0.0 for nd in nodes]
    chosen = maximum_independent_set(_conflict_adjacency(nodes), prefer)
    edges = [nodes[i] for i in chosen]
    sec = []
    if secondary:
        used_d = {i for n, _ in edges for i in n}
        used_a = {k for _, k in edges}
        sec = _secondary_matching(g, set(range(g.n_def)) - used_d, set(range(g.n_int)) - used_a)
    return Assignment(tuple(edges), tuple(sec)), g.n_int - len(edges)


@dataclass(frozen=True)
class LocalGameRegion:
    """Intruder-winning region of the ordered pair (i, j); i == j is the single-defender case."""

    i: int
    j: int
    arc_start: float
    arc_length: float
    intruders: tuple
    pair_intruders: tuple
    n_D: int

    @property
    def n_A(self) -> int:
        return len(self.intruders)

    @property
    def n_hat_A(self) -> int:
        return len(self.pair_intruders)

    @property
    def q(self) -> int:
        return max(self.n_A - self.n_D, 0)

    @property
    def q_hat(self) -> int:
        return self.q + self.n_hat_A

    def to_dict(self) -> dict:
        return {
            "i": self.i, "j": self.j, "arc_start": float(self.arc_start),
            "arc_length": float(self.arc_length), "n_A": self.n_A, "n_D": self.n_D,
            "n_hat_A": self.n_hat_A, "q": self.q, "q_hat": self.q_hat,
            "intruders": list(self.intruders), "pair_intruders": list(self.pair_intruders),
        }


@dataclass(frozen=True)
class ScoreBounds:
    Q_MM: int
    Q_MIS: int
    Q_LG: int
    regions: tuple = ()
    selected: tuple = ()

    def to_dict(self) -> dict:
        return {
            "Q_MM": self.Q_MM, "Q_MIS": self.Q_MIS, "Q_LG": self.Q_LG,
            "regions": [r.to_dict() for r in self.regions if r.n_A or r.n_hat_A],
            "selected": [[r.i, r.j] for r in self.selected],
        }


def local_game_regions(c: PerimeterCurve, defenders, intruders, nu, graph: EngagementGraph | None = None,
                       active: Sequence[int] | None = None) -> list[LocalGameRegion]:
    """All N_D^2 local game regions with their subteam counts.

    A defender belongs to region (i, j) when it lies strictly inside the arc
    [s_Di, s_Dj]; the endpoints themselves are the pair.
    """
    nu = float(np.asarray(nu).reshape(-1)[0])
    g = graph or build_engagement_graph(c, defenders, intruders, nu)
    L = c.total_length
    active = list(range(len(intruders))) if active is None else list(active)
    bps = g.breach
    pair_set = set(g.pair_edges)
    out = []
    n_def = len(defenders)
    for i in range(n_def):
        members = tuple(k for k in active if g.solo_value[i, k] > 0)
        others = sum(1 for m in range(n_def) if m != i and not is_degenerate_pair(c, defenders[m], defenders[i]))
        out.append(LocalGameRegion(i, i, c.reduce(defenders[i]), L, members, (), others))
    for i, j in itertools.permutations(range(n_def), 2):
        si, sj = defenders[i], defenders[j]
        if is_degenerate_pair(c, si, sj):
            continue
        arc = arc_distance_ccw(c, si, sj)
        inside = sum(1 for m in range(n_def) if m not in (i, j)
                     and c.eps < arc_distance_ccw(c, si, defenders[m]) < arc - c.eps)
        members, pair_members = [], []
        key = (min(i, j), max(i, j))
        for k in active:
            ev = _ordered_if_relevant(c, si, sj, bps[k], nu)
            if ev is None:
                continue
            if ev.value > 0:
                members.append(k)
            elif (key, k) in pair_set:
                pair_members.append(k)
        out.append(LocalGameRegion(i, j, c.reduce(si), arc, tuple(members), tuple(pair_members), inside))
    return out


def _ordered_if_relevant(c, si, sj, bp, nu) -> DuoEvaluation | None:
    ev = evaluate_duo(c, si, sj, None, nu, bp)
    if ev.degenerate or ev.order != (0, 1):
        return None
    return ev


def _arcs_overlap(c: PerimeterCurve, a: LocalGameRegion, b: LocalGameRegion) -> bool:
    if a.i == a.j or b.i == b.j:
        return True
    tol = c.eps
    # b starts strictly inside a, or a starts strictly inside b, or identical starts
    d_ab = arc_distance_ccw(c, a.arc_start, b.arc_start)
    d_ba = arc_distance_ccw(c, b.arc_start, a.arc_start)
    if min(d_ab, c.total_length - d_ab) <= tol:
        return True
    return d_ab < a.arc_length - tol or d_ba < b.arc_length - tol


def max_disjoint_regions(c: PerimeterCurve, regions: Sequence[LocalGameRegion],
                         weight=lambda r: r.q) -> tuple[int, list[LocalGameRegion]]:
    """Maximum total weight of interior-disjoint regions.

    Any chosen arc endpoint is not interior to another chosen arc, so
    cutting the circle at each candidate endpoint in turn reduces the
    problem to weighted interval scheduling on a line.
    """
    L = c.total_length
    cand = [r for r in regions if weight(r) > 0]
    best_w, best = 0, []
    for r in cand:
        if r.i == r.j and weight(r) > best_w:
            best_w, best = weight(r), [r]
    arcs = [r for r in cand if r.i != r.j]
    cuts = sorted({r.arc_start for r in arcs})
    for t in cuts:
        items = []
        for r in arcs:
            a = arc_distance_ccw(c, t, r.arc_start)
            if a > L - c.eps:
                a = 0.0
            b = a + r.arc_length
            if b <= L + c.eps:
                items.append((a, b, r))
        items.sort(key=lambda it: it[1])
        ends = [it[1] for it in items]
        dp = [0] * (len(items) + 1)
        pick: list[list] = [[] for _ in range(len(items) + 1)]
        for m, (a, b, r) in enumerate(items):
            p = int(np.searchsorted(ends, a + c.eps, side="right"))
            p = min(p, m)
            take = dp[p] + weight(r)
            if take > dp[m]:
                dp[m + 1], pick[m + 1] = take, pick[p] + [r]
            else:
                dp[m + 1], pick[m + 1] = dp[m], pick[m]
        if dp[-1] > best_w:
            best_w, best = dp[-1], pick[-1]
    return best_w, best


def max_disjoint_regions_brute(c: PerimeterCurve, regions: Sequence[LocalGameRegion],
                               weight=lambda r: r.q) -> int:
    """Exhaustive reference for :func:`max_disjoint_regions`."""
    cand = [r for r in regions if weight(r) > 0]
    best = 0
    for m in range(1, len(cand) + 1):
        for combo in itertools.combinations(cand, m):
            if all(not _arcs_overlap(c, a, b) for a, b in itertools.combinations(combo, 2)):
                best = max(best, sum(weight(r) for r in combo))
    return best


def lgr_bounds(c: PerimeterCurve, defenders, intruders, nu,
               graph: EngagementGraph | None = None) -> ScoreBounds:
    """Q_MM, Q_MIS and Q_LG with the per-region subteam table."""
    nus = np.asarray(nu, dtype=float).reshape(-1)
    if nus.size > 1 and not np.all(nus == nus[0]):
        raise ValueError("local game regions need a homogeneous defender speed")
    nu = float(nus[0])
    g = graph or build_engagement_graph(c, defenders, intruders, nu)
    _, q_mm = mm_assignment(c, defenders, intruders, nu, g, secondary=False)
    _, q_mis = mis_assignment(c, defenders, intruders, nu, g, secondary=False)
    regions = local_game_regions(c, defenders, intruders, nu, g)
    q_lg, sel = max_disjoint_regions(c, regions)
    return ScoreBounds(q_mm, q_mis, q_lg, tuple(regions), tuple(sel))


def lgr_defense_assignment(c: PerimeterCurve, defenders, intruders, nu,
                           graph: EngagementGraph | None = None) -> Assignment:
    """Three-step local-game-region defense.

    1. In each selected positive-score region, give up q_k intruders:
       those without any solo or pair edge first, then by largest pair value.
    2. and 3. Over the reduced game, pick the largest conflict-free set of
       pair and solo edges (exact MIS). Past the MIS node cap this falls
       back to greedy pairs for regions with q_hat_k >= 1, taken by largest
       pair value, then a maximum matching of the remaining solo edges.
    A secondary matching covers whoever is left.
    """
    nu = float(np.asarray(nu).reshape(-1)[0])
    g = graph or build_engagement_graph(c, defenders, intruders, nu)
    n_int = len(intruders)
    regions = local_game_regions(c, defenders, intruders, nu, g)
    _, sel = max_disjoint_regions(c, regions)
    dropped: set[int] = set()

    def pair_value(r: LocalGameRegion, k: int) -> float:
        if r.i == r.j:
            return g.solo_value[r.i, k]
        return g.pair_value[(min(r.i, r.j), max(r.i, r.j))][k]

    # intruders nobody can stop on their own (no solo or pair edge) go first
    capturable = {k for _, k in g.nodes()}
    for r in sel:
        ranked = sorted(r.intruders, key=lambda k: (k in capturable, -pair_value(r, k)))
        dropped.update([k for k in ranked if k not in dropped][: r.q])
    nodes = [nd for nd in g.nodes() if nd[1] not in dropped]
    try:
        chosen = maximum_independent_set(_conflict_adjacency(nodes))
    except CapacityError:
        edges = _greedy_reduced(c, defenders, intruders, nu, g, dropped, pair_value)
    else:
        edges = [nodes[m] for m in chosen]
    used_d = {i for nd, _ in edges for i in nd}
    used_a = {k for _, k in edges}
    sec = _secondary_matching(g, set(range(len(defenders))) - used_d, set(range(n_int)) - used_a)
    return Assignment(tuple(edges), tuple(sec))


def _greedy_reduced(c, defenders, intruders, nu, g, dropped, pair_value) -> list:
    n_int = len(intruders)
    active = [k for k in range(n_int) if k not in dropped]
    regions = local_game_regions(c, defenders, intruders, nu, g, active)
    cands = []
    for r in regions:
        if r.i != r.j and r.q_hat >= 1:
            for k in r.pair_intruders:
                cands.append((pair_value(r, k), r, k))
    cands.sort(key=lambda t: -t[0])
    used_d: set[int] = set()
    used_a: set[int] = set(dropped)
    edges = []
    for _, r, k in cands:
        if k in used_a or r.i in used_d or r.j in used_d:
            continue
        edges.append(((min(r.i, r.j), max(r.i, r.j)), k))
        used_a.add(k)
        used_d.update((r.i, r.j))
    free_d = [i for i in range(len(defenders)) if i not in used_d]
    free_a = [k for k in range(n_int) if k not in used_a]
    if free_d and free_a:
        win = g.solo_value[np.ix_(free_d, free_a)] < 0
        rows, cols = linear_sum_assignment(win.astype(float), maximize=True)
        for r_, q_ in zip(rows, cols):
            if win[r_, q_]:
                edges.append(((free_d[r_],), free_a[q_]))
                used_d.add(free_d[r_])
                used_a.add(free_a[q_])
    return edges


@dataclass
class GreedyIntruderState:
    """Per-intruder memory of the defender pair currently targeted."""

    pairs: dict = field(default_factory=dict)


def _biased_left(c: PerimeterCurve, s_D: float, bp: BreachPoints, bias: float) -> bool:
    ev = solo_from_breach(c, s_D, bp)
    return ev.is_left or abs(ev.J_L_star - ev.J_R_star) <= bias


def _candidate_pairs(c: PerimeterCurve, defenders, bp: BreachPoints, bias: float) -> list[tuple[int, int]]:
    order = sorted(range(len(defenders)), key=lambda i: c.reduce(defenders[i]))
    pairs = [(order[m], order[(m + 1) % len(order)]) for m in range(len(order))]
    left = {i: _biased_left(c, defenders[i], bp, bias) for i in order}
    out = []
    for i, j in pairs:
        if is_degenerate_pair(c, defenders[i], defenders[j]):
            continue
        if arc_distance_ccw(c, defenders[i], defenders[j]) < 0.5 * c.total_length:
            ok = left[i] and not left[j]
        else:
            ok = left[i] or not left[j]
        if ok:
            out.append((i, j))
    return out


def choose_pair(c: PerimeterCurve, defenders, bp: BreachPoints, previous: tuple | None = None,
                bias: float | None = None) -> tuple[int, int]:
    """Adjacent (cw, ccw) defender pair an intruder plays against.

    Candidates are consecutive defenders whose relevant region holds the
    intruder, with near-singular cases leaning ccw. The previous choice is
    kept while it stays a candidate; otherwise the pair with the nearest
    midpoint wins.
    """
    n = len(defenders)
    if n == 1:
        return (0, 0)
    if bias is None:
        bias = 1e-3 * c.total_length
    cands = _candidate_pairs(c, defenders, bp, bias)
    if previous is not None and previous in cands:
        return previous
    if not cands:
        order = sorted(range(n), key=lambda i: c.reduce(defenders[i]))
        cands = [(order[m], order[(m + 1) % n]) for m in range(n)
                 if not is_degenerate_pair(c, defenders[order[m]], defenders[order[(m + 1) % n]])]
        if not cands:
            return (order[0], order[0])

    def mid_dist(p):
        i, j = p
        s_mid = defenders[i] + 0.5 * arc_distance_ccw(c, defenders[i], defenders[j])
        return float(np.hypot(*(c.point_at(s_mid) - bp.x)))

    return min(cands, key=mid_dist)


def intruder_team_greedy(c: PerimeterCurve, defenders, intruders, nu,
                         state: GreedyIntruderState | None = None,
                         breach: Sequence[BreachPoints] | None = None,
                         keys: Sequence | None = None) -> list[np.ndarray]:
    """Each intruder independently plays the 2v1 strategy against its adjacent pair.

    ``keys`` name the intruders in ``state`` (defaults to list positions), so
    the pair memory survives when resolved intruders drop out of the list.
    """
    state = state if state is not None else GreedyIntruderState()
    keys = list(range(len(intruders))) if keys is None else list(keys)
    out = []
    for k, x in enumerate(intruders):
        bp = breach[k] if breach is not None else breaching_points(c, x, nu)
        if len(defenders) == 0:
            # nobody to beat: straight to the nearest boundary point
            _, p, dist = closest_point(c, bp.x)
            out.append(bp.nu * (p - bp.x) / dist)
            continue
        pair = choose_pair(c, defenders, bp, state.pairs.get(keys[k]))
        state.pairs[keys[k]] = pair
        i, j = pair
        if i == j:
            ev = evaluate_duo(c, defenders[i], defenders[i], None, bp.nu, bp)
        else:
            ev = evaluate_duo_ordered(c, defenders[i], defenders[j], bp)
        out.append(intruder_control_2v1(c, defenders[i], defenders[j], bp.x, bp.nu, ev))
    return out


def brute_force_matching(g: EngagementGraph) -> int:
    """Largest conflict-free set of solo edges, by enumeration."""
    return _brute_independent([((i,), k) for i, k in g.solo_edges])


def brute_force_mis(g: EngagementGraph) -> int:
    """Largest conflict-free set of solo and pair edges, by enumeration."""
    return _brute_independent(g.nodes())


def _brute_independent(nodes) -> int:
    best = 0
    n = len(nodes)
    for m in range(n, 0, -1):
        if m <= best:
            break
        for combo in itertools.combinations(nodes, m):
            ds = [i for nd, _ in combo for i in nd]
            ks = [k for _, k in combo]
            if len(set(ds)) == len(ds) and len(set(ks)) == len(ks):
                return m
    return best


__all__ = [
    "Assignment", "CapacityError", "EngagementGraph", "GreedyIntruderState", "LocalGameRegion",
    "ScoreBounds", "brute_force_matching", "brute_force_mis", "build_engagement_graph",
    "choose_pair", "intruder_team_greedy", "lgr_bounds", "lgr_defense_assignment",
    "local_game_regions", "max_disjoint_regions", "max_disjoint_regions_brute",
    "maximum_independent_set", "mis_assignment", "mm_assignment",
]
