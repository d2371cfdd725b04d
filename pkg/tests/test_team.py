import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perimeter_defense.engagement1v1 import evaluate_solo, intruder_control_1v1
from perimeter_defense.engagement2v1 import duo_region_report, intruder_control_2v1
from perimeter_defense.team import (
    MIS_NODE_CAP,
    CapacityError,
    GreedyIntruderState,
    LocalGameRegion,
    brute_force_matching,
    brute_force_mis,
    build_engagement_graph,
    intruder_team_greedy,
    lgr_bounds,
    lgr_defense_assignment,
    local_game_regions,
    max_disjoint_regions,
    max_disjoint_regions_brute,
    maximum_independent_set,
    mis_assignment,
    mm_assignment,
)

NU = 0.5
PI = math.pi


def polar(r, ang):
    return ((1 + r) * math.cos(ang), (1 + r) * math.sin(ang))


def random_team(rng, c, nd_max=5, na_max=5):
    L = c.total_length
    D = list(rng.uniform(0, L, rng.integers(1, nd_max + 1)))
    A = [polar(r, a) for r, a in zip(rng.uniform(0.05, 1.0, rng.integers(1, na_max + 1)),
                                     rng.uniform(0, 2 * PI, na_max))]
    return D, A, float(rng.uniform(0.4, 0.9))


def test_single_capturable(circ512):
    a, q = mm_assignment(circ512, [0.0], [polar(0.5, 0.2)], NU)
    assert q == 0 and a.edges == (((0,), 0),)


def test_no_solo_wins(circ512):
    A = [polar(1.0, PI), polar(1.0, PI / 2 + 0.4)]
    _, q = mm_assignment(circ512, [0.0], A, NU)
    assert q == 2


def test_no_pair_edges_mis_equals_mm(circ512):
    D, A = [0.0], [polar(0.3, 0.1), polar(0.3, PI)]
    _, q_mm = mm_assignment(circ512, D, A, NU)
    _, q_mis = mis_assignment(circ512, D, A, NU)
    assert q_mm == q_mis


def test_pair_edge_enables_capture(circ512):
    # intruder above the arc between two defenders at 0 and pi, just outside the c-circle
    x = (0.0, 1.0 + NU * PI / 2 + 0.05)
    assert duo_region_report(circ512, 0.0, PI, x, NU).in_R_pair
    g = build_engagement_graph(circ512, [0.0, PI], [x], NU)
    assert g.pair_edges == [((0, 1), 0)]
    a, q_mis = mis_assignment(circ512, [0.0, PI], [x], NU, g)
    _, q_mm = mm_assignment(circ512, [0.0, PI], [x], NU, g)
    assert (q_mm, q_mis) == (1, 0)
    assert a.edges == (((0, 1), 0),)
    assert a.is_conflict_free()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_exact_against_enumeration(seed):
    from perimeter_defense.geometry import circle

    c = circle(1.0, 256)
    rng = np.random.default_rng(seed)
    D, A, nu = random_team(rng, c)
    g = build_engagement_graph(c, D, A, nu)
    a_mm, q_mm = mm_assignment(c, D, A, nu, g)
    a_mis, q_mis = mis_assignment(c, D, A, nu, g)
    assert len(A) - q_mm == brute_force_matching(g)
    assert len(A) - q_mis == brute_force_mis(g)
    assert a_mm.is_conflict_free() and a_mis.is_conflict_free()
    b = lgr_bounds(c, D, A, nu, g)
    assert b.Q_LG <= b.Q_MIS <= b.Q_MM
    assert (b.Q_LG > 0) == any(r.q > 0 for r in b.regions)
    regions = local_game_regions(c, D, A, nu, g)
    if len(regions) <= 14:
        assert max_disjoint_regions(c, regions)[0] == max_disjoint_regions_brute(c, regions)


def test_mis_solver_small_graphs():
    # 5-cycle: MIS size 2
    adj = [0] * 5
    for v in range(5):
        for w in ((v + 1) % 5, (v - 1) % 5):
            adj[v] |= 1 << w
    assert len(maximum_independent_set(adj)) == 2
    # empty graph
    assert len(maximum_independent_set([0] * 6)) == 6


def test_mis_capacity():
    with pytest.raises(CapacityError):
        maximum_independent_set([0] * (MIS_NODE_CAP + 1))


def test_local_score_formula():
    r = LocalGameRegion(0, 1, 0.0, 1.0, (0, 1, 2), (), 1)
    assert r.q == 2
    r = LocalGameRegion(0, 1, 0.0, 1.0, (0,), (3,), 2)
    assert r.q == 0 and r.q_hat == 1


def test_all_zero_scores(circ512):
    D = [0.0, PI / 2, PI, 3 * PI / 2]
    A = [polar(0.2, 0.1)]
    b = lgr_bounds(circ512, D, A, NU)
    assert all(r.q == 0 for r in b.regions) and b.Q_LG == 0


def test_lgr_assignment_reduces_to_mm(circ512):
    D = [0.0, PI]
    A = [polar(0.2, 0.05), polar(0.2, PI + 0.05)]
    a = lgr_defense_assignment(circ512, D, A, NU)
    m, _ = mm_assignment(circ512, D, A, NU)
    assert set(a.edges) == set(m.edges)


def test_lgr_assignment_pair_plus_mm(circ512):
    D = [0.0, PI, 3 * PI / 2]
    A = [(0.0, 1.0 + NU * PI / 2 + 0.05), polar(0.1, 3 * PI / 2 + 0.05)]
    a = lgr_defense_assignment(circ512, D, A, NU)
    assert ((0, 1), 0) in a.edges and ((2,), 1) in a.edges
    assert a.is_conflict_free()


def test_lgr_drops_exactly_q(circ512):
    rng = np.random.default_rng(3)
    seen = 0
    for _ in range(200):
        D, A, nu = random_team(rng, circ512)
        b = lgr_bounds(circ512, D, A, nu)
        if b.Q_LG == 0:
            continue
        a = lgr_defense_assignment(circ512, D, A, nu)
        assigned = {k for _, k in a.edges}
        assert len(A) - len(assigned) >= b.Q_LG
        seen += 1
        if seen > 5:
            break
    assert seen


def test_greedy_single_defender_is_1v1(circ512):
    x = polar(0.8, 2.0)
    u = intruder_team_greedy(circ512, [0.3], [x], NU)[0]
    np.testing.assert_allclose(u, intruder_control_1v1(circ512, 0.3, x, NU), atol=1e-12)


def test_greedy_between_two_heads_to_mid(circ512):
    x = (0.0, 1.5)
    u = intruder_team_greedy(circ512, [0.0, PI], [x], NU)[0]
    np.testing.assert_allclose(u, intruder_control_2v1(circ512, 0.0, PI, x, NU), atol=1e-12)
    np.testing.assert_allclose(u, [0.0, -NU], atol=1e-4)


def test_greedy_keeps_pair_on_tie(circ512):
    # intruder on the afferent surface of the defender at 0 (straight out radially)
    D = [0.0, 2 * PI / 3, 4 * PI / 3]
    state = GreedyIntruderState()
    x = polar(0.6, 0.0)
    first = intruder_team_greedy(circ512, D, [x], NU, state)[0]
    pair = state.pairs[0]
    for _ in range(5):
        nxt = intruder_team_greedy(circ512, D, [x], NU, state)[0]
        assert state.pairs[0] == pair
        np.testing.assert_allclose(nxt, first)


def test_value_matrix_matches_solo(circ512):
    D, A = [0.0, 2.0], [polar(0.5, 1.0), polar(0.7, 4.0)]
    g = build_engagement_graph(circ512, D, A, NU, with_pairs=False)
    for i, s in enumerate(D):
        for k, x in enumerate(A):
            assert g.solo_value[i, k] == pytest.approx(evaluate_solo(circ512, s, x, NU).value)
