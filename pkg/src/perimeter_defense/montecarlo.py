"""Batches of random team instances: bound chain, exactness and end-to-end soundness.

Each instance draws defender arcs and exterior intruder points, computes
Q_MM, Q_MIS and Q_LG, compares the first two against exhaustive
enumeration, and optionally simulates each team defense against the
greedy intruder team to check Q <= Q_P.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import PerimeterCurve, outward_point, perimeter_from_spec
from .sim import SimConfig, run
from .team import (
    CapacityError,
    brute_force_matching,
    brute_force_mis,
    build_engagement_graph,
    lgr_bounds,
)

log = logging.getLogger(__name__)

BOUND_KEY = {"mm": "Q_MM", "mis": "Q_MIS", "lgr": "Q_LG"}


@dataclass
class MonteCarloSpec:
    perimeter: dict = field(default_factory=lambda: {"shape": "circle", "radius": 1.0, "n": 512})
    instances: int = 200
    max_defenders: int = 5
    max_intruders: int = 5
    nu: tuple = (0.4, 0.9)
    # intruder offsets from the boundary, as fractions of L / (2 pi)
    offset: tuple = (0.05, 1.0)
    simulate: bool = True
    policies: tuple = ("mm", "mis", "lgr")
    intruder_policy: str = "greedy-team"
    dt: float | None = None  # default 2e-3 * L
    t_max: float | None = None
    capture_eps: float | None = None
    seed: int = 0
    brute_force: bool = True
    workers: int = 1

    @classmethod
    def from_dict(cls, doc: dict | None, **override) -> "MonteCarloSpec":
        doc = dict(doc or {})
        doc.update({k: v for k, v in override.items() if v is not None})
        known = set(cls.__dataclass_fields__)
        bad = [k for k in doc if k not in known]
        if bad:
            raise ValueError(f"montecarlo.{bad[0]}: unknown setting")
        spec = cls(**doc)
        if isinstance(spec.nu, (int, float)):
            spec.nu = (float(spec.nu), float(spec.nu))
        spec.nu = tuple(spec.nu)
        spec.offset = tuple(spec.offset)
        spec.policies = tuple(spec.policies)
        lo, hi = spec.nu
        if not (0.0 < lo <= hi <= 1.0):
            raise ValueError(f"montecarlo.nu: must lie in (0,1], got {list(spec.nu)}")
        if spec.instances < 0:
            raise ValueError("montecarlo.instances: must be non-negative")
        if not 1 <= spec.max_defenders or not 1 <= spec.max_intruders:
            raise ValueError("montecarlo.max_defenders/max_intruders: must be at least 1")
        for p in spec.policies:
            if p not in BOUND_KEY:
                raise ValueError(f"montecarlo.policies: unknown team policy {p!r}")
        return spec


@dataclass
class Instance:
    index: int
    nu: float
    defenders: list
    intruders: list


def random_instance(c: PerimeterCurve, rng: np.random.Generator, spec: MonteCarloSpec,
                    index: int = 0) -> Instance:
    L = c.total_length
    scale = L / (2.0 * np.pi)
    nd = int(rng.integers(1, spec.max_defenders + 1))
    na = int(rng.integers(1, spec.max_intruders + 1))
    nu = float(rng.uniform(*spec.nu))
    D = [float(s) for s in rng.uniform(0.0, L, nd)]
    A = [outward_point(c, s, scale * r).tolist()
         for s, r in zip(rng.uniform(0.0, L, na), rng.uniform(*spec.offset, na))]
    return Instance(index, nu, D, A)


def evaluate_instance(c: PerimeterCurve, inst: Instance, spec: MonteCarloSpec) -> dict:
    row = {"index": inst.index, "nu": inst.nu, "n_D": len(inst.defenders), "n_A": len(inst.intruders)}
    t0 = time.perf_counter()
    try:
        b = lgr_bounds(c, inst.defenders, inst.intruders, inst.nu)
    except CapacityError as exc:
        row["error"] = str(exc)
        return row
    row.update(Q_MM=b.Q_MM, Q_MIS=b.Q_MIS, Q_LG=b.Q_LG, chain=b.Q_LG <= b.Q_MIS <= b.Q_MM)
    if spec.brute_force:
        g = build_engagement_graph(c, inst.defenders, inst.intruders, inst.nu)
        row["MM_exact"] = brute_force_matching(g) == len(inst.intruders) - b.Q_MM
        row["MIS_exact"] = brute_force_mis(g) == len(inst.intruders) - b.Q_MIS
    if spec.simulate:
        for pol in spec.policies:
            cfg = SimConfig(c, inst.nu, inst.defenders, inst.intruders, pol, spec.intruder_policy,
                            dt=spec.dt if spec.dt is not None else 2e-3 * c.total_length,
                            t_max=spec.t_max, capture_eps=spec.capture_eps, seed=spec.seed + inst.index)
            tr = run(cfg)
            bound = row[BOUND_KEY[pol]]
            row[f"Q_sim_{pol}"] = tr.Q
            row[f"sound_{pol}"] = tr.Q <= bound
    row["seconds"] = time.perf_counter() - t0
    return row


def _work(args) -> dict:
    perimeter, inst, spec = args
    return evaluate_instance(perimeter_from_spec(perimeter), inst, spec)


def instances(c: PerimeterCurve, spec: MonteCarloSpec) -> list[Instance]:
    rng = np.random.default_rng(spec.seed)
    return [random_instance(c, rng, spec, m) for m in range(spec.instances)]


def run_batch(spec: MonteCarloSpec, c: PerimeterCurve | None = None) -> tuple[list[dict], dict]:
    """Evaluate ``spec.instances`` random instances; returns (rows, aggregate stats)."""
    c = c or perimeter_from_spec(spec.perimeter)
    insts = instances(c, spec)
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            rows = list(pool.map(_work, [(spec.perimeter, i, spec) for i in insts]))
    else:
        rows = [evaluate_instance(c, i, spec) for i in insts]
    return rows, aggregate(rows, spec)


def aggregate(rows: list[dict], spec: MonteCarloSpec) -> dict:
    ok = [r for r in rows if "error" not in r]
    stats = {
        "instances": len(rows),
        "skipped": len(rows) - len(ok),
        "chain_holds": sum(bool(r["chain"]) for r in ok),
        "gap_MIS_lt_MM": sum(r["Q_MIS"] < r["Q_MM"] for r in ok),
        "gap_LG_lt_MIS": sum(r["Q_LG"] < r["Q_MIS"] for r in ok),
        "mean": {k: float(np.mean([r[k] for r in ok])) if ok else None for k in ("Q_MM", "Q_MIS", "Q_LG")},
    }
    if spec.brute_force:
        stats["MM_exact"] = sum(bool(r["MM_exact"]) for r in ok)
        stats["MIS_exact"] = sum(bool(r["MIS_exact"]) for r in ok)
    if spec.simulate:
        stats["sound"] = {p: sum(bool(r[f"sound_{p}"]) for r in ok) for p in spec.policies}
        stats["violations"] = {p: [r["index"] for r in ok if not r[f"sound_{p}"]] for p in spec.policies}
    return stats


def find_gap(spec: MonteCarloSpec, max_samples: int = 10_000, c: PerimeterCurve | None = None) -> dict | None:
    """Search random instances for Q_MIS < Q_MM, then simulate the MIS defense on it.

    Returns the instance with its bounds and the simulated score, or None.
    """
    c = c or perimeter_from_spec(spec.perimeter)
    rng = np.random.default_rng(spec.seed)
    for m in range(max_samples):
        inst = random_instance(c, rng, spec, m)
        try:
            b = lgr_bounds(c, inst.defenders, inst.intruders, inst.nu)
        except CapacityError:
            continue
        if b.Q_MIS < b.Q_MM:
            cfg = SimConfig(c, inst.nu, inst.defenders, inst.intruders, "mis", spec.intruder_policy,
                            dt=spec.dt if spec.dt is not None else 2e-3 * c.total_length,
                            t_max=spec.t_max, capture_eps=spec.capture_eps, seed=spec.seed)
            tr = run(cfg)
            return {"samples": m + 1, "instance": asdict(inst), "Q_MM": b.Q_MM, "Q_MIS": b.Q_MIS,
                    "Q_LG": b.Q_LG, "Q_sim_mis": tr.Q, "confirmed": tr.Q <= b.Q_MIS,
                    "status": tr.status}
    return None


__all__ = ["Instance", "MonteCarloSpec", "aggregate", "evaluate_instance", "find_gap", "instances",
           "random_instance", "run_batch"]
