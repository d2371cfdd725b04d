"""Command-line front end.

Usage::

    perimeter-defense solve1v1 --scenario sq.json [--out DIR] [--svg] [--grid N]
    perimeter-defense solve2v1 --scenario pair.json
    perimeter-defense bounds --scenario team.json
    perimeter-defense simulate --scenario team.json --out run/ --svg
    perimeter-defense montecarlo [--scenario mc.json] --out mc/
    perimeter-defense oracle [--scenario circ.json]
    perimeter-defense barrier --scenario sq.json --out bar/ --svg

Every subcommand prints a JSON report on stdout. With ``--out`` it also
writes that report plus CSV/JSONL data and matplotlib figures to the
directory. Validation failures exit with status 2 and a ``field: reason``
message on stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .engagement1v1 import (
    barrier_sample,
    breaching_points,
    defender_control_1v1,
    distance_to_barrier,
    intruder_control_1v1,
    solo_from_breach,
)
from .engagement2v1 import (
    defender_control_2v1,
    duo_region_report,
    evaluate_duo,
    intruder_control_2v1,
    is_degenerate_pair,
)
from .export import (
    barrier_svg,
    duo_value_field,
    sample_field,
    solo_value_field,
    to_json,
    write_grid_csv,
    write_json,
    write_jsonl,
    write_polyline_csv,
    write_rows_csv,
)
from .scenario import Scenario, ScenarioError, load
from .team import CapacityError, lgr_bounds, mis_assignment, mm_assignment

log = logging.getLogger("perimeter_defense")

DEFAULT_GRID = 61


def _pick(seq, idx: int, what: str):
    if not 0 <= idx < len(seq):
        raise ScenarioError(f"{what}[{idx}]: scenario has {len(seq)} {what}")
    return seq[idx]


def _scenario(args, required: bool = True) -> Scenario | None:
    if args.scenario is None:
        if required:
            raise ScenarioError("--scenario: a scenario file is required for this command")
        return None
    try:
        sc = load(args.scenario)
    except FileNotFoundError as exc:
        raise ScenarioError(f"--scenario: cannot read {args.scenario}") from exc
    return sc.with_overrides(dt=args.dt, t_max=args.tmax, eps=args.eps, seed=args.seed)


def _out(args) -> Path | None:
    if args.out is None:
        return None
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


# --- subcommands ------------------------------------------------------------------------

def cmd_solve1v1(args) -> dict:
    sc = _scenario(args)
    c, nu = sc.curve(), sc.nu
    s_D = _pick(sc.defenders, args.defender, "defenders")
    x = np.asarray(_pick(sc.intruders, args.intruder, "intruders"), dtype=float)
    bp = breaching_points(c, x, nu)
    ev = solo_from_breach(c, s_D, bp)
    report = {
        "evaluation": ev.to_dict(),
        "intruder_wins": ev.intruder_wins,
        "controls": {"omega_D": defender_control_1v1(c, s_D, x, nu, ev),
                     "u_A": intruder_control_1v1(c, s_D, x, nu, ev).tolist()},
        "tangent_points": {"s_tan_R": bp.fan.s_tan_R, "s_tan_L": bp.fan.s_tan_L},
        "L": c.total_length,
    }
    if ev.value <= 0:
        report["distance_to_barrier"] = distance_to_barrier(c, s_D, x, nu)
    out = _out(args)
    if out is not None:
        grid = args.grid or DEFAULT_GRID
        barrier = barrier_sample(c, s_D, nu)
        files = {}
        for which in ("V", "J_L", "J_R"):
            xs, ys, V = sample_field(c, solo_value_field(c, s_D, nu, which), grid)
            files[which] = str(write_grid_csv(out / f"levelset_{which}.csv", xs, ys, V, which))
            if which == "V":
                from .plotting import plot_value_field
                files["figure"] = str(plot_value_field(out / "levelset_V.png", c, xs, ys, V, "V",
                                                       barrier, [s_D], [x]))
        files["barrier"] = str(write_polyline_csv(out / "barrier.csv", barrier))
        if args.svg:
            svg = out / "barrier.svg"
            svg.write_text(barrier_svg(c, barrier, c.point_at(s_D)))
            files["barrier_svg"] = str(svg)
        report["files"] = files
        write_json(out / "report.json", report)
    return report


def cmd_solve2v1(args) -> dict:
    sc = _scenario(args)
    c, nu = sc.curve(), sc.nu
    i, j = args.pair
    s1 = _pick(sc.defenders, i, "defenders")
    s2 = _pick(sc.defenders, j, "defenders")
    x = np.asarray(_pick(sc.intruders, args.intruder, "intruders"), dtype=float)
    bp = breaching_points(c, x, nu)
    ev = evaluate_duo(c, s1, s2, x, nu, bp)
    flags = duo_region_report(c, s1, s2, x, nu, bp)
    w = defender_control_2v1(c, s1, s2, x, nu, bp, dwin_margin=sc.sim.get("dwin_margin") or 0.0)
    report = {
        "evaluation": ev.to_dict(),
        "regions": flags.to_dict(),
        "controls": {"omega_D": [int(w[0]), int(w[1])],
                     "u_A": intruder_control_2v1(c, s1, s2, x, nu, ev).tolist()},
        "degenerate": is_degenerate_pair(c, s1, s2),
    }
    out = _out(args)
    if out is not None:
        from .plotting import plot_value_field

        xs, ys, V = sample_field(c, duo_value_field(c, s1, s2, nu), args.grid or DEFAULT_GRID)
        report["files"] = {
            "levelset": str(write_grid_csv(out / "levelset_Vij.csv", xs, ys, V, "V_ij")),
            "figure": str(plot_value_field(out / "levelset_Vij.png", c, xs, ys, V, "V_ij",
                                           None, [s1, s2], [x])),
        }
        write_json(out / "report.json", report)
    return report


def cmd_bounds(args) -> dict:
    sc = _scenario(args)
    c, nu = sc.curve(), sc.nu
    D, A = list(sc.defenders), [list(x) for x in sc.intruders]
    b = lgr_bounds(c, D, A, nu)
    a_mm, _ = mm_assignment(c, D, A, nu)
    a_mis, _ = mis_assignment(c, D, A, nu)
    report = {"Q_MM": b.Q_MM, "Q_MIS": b.Q_MIS, "Q_LG": b.Q_LG, "bounds": b.to_dict(),
              "assignment": {"mm": a_mm.to_dict(), "mis": a_mis.to_dict()}}
    out = _out(args)
    if out is not None:
        from .plotting import plot_assignment

        report["files"] = {
            "mm": str(plot_assignment(out / "assignment_mm.png", c, D, A, a_mm.edges, nu,
                                      f"MM, Q_MM = {b.Q_MM}")),
            "mis": str(plot_assignment(out / "assignment_mis.png", c, D, A, a_mis.edges, nu,
                                       f"MIS, Q_MIS = {b.Q_MIS}")),
        }
        write_json(out / "report.json", report)
    return report


def cmd_simulate(args) -> dict:
    from .sim import run

    sc = _scenario(args)
    trace = run(sc.sim_config())
    report = trace.summary()
    out = _out(args)
    if out is not None:
        from .plotting import plot_trace, snapshot_frames

        files = {"trace": str(write_jsonl(out / "trace.jsonl", trace.records)),
                 "figure": str(plot_trace(out / "trajectories.png", sc.curve(), trace))}
        if args.svg:
            frames = snapshot_frames(out / "frames", sc.curve(), trace, sc.nu, args.frames)
            files["frames"] = [str(p) for p in frames]
        report["files"] = files
        write_json(out / "summary.json", report)
    return report


def cmd_montecarlo(args) -> dict:
    from .montecarlo import MonteCarloSpec, find_gap, run_batch

    sc = _scenario(args, required=False)
    block = dict(sc.extra.get("montecarlo", {})) if sc is not None else {}
    if sc is not None:
        block.setdefault("perimeter", sc.perimeter)
        for key, v in (("dt", sc.sim.get("dt")), ("t_max", sc.sim.get("t_max")),
                       ("capture_eps", sc.sim.get("capture_eps"))):
            if v is not None:
                block.setdefault(key, v)
    try:
        spec = MonteCarloSpec.from_dict(
            block, instances=args.instances, seed=args.seed, workers=args.workers,
            dt=args.dt, t_max=args.tmax, capture_eps=args.eps,
            simulate=False if args.no_sim else None)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(str(exc)) from exc
    rows, stats = run_batch(spec)
    report = {"spec": {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(spec).items()},
              "stats": stats}
    if args.gap:
        report["gap"] = find_gap(spec, args.gap_samples)
    out = _out(args)
    if out is not None:
        from .plotting import plot_histograms

        files = {"instances": str(write_rows_csv(out / "instances.csv", rows))}
        ok = [r for r in rows if "error" not in r]
        if ok:
            cols = {k: [r[k] for r in ok] for k in ("Q_MM", "Q_MIS", "Q_LG")}
            if spec.simulate:
                cols.update({f"Q_sim_{p}": [r[f"Q_sim_{p}"] for r in ok] for p in spec.policies})
            files["figure"] = str(plot_histograms(out / "scores.png", cols, "score bounds"))
        report["files"] = files
        write_json(out / "report.json", report)
    return report


def cmd_oracle(args) -> dict:
    from .oracle import circle_agreement, dominance_agreement, minimax_agreement

    sc = _scenario(args, required=False)
    if sc is None:
        sc = Scenario({"shape": "circle", "radius": 1.0, "n": 2048}, 0.5)
    c, nu = sc.curve(), sc.nu
    seed = args.seed or 0
    report = {
        "circle": circle_agreement(n=args.samples // 5 or 1, seed=seed),
        "dominance": dominance_agreement(c, nu, args.samples, seed),
    }
    if not args.skip_minimax:
        kw = {"grid_n": args.grid} if args.grid else {}
        mm = minimax_agreement(c, nu, args.samples, seed, **kw)
        V, W = mm.pop("V"), mm.pop("oracle_value")
        report["minimax"] = mm
        out = _out(args)
        if out is not None:
            from .plotting import plot_scatter

            report["files"] = {
                "samples": str(write_rows_csv(out / "minimax_samples.csv",
                                              [{"V": a, "oracle_value": b} for a, b in zip(V, W)])),
                "figure": str(plot_scatter(out / "minimax.png", V, W, "V (analytic)", "minimax value",
                                           f"agreement {mm['agreement']:.3f}")),
            }
    out = _out(args)
    if out is not None:
        write_json(out / "report.json", report)
    return report


def cmd_barrier(args) -> dict:
    sc = _scenario(args)
    c, nu = sc.curve(), sc.nu
    s_D = _pick(sc.defenders, args.defender, "defenders")
    n = args.grid or 1024
    barrier = barrier_sample(c, s_D, nu, n)
    seg = np.diff(barrier, axis=0)
    report = {"s_D": s_D, "nu": nu, "samples": len(barrier),
              "length": float(np.sum(np.hypot(seg[:, 0], seg[:, 1]))),
              "bbox": [barrier.min(axis=0).tolist(), barrier.max(axis=0).tolist()]}
    out = _out(args)
    if out is not None:
        from .plotting import plot_barrier

        files = {"barrier": str(write_polyline_csv(out / "barrier.csv", barrier)),
                 "figure": str(plot_barrier(out / "barrier.png", c, barrier, s_D))}
        if args.svg:
            svg = out / "barrier.svg"
            svg.write_text(barrier_svg(c, barrier, c.point_at(s_D)))
            files["svg"] = str(svg)
        report["files"] = files
        write_json(out / "report.json", report)
    return report


COMMANDS = {
    "solve1v1": (cmd_solve1v1, "1v1 value, region, breaching points and optimal controls"),
    "solve2v1": (cmd_solve2v1, "2v1 pair value, region flags and pincer controls"),
    "bounds": (cmd_bounds, "team score bounds Q_MM, Q_MIS, Q_LG with assignments"),
    "simulate": (cmd_simulate, "run the simulation and write a trace"),
    "montecarlo": (cmd_montecarlo, "random instances: bound chain and soundness statistics"),
    "oracle": (cmd_oracle, "agreement statistics against independent validators"),
    "barrier": (cmd_barrier, "sample the 1v1 barrier for a defender"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH", help="scenario JSON file")
    common.add_argument("--out", metavar="DIR", help="write reports, data and figures here")
    common.add_argument("--seed", type=int, help="rng seed (overrides the scenario)")
    common.add_argument("--dt", type=float, help="time step")
    common.add_argument("--tmax", type=float, help="time horizon")
    common.add_argument("--eps", type=float, help="capture radius")
    common.add_argument("--svg", action="store_true", help="also write SVG output")
    common.add_argument("--grid", type=int, metavar="N", help="sampling resolution")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="perimeter-defense", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=helptext)
               for name, (_, helptext) in COMMANDS.items()}
    for name in ("solve1v1", "barrier"):
        parsers[name].add_argument("--defender", type=int, default=0, help="defender index")
    for name in ("solve1v1", "solve2v1"):
        parsers[name].add_argument("--intruder", type=int, default=0, help="intruder index")
    parsers["solve2v1"].add_argument("--pair", type=int, nargs=2, default=(0, 1), metavar=("I", "J"))
    parsers["simulate"].add_argument("--frames", type=int, default=8, help="number of SVG frames")
    mc = parsers["montecarlo"]
    mc.add_argument("--instances", type=int)
    mc.add_argument("--workers", type=int)
    mc.add_argument("--no-sim", action="store_true", help="bounds only, skip simulations")
    mc.add_argument("--gap", action="store_true", help="also search for an instance with Q_MIS < Q_MM")
    mc.add_argument("--gap-samples", type=int, default=10_000)
    orc = parsers["oracle"]
    orc.add_argument("--samples", type=int, default=500)
    orc.add_argument("--skip-minimax", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    fn = COMMANDS[args.command][0]
    try:
        report = fn(args)
    except (ScenarioError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(to_json(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
