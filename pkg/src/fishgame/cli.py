"""Command-line entry point: ``fishgame <command> SCENARIO [options]``.

Exit codes: 0 success, 2 invalid scenario or arguments, 3 non-viable system,
4 solver did not converge, 5 analysis not applicable.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .bargaining import bargaining_set, payoff_grid, yield_sharing_line
from .errors import (
    FisheryError,
    MeaninglessMargin,
    NonConvergence,
    NonViableScenario,
    NotApplicable,
    NotRealistic,
    Unachievable,
)
from .gnep import LEVERS, classify_regime, equalize, solve_equilibrium
from .model import (
    FIELD_KINDS,
    feasible_field,
    feasible_interval,
    threshold_sensitivities,
    viability_threshold,
)
from .scenario import (
    SWEEP_QUANTITIES,
    SweepSpec,
    dump_scenario,
    load_scenario,
    sweep,
    to_csv,
    to_json,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONVIABLE = 3
EXIT_NONCONVERGENCE = 4
EXIT_NOT_APPLICABLE = 5


def exit_code_for(exc) -> int:
    if isinstance(exc, (NonViableScenario, NotRealistic, MeaninglessMargin)):
        return EXIT_NONVIABLE
    if isinstance(exc, NonConvergence):
        return EXIT_NONCONVERGENCE
    if isinstance(exc, (NotApplicable, Unachievable)):
        return EXIT_NOT_APPLICABLE
    return EXIT_INVALID


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def _emit_many(artifacts, out, primary):
    """Write all artifacts under directory ``out``, or only ``primary`` to stdout."""
    if out is None:
        sys.stdout.write(artifacts[primary])
        return
    folder = Path(out)
    folder.mkdir(parents=True, exist_ok=True)
    for name in sorted(artifacts):
        (folder / name).write_text(artifacts[name], encoding="utf-8")


def _player_threshold(shared, player):
    vr = viability_threshold(shared, player)
    sens = threshold_sensitivities(shared, player)
    return {"id": player.id, "l": player.margin(shared), **asdict(vr),
            "threshold": vr.threshold, "valid": vr.valid, "sensitivities": asdict(sens)}


def cmd_threshold(scenario, args):
    doc = {"players": [_player_threshold(scenario.shared, p) for p in scenario.players]}
    _emit(to_json(doc), args.out)


def cmd_field(scenario, args):
    cfg = scenario.config()
    me = cfg.player(args.player)
    steps = args.grid_steps or scenario.steps
    t_me = viability_threshold(cfg.shared, me).threshold
    y_max = scenario.y_max or 1.05 * t_me
    yields = np.linspace(0.0, y_max, steps)
    top = 0.0
    for y in yields:
        try:
            iv = feasible_interval(cfg.shared, me, y, args.y_rival)
        except FisheryError:
            continue
        if not iv.empty:
            top = max(top, iv.k_max if np.isfinite(iv.k_max) else 2.0 * iv.k_min)
    capacities = np.linspace(0.0, 1.1 * top if top > 0 else 1.0, steps)
    raster = feasible_field(cfg.shared, me, yields, capacities, args.kind, args.y_rival)
    rows = []
    for i, y in enumerate(raster.yields):
        for j, k in enumerate(raster.capacities):
            v = raster.values[i, j]
            ok = not np.isnan(v)
            rows.append([y, k, ok, v if ok else None])
    _emit(to_csv(["y", "capacity", "feasible", args.kind], rows), args.out)


def _strategy(s):
    return {"y": s.y, "capacity": s.capacity, "payoff": s.payoff, "alive": s.alive}


def cmd_equilibrium(scenario, args):
    cfg = scenario.config()
    try:
        eq = solve_equilibrium(cfg)
    except NonConvergence as exc:
        if args.out is not None:
            rows = [[n, a, b] for n, (a, b) in enumerate(exc.trace)]
            _emit_many({"trace.csv": to_csv(["iter", "y_a", "y_b"], rows)}, args.out, "trace.csv")
        raise
    regime = classify_regime(cfg)
    ids = [p.id for p in scenario.players]
    doc = {
        "objective": cfg.objective,
        "strategies": {ids[0]: _strategy(eq.strategy_a), ids[1]: _strategy(eq.strategy_b)},
        "iterations": eq.iterations,
        "converged": eq.converged,
        "degenerate_continuum": eq.degenerate_continuum,
        "excluded": eq.excluded,
        "regime": asdict(regime),
    }
    trace = to_csv(["iter", "y_a", "y_b"], [[n, a, b] for n, (a, b) in enumerate(eq.trace)])
    _emit_many({"equilibrium.json": to_json(doc), "trace.csv": trace}, args.out, "equilibrium.json")


def cmd_bargain(scenario, args):
    cfg = scenario.config()
    steps = args.grid_steps or scenario.steps
    surfaces = payoff_grid(cfg, steps=steps, y_max=scenario.y_max)
    outcome = bargaining_set(cfg, surfaces, args.reference)
    doc = {
        "objective": cfg.objective,
        "reference_kind": outcome.reference_kind,
        "reference": list(outcome.reference),
        "empty": outcome.empty,
        "members": outcome.size,
        "pareto": [dict(zip(("y_a", "y_b", "payoff_a", "payoff_b"), row)) for row in outcome.pareto],
        "note": outcome.note,
    }
    if args.sharing_points is not None:
        line = yield_sharing_line(cfg, args.sharing_points)
        doc["sharing_line"] = [dict(zip(("y_a", "y_b", "capacity_a", "capacity_b"), row))
                               for row in line]
    header = ["y_a", "y_b", "feasible_a", "feasible_b", "payoff_a", "payoff_b"]
    surface_csv = to_csv(header, surfaces.rows())
    _emit_many({"bargain.json": to_json(doc), "surfaces.csv": surface_csv}, args.out, "bargain.json")


def cmd_equalize(scenario, args):
    cfg = scenario.config()
    res = equalize(cfg, args.lever, args.player, args.target)
    doc = {"player": res.player.id, "lever": res.lever, "parameter": res.parameter,
           "original": res.original, "value": res.value,
           "target_threshold": res.target_threshold, "threshold": res.threshold}
    if args.write_scenario:
        slot = 0 if cfg.player(args.player) is cfg.player_a else 1
        players = list(scenario.players)
        players[slot] = res.player
        Path(args.write_scenario).write_text(
            dump_scenario(replace(scenario, players=tuple(players))),
            encoding="utf-8")
    _emit(to_json(doc), args.out)


def cmd_sweep(scenario, args):
    spec = SweepSpec(args.param, args.start, args.stop, args.steps, args.quantity)
    header, rows = sweep(scenario, spec)
    _emit(to_csv(header, rows), args.out)


def build_parser():
    parser = argparse.ArgumentParser(prog="fishgame", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="scenario JSON file")
        p.add_argument("--out", help="output file (directory for equilibrium/bargain)")
        p.set_defaults(func=func)
        return p

    add("threshold", cmd_threshold, "viability thresholds and sensitivities (JSON)")

    p = add("field", cmd_field, "feasible state raster for one player (CSV)")
    p.add_argument("--player", default="A")
    p.add_argument("--kind", choices=FIELD_KINDS, default="profit")
    p.add_argument("--y-rival", type=float, default=0.0)
    p.add_argument("--grid-steps", type=int)

    add("equilibrium", cmd_equilibrium, "best-response equilibrium (JSON + trace CSV)")

    p = add("bargain", cmd_bargain, "payoff surfaces (CSV) and bargaining set (JSON)")
    p.add_argument("--grid-steps", type=int)
    p.add_argument("--reference", choices=("equilibrium", "threat"))
    p.add_argument("--sharing-points", type=int)

    p = add("equalize", cmd_equalize, "calibrate one lever to a target threshold (JSON)")
    p.add_argument("--player", default="B")
    p.add_argument("--lever", choices=LEVERS, default="rate_of_return")
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--write-scenario", help="also write the calibrated scenario here")

    p = add("sweep", cmd_sweep, "one-parameter sweep (CSV)")
    p.add_argument("--param", required=True, help="dotted path, e.g. players.A.k")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--quantity", choices=SWEEP_QUANTITIES, default="threshold")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            data = Path(args.scenario).read_bytes()
        except OSError as exc:
            print(f"error: cannot read scenario: {exc}", file=sys.stderr)
            return EXIT_INVALID
        scenario = load_scenario(data)
        args.func(scenario, args)
    except (FisheryError, ValueError, KeyError) as exc:
        kind = type(exc).__name__
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
