"""Scenario documents, sweeps and deterministic CSV/JSON rendering.

A scenario is one JSON object::

    {
      "market":  {"a": 10, "b": 0.01},
      "stock":   {"r": 1000, "s": 1},
      "players": [{"id": "A", "q": .., "g": .., "h": .., "m": .., "p": .., "k": ..}, {...}],
      "objective": "profit" | "capacity",
      "solver":  {"tol": .., "eq_tol": .., "max_iters": 500, "init": [yA, yB] | null},
      "grid":    {"y_max": .. | null, "steps": 201}
    }

``solver`` and ``grid`` are optional. ``init`` and ``y_max`` stay ``null``
when left to the solver (a quarter of each threshold, and 1.05 times the
larger threshold respectively).
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .bargaining import bargaining_set, payoff_grid
from .errors import (
    FisheryError,
    MeaninglessMargin,
    NotRealistic,
    NonViableScenario,
    ParseError,
    PathError,
    UnknownField,
    ValidationError,
)
from .gnep import OBJECTIVES, GameConfig, solve_equilibrium
from .model import MarketStockParams, PlayerParams, validate, viability_threshold

TOP_KEYS = {"market", "stock", "players", "objective", "solver", "grid"}
BLOCK_KEYS = {
    "market": ("a", "b"),
    "stock": ("r", "s"),
    "solver": ("tol", "eq_tol", "max_iters", "init"),
    "grid": ("y_max", "steps"),
}
PLAYER_KEYS = ("id", "q", "g", "h", "m", "p", "k")
SWEEP_QUANTITIES = ("threshold", "equilibrium_yields", "bargaining_empty")


@dataclass(frozen=True)
class Scenario:
    shared: MarketStockParams
    players: tuple
    objective: str = "profit"
    tol: Optional[float] = None
    eq_tol: Optional[float] = None
    max_iters: int = 500
    init: Optional[tuple] = None
    y_max: Optional[float] = None
    steps: int = 201

    def config(self) -> GameConfig:
        return GameConfig(self.shared, self.players[0], self.players[1], self.objective,
                          tol=self.tol, eq_tol=self.eq_tol, max_iters=self.max_iters,
                          init=self.init)

    def to_dict(self) -> dict:
        sh = self.shared
        return {
            "market": {"a": sh.a, "b": sh.b},
            "stock": {"r": sh.r, "s": sh.s},
            "players": [{key: getattr(p, key) for key in PLAYER_KEYS} for p in self.players],
            "objective": self.objective,
            "solver": {"tol": self.tol, "eq_tol": self.eq_tol, "max_iters": self.max_iters,
                       "init": list(self.init) if self.init is not None else None},
            "grid": {"y_max": self.y_max, "steps": self.steps},
        }


def _check_keys(block, allowed, where):
    if not isinstance(block, dict):
        raise ParseError(f"{where} must be an object")
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise UnknownField(f"unknown field(s) in {where}: {', '.join(unknown)}")


def _number(block, key, where, required=True, default=None):
    if key not in block or block[key] is None:
        if required:
            raise ParseError(f"missing {where}.{key}")
        return default
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}.{key} must be a number")
    if not math.isfinite(value):
        raise ParseError(f"{where}.{key} must be finite")
    return value


def scenario_from_dict(doc) -> Scenario:
    _check_keys(doc, TOP_KEYS, "scenario")
    for key in ("market", "stock", "players"):
        if key not in doc:
            raise ParseError(f"missing block {key!r}")
    for key in ("market", "stock"):
        _check_keys(doc[key], BLOCK_KEYS[key], key)
    shared = MarketStockParams(
        a=_number(doc["market"], "a", "market"), b=_number(doc["market"], "b", "market"),
        r=_number(doc["stock"], "r", "stock"), s=_number(doc["stock"], "s", "stock"))

    players = doc["players"]
    if not isinstance(players, list) or len(players) != 2:
        raise ParseError("players must be a list of exactly two objects")
    parsed = []
    for n, block in enumerate(players):
        where = f"players[{n}]"
        _check_keys(block, PLAYER_KEYS, where)
        pid = block.get("id", "AB"[n])
        if not isinstance(pid, str) or not pid:
            raise ParseError(f"{where}.id must be a non-empty string")
        parsed.append(PlayerParams(pid, *(_number(block, key, where) for key in PLAYER_KEYS[1:])))
    if parsed[0].id == parsed[1].id:
        raise ParseError("player ids must differ")

    objective = doc.get("objective", "profit")
    if objective not in OBJECTIVES:
        raise ParseError(f"objective must be one of {OBJECTIVES}")

    solver = doc.get("solver") or {}
    _check_keys(solver, BLOCK_KEYS["solver"], "solver")
    tol = _number(solver, "tol", "solver", required=False)
    if tol is None:
        tol = 1e-6 * shared.r / shared.s if shared.s > 0 else None
    eq_tol = _number(solver, "eq_tol", "solver", required=False)
    if eq_tol is None:
        eq_tol = tol
    max_iters = solver.get("max_iters", 500)
    if isinstance(max_iters, bool) or not isinstance(max_iters, int) or max_iters < 1:
        raise ParseError("solver.max_iters must be a positive integer")
    init = solver.get("init")
    if init is not None:
        if (not isinstance(init, list) or len(init) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in init)):
            raise ParseError("solver.init must be a pair of numbers")
        if min(init) < 0:
            raise ParseError("solver.init yields must be >= 0")
        init = tuple(init)
    if tol is not None and tol <= 0:
        raise ParseError("solver.tol must be > 0")

    grid = doc.get("grid") or {}
    _check_keys(grid, BLOCK_KEYS["grid"], "grid")
    y_max = _number(grid, "y_max", "grid", required=False)
    if y_max is not None and y_max <= 0:
        raise ParseError("grid.y_max must be > 0")
    steps = grid.get("steps", 201)
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise ParseError("grid.steps must be an integer >= 2")

    violations = []
    for p in parsed:
        violations.extend(validate(shared, p))
    if violations:
        if all(isinstance(v, (MeaninglessMargin, NotRealistic)) for v in violations):
            raise NonViableScenario(violations)
        raise ValidationError(violations)
    return Scenario(shared, tuple(parsed), objective, tol, eq_tol, max_iters, init, y_max, steps)


def load_scenario(data) -> Scenario:
    """Parse and validate a scenario from bytes or text, filling solver/grid defaults."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"scenario is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return scenario_from_dict(doc)


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def set_path(scenario: Scenario, path: str, value) -> Scenario:
    """Return a new validated scenario with the numeric field at ``path`` replaced.

    Paths look like ``market.a``, ``stock.r``, ``solver.tol`` or
    ``players.<id or index>.<param>``.
    """
    doc = copy.deepcopy(scenario.to_dict())
    parts = path.split(".")
    if parts[0] == "players" and len(parts) == 3:
        ids = [p["id"] for p in doc["players"]]
        if parts[1] in ids:
            block = doc["players"][ids.index(parts[1])]
        elif parts[1] in ("0", "1"):
            block = doc["players"][int(parts[1])]
        else:
            raise PathError(f"no player {parts[1]!r} in path {path!r}")
        key = parts[2]
    elif len(parts) == 2 and parts[0] in BLOCK_KEYS:
        block, key = doc[parts[0]], parts[1]
    else:
        raise PathError(f"cannot resolve parameter path {path!r}")
    if key == "id" or key not in block or key == "init":
        raise PathError(f"{path!r} does not name a numeric scalar")
    current = block[key]
    if current is not None and (isinstance(current, bool) or not isinstance(current, (int, float))):
        raise PathError(f"{path!r} does not name a numeric scalar")
    block[key] = int(value) if key in ("max_iters", "steps") else float(value)
    return scenario_from_dict(doc)


def get_path(scenario: Scenario, path: str):
    parts = path.split(".")
    doc = scenario.to_dict()
    if parts[0] == "players" and len(parts) == 3:
        for n, p in enumerate(doc["players"]):
            if parts[1] in (p["id"], str(n)):
                if parts[2] in p and parts[2] != "id":
                    return p[parts[2]]
    elif len(parts) == 2 and parts[0] in BLOCK_KEYS and parts[1] in doc[parts[0]]:
        return doc[parts[0]][parts[1]]
    raise PathError(f"cannot resolve parameter path {path!r}")


@dataclass(frozen=True)
class SweepSpec:
    path: str
    start: float
    stop: float
    steps: int
    quantity: str = "threshold"

    def __post_init__(self):
        if not self.start < self.stop:
            raise ValueError("sweep requires from < to")
        if self.steps < 2:
            raise ValueError("sweep requires steps >= 2")
        if self.quantity not in SWEEP_QUANTITIES:
            raise ValueError(f"quantity must be one of {SWEEP_QUANTITIES}")

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)


def sweep(scenario: Scenario, spec: SweepSpec):
    """Evaluate ``spec.quantity`` for each lever value.

    Returns ``(header, rows)``. Points where the model is invalid or the
    solver fails carry the error class name in the ``status`` column.
    """
    get_path(scenario, spec.path)
    ids = [p.id for p in scenario.players]
    if spec.quantity == "threshold":
        cols = [f"t_{ids[0]}", f"t_{ids[1]}"]
    elif spec.quantity == "equilibrium_yields":
        cols = [f"y_{ids[0]}", f"y_{ids[1]}", "excluded"]
    else:
        cols = ["empty"]
    header = ["value", *cols, "status"]
    rows = []
    for value in spec.values():
        value = float(value)
        try:
            point = set_path(scenario, spec.path, value)
            cfg = point.config()
            if spec.quantity == "threshold":
                cells = [viability_threshold(cfg.shared, p).threshold for p in point.players]
            elif spec.quantity == "equilibrium_yields":
                eq = solve_equilibrium(cfg)
                cells = [eq.strategy_a.y, eq.strategy_b.y, eq.excluded or ""]
            else:
                surfaces = payoff_grid(cfg, steps=point.steps, y_max=point.y_max)
                cells = [bargaining_set(cfg, surfaces).empty]
            rows.append([value, *cells, "ok"])
        except FisheryError as exc:
            rows.append([value, *([None] * len(cols)), type(exc).__name__])
    return header, rows


def fmt(value):
    """Render one CSV cell: 12 significant digits, 1/0 booleans, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def jsonable(obj):
    """Round floats to 12 significant digits; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return float(f"{obj:.12g}") if math.isfinite(obj) else None
    return obj


def to_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2) + "\n"


def with_objective(scenario: Scenario, objective: str) -> Scenario:
    return replace(scenario, objective=objective)
