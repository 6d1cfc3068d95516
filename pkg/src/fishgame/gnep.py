"""Two-player game in which each player's strategy set depends on the rival.

Strategies are (yield, capacity) pairs. A player is viable only while the
total yield stays below its own viability threshold, so a rival can shrink,
or empty, the other's feasible set. Two objectives are supported:

* ``profit``   -- maximize ``I`` at minimal feasible capacity;
* ``capacity`` -- run the fleet at full utilization and push yield to the
  player's own threshold, i.e. the largest capacity it can still finance.

Equilibria are found by alternating best responses (A first, then B).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import NonConvergence, Unachievable
from .model import (
    MarketStockParams,
    PlayerParams,
    check_valid,
    threshold_value,
    viability_threshold,
)
from .optimize import bisect_increasing, scan_then_golden

OBJECTIVES = ("profit", "capacity")
LEVERS = ("rate_of_return", "efficiency", "cost_margin")


@dataclass(frozen=True)
class GameConfig:
    shared: MarketStockParams
    player_a: PlayerParams
    player_b: PlayerParams
    objective: str = "profit"
    tol: Optional[float] = None
    eq_tol: Optional[float] = None
    max_iters: int = 500
    init: Optional[tuple] = None
    n_scan: int = 1025

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.init is not None and min(self.init) < 0:
            raise ValueError("initial yields must be >= 0")
        if self.n_scan < 1024:
            raise ValueError("n_scan must be >= 1024")

    @property
    def tolerance(self):
        return self.tol if self.tol is not None else 1e-6 * self.shared.max_total

    @property
    def equality_tolerance(self):
        return self.eq_tol if self.eq_tol is not None else 1e-6 * self.shared.max_total

    def player(self, pid):
        if pid in ("A", self.player_a.id):
            return self.player_a
        if pid in ("B", self.player_b.id):
            return self.player_b
        raise KeyError(f"unknown player {pid!r}")

    def rival(self, pid):
        return self.player_b if self.player(pid) is self.player_a else self.player_a

    def thresholds(self):
        return (viability_threshold(self.shared, self.player_a).threshold,
                viability_threshold(self.shared, self.player_b).threshold)

    def validate(self):
        check_valid(self.shared, self.player_a)
        check_valid(self.shared, self.player_b)

    def with_player(self, new: PlayerParams, slot="A"):
        if slot == "A":
            return replace(self, player_a=new)
        return replace(self, player_b=new)


@dataclass(frozen=True)
class Strategy:
    y: float
    capacity: float
    payoff: float
    alive: bool = True


DEAD = Strategy(0.0, 0.0, 0.0, alive=False)


@dataclass
class EquilibriumResult:
    strategy_a: Strategy
    strategy_b: Strategy
    iterations: int
    trace: list
    converged: bool
    degenerate_continuum: bool = False
    excluded: Optional[str] = None

    @property
    def payoffs(self):
        return self.strategy_a.payoff, self.strategy_b.payoff


@dataclass(frozen=True)
class RegimeReport:
    t_a: float
    t_b: float
    regime: str
    gap: float
    dominant: Optional[str]
    dominant_optimum: Optional[float]
    objective: str
    outcome: str
    coexistence: bool
    bargaining_empty: bool


@dataclass(frozen=True)
class EqualizeResult:
    player: PlayerParams
    lever: str
    parameter: str
    original: float
    value: float
    target_threshold: float
    threshold: float


def _profit_curve(shared, me, rival_yield):
    def profit(y):
        total = y + rival_yield
        S = shared.r - shared.s * total
        return y * (shared.a - shared.b * total - me.g - me.h / S - me.m)
    return profit


def _capacity_at(shared, me, y, rival_yield):
    return y / (me.q * (shared.r - shared.s * (y + rival_yield)))


def best_response(config: GameConfig, me, rival_yield: float, threshold=None) -> Strategy:
    """Optimal (yield, capacity) for player ``me`` against a fixed rival yield.

    The own yield is restricted to ``[0, T_me - rival_yield]``; if that range
    is empty the dead strategy is returned.
    """
    if rival_yield < 0:
        raise ValueError("rival_yield must be >= 0")
    player = config.player(me)
    shared = config.shared
    t_me = threshold if threshold is not None else viability_threshold(shared, player).threshold
    room = t_me - rival_yield
    if room <= 0:
        return DEAD
    if config.objective == "capacity":
        capacity = _capacity_at(shared, player, room, rival_yield)
        return Strategy(room, capacity, capacity)
    y, profit = scan_then_golden(_profit_curve(shared, player, rival_yield), 0.0, room,
                                 n_scan=config.n_scan)
    y = float(y)
    return Strategy(y, _capacity_at(shared, player, y, rival_yield), float(profit))


def solve_equilibrium(config: GameConfig) -> EquilibriumResult:
    """Alternating best-response iteration.

    The trace holds the starting point followed by both half-steps of every
    round. A player that dies keeps ``(0, 0, 0)`` for the rest of the run.
    Raises :class:`NonConvergence` (carrying the trace) after ``max_iters``.
    """
    config.validate()
    t_a, t_b = config.thresholds()
    tol = config.tolerance
    y_a, y_b = config.init if config.init is not None else (t_a / 4.0, t_b / 4.0)
    y_a, y_b = float(y_a), float(y_b)
    trace = [(y_a, y_b)]
    s_a = s_b = None
    alive_a = alive_b = True
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        s_a = best_response(config, "A", y_b, t_a) if alive_a else DEAD
        alive_a = s_a.alive
        new_a = s_a.y
        trace.append((new_a, y_b))
        s_b = best_response(config, "B", new_a, t_b) if alive_b else DEAD
        alive_b = s_b.alive
        new_b = s_b.y
        trace.append((new_a, new_b))
        step = max(abs(new_a - y_a), abs(new_b - y_b))
        y_a, y_b = new_a, new_b
        if step < tol:
            converged = True
            break
    if not converged:
        raise NonConvergence(
            f"best-response iteration did not converge in {config.max_iters} rounds", trace)
    # refresh A against B's final move so both strategies are mutual responses
    if alive_a:
        s_a = best_response(config, "A", y_b, t_a)
    excluded = None
    if not s_b.alive:
        excluded = config.player_b.id
    elif not s_a.alive:
        excluded = config.player_a.id
    degenerate = config.objective == "capacity" and abs(t_a - t_b) <= config.equality_tolerance
    return EquilibriumResult(s_a, s_b, it, trace, True, degenerate, excluded)


_OUTCOMES = {
    ("equal", "profit"): "single equilibrium, both systems co-exist; bargaining space non-empty",
    ("slight", "profit"): "single equilibrium, both systems co-exist; bargaining space non-empty",
    ("different", "profit"): "single equilibrium, dominant system alone survives; bargaining space empty",
    ("equal", "capacity"): "continuum of equilibria, any split of the common threshold; "
                           "bargaining space covers all viable pairs",
    ("slight", "capacity"): "single equilibrium, dominant system alone survives; bargaining space empty",
    ("different", "capacity"): "single equilibrium, dominant system alone survives; bargaining space empty",
}


def classify_regime(config: GameConfig, equality_tolerance=None, slight_gap_bound=None) -> RegimeReport:
    """Place a configuration in the equal / slight / different threshold table.

    Unequal thresholds are ``slight`` when the dominant player's profit
    optimum (rival absent) stays at or below the rival's threshold, so both
    can co-exist under profit maximization, and ``different`` otherwise.
    Passing ``slight_gap_bound`` replaces that test by ``gap <= bound``.
    """
    t_a, t_b = config.thresholds()
    eq_tol = config.equality_tolerance if equality_tolerance is None else equality_tolerance
    gap = abs(t_a - t_b)
    dominant = optimum = None
    if gap <= eq_tol:
        regime = "equal"
    else:
        dominant, t_dom, t_low = ("A", t_a, t_b) if t_a > t_b else ("B", t_b, t_a)
        profit_game = replace(config, objective="profit")
        optimum = best_response(profit_game, dominant, 0.0, t_dom).y
        if slight_gap_bound is not None:
            regime = "slight" if gap <= slight_gap_bound else "different"
        else:
            regime = "slight" if optimum <= t_low else "different"
        dominant = config.player(dominant).id
    key = (regime, config.objective)
    coexist = regime != "different" if config.objective == "profit" else regime == "equal"
    return RegimeReport(t_a, t_b, regime, gap, dominant, optimum, config.objective,
                        _OUTCOMES[key], coexist, not coexist)


def _lever_range(shared, player, lever):
    """Parameter name, direction of T, and hard domain bounds for a lever."""
    if lever == "rate_of_return":
        return "k", -1, 0.0, math.inf
    if lever == "efficiency":
        return "q", +1, 0.0, math.inf
    if lever == "cost_margin":
        return "m", -1, 0.0, shared.a - player.g
    raise ValueError(f"lever must be one of {LEVERS}, got {lever!r}")


def equalize(config_or_shared, lever, target, target_threshold, player=None) -> EqualizeResult:
    """Find the lever value giving ``target`` the requested viability threshold.

    Levers: ``rate_of_return`` moves ``k``, ``efficiency`` moves ``q``, and
    ``cost_margin`` moves the margin ``l = a - g - m`` through ``m``. The
    threshold is monotone in each, so the value is found by bisection.
    Accepts either a :class:`GameConfig` plus a player id, or the shared
    parameters with ``player`` given explicitly.
    """
    if isinstance(config_or_shared, GameConfig):
        shared = config_or_shared.shared
        me = config_or_shared.player(target)
    else:
        shared, me = config_or_shared, player
    name, sign, lo_bound, hi_bound = _lever_range(shared, me, lever)
    current = getattr(me, name)

    def thr(value):
        return threshold_value(shared, replace(me, **{name: value}))

    def fit(value):
        th = thr(value)
        return EqualizeResult(replace(me, **{name: value}), lever, name, current, value,
                              target_threshold, th)

    if not target_threshold > 0:
        raise Unachievable("target threshold must be positive")
    if thr(current) == target_threshold:
        return fit(current)

    # g(x) = sign * T(x) is increasing in x
    def g(x):
        return sign * thr(x)

    goal = sign * target_threshold
    unreachable = Unachievable(f"threshold {target_threshold:g} not reachable through {lever}")
    if math.isinf(hi_bound):
        lo = hi = current if current > 0 else 1.0
        for _ in range(400):
            if g(hi) >= goal:
                break
            hi *= 2.0
        else:
            raise unreachable
        for _ in range(1100):
            if g(lo) <= goal:
                break
            lo *= 0.5
        else:
            raise unreachable
    else:
        lo, hi = lo_bound, hi_bound
        if not g(lo) <= goal <= g(hi):
            raise unreachable
    value = bisect_increasing(g, goal, lo, hi)
    if not np.isclose(thr(value), target_threshold, rtol=1e-9, atol=0.0):
        raise unreachable
    return fit(value)
