"""Payoff surfaces over joint yields, threat points, bargaining sets and Pareto fronts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateReference, EmptyInput, NotApplicable
from .gnep import GameConfig, best_response, solve_equilibrium
from .model import viability_margin

DEFAULT_STEPS = 201


@dataclass(frozen=True)
class PayoffSurfaces:
    """Payoffs on a joint yield lattice; index ``[i, j]`` is ``(y_a[i], y_b[j])``."""

    y_a: np.ndarray
    y_b: np.ndarray
    payoff_a: np.ndarray
    payoff_b: np.ndarray
    feasible_a: np.ndarray
    feasible_b: np.ndarray

    def rows(self):
        """Row-major iteration: y_a outer, y_b inner."""
        for i, ya in enumerate(self.y_a):
            for j, yb in enumerate(self.y_b):
                yield (ya, yb, bool(self.feasible_a[i, j]), bool(self.feasible_b[i, j]),
                       self.payoff_a[i, j], self.payoff_b[i, j])


@dataclass
class BargainingOutcome:
    reference: tuple
    reference_kind: str
    membership: np.ndarray
    pareto: list
    empty: bool
    note: str = ""

    @property
    def size(self):
        return int(self.membership.sum())


def default_axis(config: GameConfig, steps=DEFAULT_STEPS, y_max=None):
    if y_max is None:
        y_max = 1.05 * max(config.thresholds())
    return np.linspace(0.0, y_max, steps)


def payoff_grid(config: GameConfig, y_a=None, y_b=None, steps=DEFAULT_STEPS, y_max=None) -> PayoffSurfaces:
    """Evaluate both payoffs on every yield pair.

    A player is feasible at a cell when its viability margin at the cell's
    total yield is non-negative; infeasible players get payoff 0. Profit
    games pay ``I``, capacity games pay the full-utilization capacity
    ``Y / (q S)``.
    """
    if y_a is None:
        y_a = default_axis(config, steps, y_max)
    if y_b is None:
        y_b = y_a
    y_a = np.asarray(y_a, dtype=float)
    y_b = np.asarray(y_b, dtype=float)
    if y_a.size > 1 and np.any(np.diff(y_a) <= 0):
        raise ValueError("yield axis must be strictly increasing")
    shared = config.shared
    YA, YB = np.meshgrid(y_a, y_b, indexing="ij")
    total = YA + YB
    S = shared.r - shared.s * total
    alive_stock = S > 0
    surfaces = []
    for me, own in ((config.player_a, YA), (config.player_b, YB)):
        feasible = alive_stock & (viability_margin(shared, me, total) >= 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            if config.objective == "profit":
                pay = own * (shared.a - shared.b * total - me.g - me.h / S - me.m)
            else:
                pay = own / (me.q * S)
        surfaces.append((np.where(feasible, pay, 0.0), feasible))
    (pa, fa), (pb, fb) = surfaces
    return PayoffSurfaces(y_a, y_b, pa, pb, fa, fb)


def threat_values(config: GameConfig):
    """Payoff each player secures when the rival fishes up to its own threshold.

    A player whose threshold does not exceed the rival's (within the
    equality tolerance) has nothing left and gets 0.
    """
    t_a, t_b = config.thresholds()
    eq_tol = config.equality_tolerance
    out = []
    for me, t_me, t_rival in (("A", t_a, t_b), ("B", t_b, t_a)):
        if t_me - t_rival <= eq_tol:
            out.append(0.0)
        else:
            out.append(best_response(config, me, t_rival, t_me).payoff)
    return tuple(out)


def default_reference(config: GameConfig):
    """Equilibrium reference, except when it is a continuum (capacity, equal thresholds)."""
    if config.objective == "profit":
        return "equilibrium"
    t_a, t_b = config.thresholds()
    if abs(t_a - t_b) <= config.equality_tolerance:
        return "threat"
    return "equilibrium"


def bargaining_set(config: GameConfig, surfaces: PayoffSurfaces, reference_kind=None,
                   equilibrium=None) -> BargainingOutcome:
    """Cells where both players strictly beat the reference payoff pair."""
    if reference_kind is None:
        reference_kind = default_reference(config)
    if reference_kind == "equilibrium":
        eq = equilibrium if equilibrium is not None else solve_equilibrium(config)
        if eq.degenerate_continuum:
            raise DegenerateReference(
                "capacity game with equal thresholds has a continuum of equilibria; "
                "use the threat reference")
        reference = eq.payoffs
    elif reference_kind == "threat":
        reference = threat_values(config)
    else:
        raise ValueError(f"unknown reference kind {reference_kind!r}")
    member = (surfaces.payoff_a > reference[0]) & (surfaces.payoff_b > reference[1])
    empty = not member.any()
    pareto = [] if empty else pareto_frontier(surfaces, member)
    note = ""
    if config.objective == "capacity" and reference_kind == "threat":
        note = "relative to the threat point; cells where either player is dead are excluded"
    return BargainingOutcome((float(reference[0]), float(reference[1])), reference_kind,
                             member, pareto, empty, note)


def pareto_frontier(surfaces: PayoffSurfaces, mask) -> list:
    """Non-dominated masked cells as ``(y_a, y_b, payoff_a, payoff_b)`` tuples.

    Both payoffs are maximized. Cells with identical payoff pairs do not
    dominate each other and are all kept. Sorted by ``y_a`` then ``y_b``.
    """
    mask = np.asarray(mask, dtype=bool)
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise EmptyInput("mask selects no cells")
    pa = surfaces.payoff_a.ravel()[idx]
    pb = surfaces.payoff_b.ravel()[idx]
    order = np.lexsort((-pb, -pa))  # payoff_a desc, then payoff_b desc
    keep = []
    best_b = -np.inf
    last = None
    for n in order:
        point = (pa[n], pb[n])
        if point[1] > best_b:
            keep.append(n)
            best_b = point[1]
            last = point
        elif point == last:
            keep.append(n)
    n_b = surfaces.y_b.size
    rows = []
    for n in keep:
        i, j = divmod(int(idx[n]), n_b)
        rows.append((float(surfaces.y_a[i]), float(surfaces.y_b[j]), float(pa[n]), float(pb[n])))
    rows.sort()
    return rows


def yield_sharing_line(config: GameConfig, n_points=11):
    """Evenly spaced splits of the common threshold for the capacity game.

    Each row is ``(y_a, y_b, capacity_a, capacity_b)``.
    """
    if config.objective != "capacity":
        raise NotApplicable("the sharing line exists only for the capacity objective")
    t_a, t_b = config.thresholds()
    if abs(t_a - t_b) > config.equality_tolerance:
        raise NotApplicable(f"thresholds differ ({t_a:g} vs {t_b:g}); no sharing line")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    total = 0.5 * (t_a + t_b)
    S = config.shared.r - config.shared.s * total
    rows = []
    for y_a in np.linspace(0.0, total, n_points):
        y_b = total - y_a
        rows.append((float(y_a), float(y_b),
                     float(y_a / (config.player_a.q * S)), float(y_b / (config.player_b.q * S))))
    return rows
