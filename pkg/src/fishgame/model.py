"""Bioeconomic relations of a fishing system and its viability threshold.

A fishing system chooses a yield ``Y`` and a capacity ``K``. Stock, price and
unit costs respond linearly (or hyperbolically for the stock-dependent cost)
to the *total* yield taken from the shared stock. Two constraints bound the
capacity from both sides::

    Y / (q S)  <=  K  <=  I / (p k)

The lower bound is technological (effort cannot exceed capacity), the upper
one financial (profit must pay the imperative return on capital). Because the
own yield cancels from the comparison of the two bounds, feasibility depends
only on total yield, and the largest viable total is the viability threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    FisheryError,
    MeaninglessMargin,
    NonPositiveParameter,
    NotRealistic,
    StockDepleted,
)

FIELD_KINDS = ("yield", "capacity", "profit", "rate_of_return")


@dataclass(frozen=True)
class MarketStockParams:
    """Market and stock parameters shared by all players.

    a, b: maximum unit price and its decrease per unit of total yield.
    r, s: unfished biomass and its decrease per unit of total yield.
    """

    a: float
    b: float
    r: float
    s: float

    @property
    def max_total(self):
        """Total yield at which the stock vanishes."""
        return self.r / self.s


@dataclass(frozen=True)
class PlayerParams:
    id: str
    q: float  # fishing efficiency
    g: float  # fixed unit fishing cost
    h: float  # stock-dependent cost coefficient
    m: float  # unit market-access cost
    p: float  # price of one capacity unit
    k: float  # imperative rate of return

    def margin(self, shared: MarketStockParams) -> float:
        """Cost margin ``l = a - g - m``."""
        return shared.a - self.g - self.m


@dataclass(frozen=True)
class EndogenousState:
    S: float
    P: float
    f: float
    E: float
    I: float


@dataclass(frozen=True)
class FeasibleInterval:
    k_min: float
    k_max: float

    @property
    def empty(self) -> bool:
        return self.k_min > self.k_max

    def contains(self, capacity, atol=0.0):
        return self.k_min - atol <= capacity <= self.k_max + atol


@dataclass(frozen=True)
class ViabilityResult:
    quad_a: float
    quad_b: float
    quad_c: float
    delta: float
    t1: float
    t2: float

    @property
    def threshold(self) -> float:
        return self.t1

    @property
    def valid(self) -> bool:
        return self.t1 > 0


@dataclass(frozen=True)
class Sensitivities:
    dT_dq: float
    dT_dk: float
    dT_dl: float


@dataclass(frozen=True)
class FieldRaster:
    """Variable of interest over a yield x capacity lattice.

    ``values[i, j]`` belongs to ``yields[i]`` and ``capacities[j]``; NaN marks
    an infeasible cell.
    """

    yields: np.ndarray
    capacities: np.ndarray
    values: np.ndarray
    kind: str

    @property
    def feasible(self) -> np.ndarray:
        return ~np.isnan(self.values)


def endogenous_state(shared, me, y_own, y_rival=0.0) -> EndogenousState:
    if y_own < 0 or y_rival < 0:
        raise ValueError("yields must be non-negative")
    total = y_own + y_rival
    S = shared.r - shared.s * total
    if S <= 0:
        raise StockDepleted(f"stock {S:g} <= 0 at total yield {total:g}")
    P = shared.a - shared.b * total
    f = me.g + me.h / S
    E = y_own / (me.q * S)
    I = y_own * (P - f - me.m)
    return EndogenousState(S=S, P=P, f=f, E=E, I=I)


def feasible_interval(shared, me, y_own, y_rival=0.0) -> FeasibleInterval:
    """Capacity bounds for a player producing ``y_own`` next to ``y_rival``.

    Zero yield admits only zero capacity. With ``k = 0`` the finance bound
    reduces to ``I >= 0`` and the upper bound is infinite.
    """
    st = endogenous_state(shared, me, y_own, y_rival)
    if y_own == 0:
        return FeasibleInterval(0.0, 0.0)
    k_min = st.E
    finance = me.p * me.k
    if finance == 0:
        k_max = math.inf if st.I >= 0 else -math.inf
    else:
        k_max = st.I / finance
    return FeasibleInterval(k_min, k_max)


def viability_margin(shared, me, total):
    """``q S (P - f - m) - k p`` at the given total yield (array friendly).

    Non-negative exactly where a positive own yield is feasible; own yield
    has cancelled out. Totals at or beyond stock depletion map to ``-inf``.
    """
    total = np.asarray(total, dtype=float)
    S = shared.r - shared.s * total
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = shared.a - shared.b * total - me.g - me.h / S - me.m
        out = me.q * S * unit - me.k * me.p
    out = np.where(S > 0, out, -np.inf)
    return out if out.ndim else float(out)


def _quadratic(a, b, r, s, q, l, h, kp):
    A = b * q * s
    B = -q * (b * r + s * l)
    C = q * (r * l - h) - kp
    delta = q * q * (b * r - s * l) ** 2 + 4.0 * q * b * s * (q * h + kp)
    return A, B, C, delta


def _smaller_root(A, B, C, delta):
    # -B > 0 for positive margins, so the product form avoids cancellation
    root = math.sqrt(delta)
    denom = -B + root
    if denom > 0:
        return 2.0 * C / denom
    if A == 0:
        return -math.inf
    return (-B - root) / (2.0 * A)


def threshold_value(shared, me) -> float:
    """Raw smaller root of the viability quadratic, without validity checks."""
    l = me.margin(shared)
    A, B, C, delta = _quadratic(shared.a, shared.b, shared.r, shared.s, me.q, l, me.h, me.k * me.p)
    return _smaller_root(A, B, C, delta)


def viability_threshold(shared, me) -> ViabilityResult:
    """Closed-form maximal viable total yield.

    Viable totals satisfy ``A Y^2 + B Y + C >= 0`` with
    ``A = bqs``, ``B = -q(br + sl)``, ``C = q(rl - h) - kp``; the threshold
    is the smaller root, which always lies below ``r/s``.
    """
    l = me.margin(shared)
    if l <= 0:
        raise MeaninglessMargin(f"player {me.id}: cost margin l = {l:g} <= 0")
    A, B, C, delta = _quadratic(shared.a, shared.b, shared.r, shared.s, me.q, l, me.h, me.k * me.p)
    t1 = _smaller_root(A, B, C, delta)
    t2 = (-B + math.sqrt(delta)) / (2.0 * A)
    if t1 <= 0:
        raise NotRealistic(f"player {me.id}: viability threshold {t1:g} <= 0")
    return ViabilityResult(A, B, C, delta, t1, t2)


def viability_threshold_oracle(shared, me, resolution=100_000) -> float:
    """Brute-force threshold: largest feasible total on a uniform scan of [0, r/s).

    Uses only the feasible-interval bounds (rival yield zero), never the
    closed form, so the result is within one step ``r / (s * resolution)``.
    """
    if resolution < 1000:
        raise ValueError("resolution must be >= 1000")
    step = shared.max_total / resolution
    y = np.arange(resolution) * step
    S = shared.r - shared.s * y
    P = shared.a - shared.b * y
    f = me.g + me.h / S
    k_min = y / (me.q * S)
    profit = y * (P - f - me.m)
    finance = me.p * me.k
    if finance == 0:
        ok = profit >= 0
    else:
        ok = k_min <= profit / finance
    ok[0] = True  # zero yield is the point {0}
    return float(y[np.nonzero(ok)[0].max()])


def threshold_sensitivities(shared, me) -> Sensitivities:
    vr = viability_threshold(shared, me)
    l = me.margin(shared)
    root = math.sqrt(vr.delta)
    b, r, s, q = shared.b, shared.r, shared.s, me.q
    return Sensitivities(
        dT_dq=me.k * me.p / (q * root),
        dT_dk=-me.p / root,
        dT_dl=(root + q * (b * r - l * s)) / (2.0 * b * root),
    )


def feasible_field(shared, me, yields: Sequence[float], capacities: Sequence[float],
                   field_kind="profit", y_rival=0.0) -> FieldRaster:
    """Rasterize the feasible (yield, capacity) set colored by ``field_kind``.

    ``rate_of_return`` is ``I / (K p)``; it is undefined (NaN) at ``K = 0``.
    """
    if field_kind not in FIELD_KINDS:
        raise ValueError(f"unknown field kind {field_kind!r}")
    ys = np.asarray(yields, dtype=float)
    ks = np.asarray(capacities, dtype=float)
    values = np.full((ys.size, ks.size), np.nan)
    for i, y in enumerate(ys):
        try:
            iv = feasible_interval(shared, me, y, y_rival)
        except StockDepleted:
            continue
        if iv.empty:
            continue
        inside = (ks >= iv.k_min) & (ks <= iv.k_max)
        if not inside.any():
            continue
        if field_kind == "yield":
            row = np.full(ks.size, y)
        elif field_kind == "capacity":
            row = ks.copy()
        else:
            profit = endogenous_state(shared, me, y, y_rival).I
            if field_kind == "profit":
                row = np.full(ks.size, profit)
            else:
                with np.errstate(divide="ignore", invalid="ignore"):
                    row = np.where(ks > 0, profit / (ks * me.p), np.nan)
        values[i] = np.where(inside, row, np.nan)
    return FieldRaster(ys, ks, values, field_kind)


def validate(shared, me) -> list[FisheryError]:
    """Return every violation found (an empty list means valid)."""
    problems: list[FisheryError] = []
    for name in ("a", "b", "r", "s"):
        value = getattr(shared, name)
        if not value > 0:
            problems.append(NonPositiveParameter(f"{name} = {value!r} must be > 0"))
    for name in ("q", "p"):
        value = getattr(me, name)
        if not value > 0:
            problems.append(NonPositiveParameter(f"player {me.id}: {name} = {value!r} must be > 0"))
    for name in ("g", "h", "m", "k"):
        value = getattr(me, name)
        if not value >= 0:
            problems.append(NonPositiveParameter(f"player {me.id}: {name} = {value!r} must be >= 0"))
    if problems:
        return problems
    l = me.margin(shared)
    if l <= 0:
        problems.append(MeaninglessMargin(f"player {me.id}: cost margin l = {l:g} <= 0"))
        return problems
    t = threshold_value(shared, me)
    if t <= 0:
        problems.append(NotRealistic(f"player {me.id}: viability threshold {t:g} <= 0"))
    return problems


def check_valid(shared, me):
    problems = validate(shared, me)
    if problems:
        raise problems[0]
