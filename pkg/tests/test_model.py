import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fishgame.errors import MeaninglessMargin, NonPositiveParameter, NotRealistic, StockDepleted
from fishgame.model import (
    MarketStockParams,
    endogenous_state,
    feasible_field,
    feasible_interval,
    threshold_sensitivities,
    threshold_value,
    validate,
    viability_margin,
    viability_threshold,
    viability_threshold_oracle,
)

from conftest import REF, REF_T, SHARED, random_valid_draws

DRAWS = random_valid_draws(100, seed=1)


def test_zero_yield_state():
    st_ = endogenous_state(SHARED, REF, 0.0, 0.0)
    assert (st_.S, st_.P, st_.I, st_.E) == (1000.0, 10.0, 0.0, 0.0)


def test_direct_substitution():
    st_ = endogenous_state(SHARED, REF, 400.0, 0.0)
    assert st_.S == 600.0
    assert st_.P == pytest.approx(6.0)
    assert st_.f == pytest.approx(1 + 100 / 600)
    assert st_.E == pytest.approx(400 / 6)
    assert st_.I == pytest.approx(400 * (6 - 1 - 100 / 600 - 1))


def test_stock_depleted():
    with pytest.raises(StockDepleted):
        endogenous_state(SHARED, REF, 600.0, 500.0)


def test_zero_yield_interval_is_point():
    iv = feasible_interval(SHARED, REF, 0.0, 0.0)
    assert (iv.k_min, iv.k_max, iv.empty) == (0.0, 0.0, False)


def test_reference_interval_nonempty():
    iv = feasible_interval(SHARED, REF, 400.0, 0.0)
    st_ = endogenous_state(SHARED, REF, 400.0, 0.0)
    assert iv.k_min < iv.k_max
    assert iv.k_min * REF.p * REF.k <= st_.I


def test_reference_interval_empty_beyond_threshold():
    assert feasible_interval(SHARED, REF, 800.0, 0.0).empty


def test_zero_finance_gives_unbounded_capacity():
    free = replace(REF, k=0.0)
    assert feasible_interval(SHARED, free, 400.0).k_max == math.inf
    assert feasible_interval(SHARED, free, 900.0).empty


def test_reference_threshold_golden():
    vr = viability_threshold(SHARED, REF)
    # normalized quadratic Y^2 - 1800 Y + 780000
    assert vr.quad_b / vr.quad_a == pytest.approx(-1800.0, rel=1e-12)
    assert vr.quad_c / vr.quad_a == pytest.approx(780000.0, rel=1e-12)
    assert vr.threshold == pytest.approx(REF_T, rel=1e-12)
    assert vr.threshold == pytest.approx(726.8, abs=0.05)
    assert vr.valid


def test_reference_threshold_matches_oracle():
    step = SHARED.max_total / 100_000
    assert abs(viability_threshold_oracle(SHARED, REF) - REF_T) <= step


@pytest.mark.parametrize("r, expected", [(1000.0, 800.0), (500.0, 500.0)])
def test_degenerate_threshold(r, expected):
    shared = replace(SHARED, r=r)
    free = replace(REF, h=0.0, k=0.0)
    assert viability_threshold(shared, free).threshold == pytest.approx(expected, rel=1e-12)


def test_oracle_trivial_case():
    free = replace(REF, h=0.0, k=0.0)
    assert abs(viability_threshold_oracle(SHARED, free) - 800.0) <= SHARED.max_total / 1e5


def test_oracle_resolution_floor():
    with pytest.raises(ValueError):
        viability_threshold_oracle(SHARED, REF, resolution=999)


def test_meaningless_margin_and_unrealistic():
    with pytest.raises(MeaninglessMargin):
        viability_threshold(MarketStockParams(5, 0.01, 1000, 1), replace(REF, g=3, m=3))
    with pytest.raises(NotRealistic):
        viability_threshold(SHARED, replace(REF, k=100.0))


@pytest.mark.parametrize("shared, player", DRAWS[:100])
def test_oracle_agreement_random(shared, player):
    step = shared.max_total / 100_000
    closed = viability_threshold(shared, player).threshold
    assert abs(viability_threshold_oracle(shared, player) - closed) <= step


def test_root_bracketing_and_residual():
    for shared, player in DRAWS:
        vr = viability_threshold(shared, player)
        assert vr.delta > 0
        assert vr.t1 < shared.max_total < vr.t2
        terms = (abs(vr.quad_a) * vr.t1 ** 2, abs(vr.quad_b) * vr.t1, abs(vr.quad_c))
        resid = vr.quad_a * vr.t1 ** 2 + vr.quad_b * vr.t1 + vr.quad_c
        assert abs(resid) <= 1e-9 * max(terms)


@pytest.mark.parametrize("c", [0.1, 10.0, 1000.0])
def test_product_invariance(c):
    for shared, player in DRAWS[:20]:
        base = viability_threshold(shared, player).threshold
        scaled = viability_threshold(shared, replace(player, p=player.p * c, k=player.k / c)).threshold
        assert scaled == pytest.approx(base, rel=1e-12)


def _fd(shared, player, name, rel=1e-6):
    if name == "l":
        # dT/dl = -dT/dm
        h = rel * player.margin(shared)
        up = threshold_value(shared, replace(player, m=player.m - h))
        dn = threshold_value(shared, replace(player, m=player.m + h))
        return (up - dn) / (2 * h)
    x = getattr(player, name)
    h = rel * x
    up = threshold_value(shared, replace(player, **{name: x + h}))
    dn = threshold_value(shared, replace(player, **{name: x - h}))
    return (up - dn) / (2 * h)


def test_sensitivities_match_finite_differences():
    for shared, player in DRAWS:
        sens = threshold_sensitivities(shared, player)
        assert sens.dT_dq == pytest.approx(_fd(shared, player, "q"), rel=1e-5)
        assert sens.dT_dk == pytest.approx(_fd(shared, player, "k"), rel=1e-5)
        assert sens.dT_dl == pytest.approx(_fd(shared, player, "l"), rel=1e-5)
        assert sens.dT_dq > 0 > sens.dT_dk and sens.dT_dl > 0


def test_reference_sensitivity_signs():
    sens = threshold_sensitivities(SHARED, REF)
    assert (sens.dT_dq > 0, sens.dT_dk < 0, sens.dT_dl > 0) == (True, True, True)


def test_zero_return_sensitivities():
    free = replace(REF, k=0.0)
    sens = threshold_sensitivities(SHARED, free)
    delta = viability_threshold(SHARED, free).delta
    assert sens.dT_dq == 0.0
    assert sens.dT_dk == pytest.approx(-free.p / math.sqrt(delta))


@settings(max_examples=200, deadline=None)
@given(total=st.floats(1.0, 990.0), frac=st.floats(0.01, 1.0), frac2=st.floats(0.01, 1.0))
def test_feasibility_depends_only_on_total(total, frac, frac2):
    a = feasible_interval(SHARED, REF, total * frac, total * (1 - frac)).empty
    b = feasible_interval(SHARED, REF, total * frac2, total * (1 - frac2)).empty
    assert a == b
    assert a == (viability_margin(SHARED, REF, total) < 0)


@settings(max_examples=200, deadline=None)
@given(y1=st.floats(0.0, 999.0), y2=st.floats(0.0, 999.0))
def test_monotone_feasibility(y1, y2):
    lo, hi = sorted((y1, y2))
    if hi > 0 and not feasible_interval(SHARED, REF, hi).empty:
        assert not feasible_interval(SHARED, REF, lo).empty


def _ref_grid():
    ys = np.linspace(0, 1000, 201)
    ks = np.linspace(0, 200, 201)
    return ys, ks


def test_field_cells_inside_interval():
    ys, ks = _ref_grid()
    raster = feasible_field(SHARED, REF, ys, ks, "capacity")
    for i, y in enumerate(ys):
        cols = np.flatnonzero(raster.feasible[i])
        if cols.size:
            iv = feasible_interval(SHARED, REF, y)
            assert np.all(ks[cols] >= iv.k_min) and np.all(ks[cols] <= iv.k_max)
            assert np.allclose(raster.values[i, cols], ks[cols])


def test_field_degenerate_finance():
    free = replace(REF, h=0.0, k=0.0)
    ys, ks = _ref_grid()
    raster = feasible_field(SHARED, free, ys, ks, "yield")
    Y, K = np.meshgrid(ys, ks, indexing="ij")
    with np.errstate(divide="ignore"):
        expected = (K >= Y / (free.q * (SHARED.r - SHARED.s * Y))) & (Y <= 800.0)
    expected[0] = ks == 0  # zero yield: only zero capacity
    assert np.array_equal(raster.feasible, expected)


def test_field_profit_argmax_below_threshold():
    ys = np.linspace(0, 800, 801)
    ks = np.linspace(0, 200, 401)
    raster = feasible_field(SHARED, REF, ys, ks, "profit")
    i, _ = np.unravel_index(np.nanargmax(raster.values), raster.values.shape)
    assert 0 < ys[i] < REF_T


def test_field_rate_of_return_max_on_lower_boundary():
    ys, ks = _ref_grid()
    raster = feasible_field(SHARED, REF, ys, ks, "rate_of_return")
    for i in range(1, len(ys)):
        row = raster.values[i]
        if np.any(~np.isnan(row)):
            assert np.nanargmax(row) == np.flatnonzero(~np.isnan(row))[0]


def test_field_rejects_unknown_kind():
    with pytest.raises(ValueError):
        feasible_field(SHARED, REF, [1.0], [1.0], "biomass")


def test_validate():
    assert validate(SHARED, REF) == []
    problems = validate(MarketStockParams(5, 0.01, 1000, 1), replace(REF, g=3, m=3))
    assert [type(p) for p in problems] == [MeaninglessMargin]
    problems = validate(replace(SHARED, b=0.0), REF)
    assert [type(p) for p in problems] == [NonPositiveParameter]
    problems = validate(SHARED, replace(REF, k=100.0))
    assert [type(p) for p in problems] == [NotRealistic]


def test_validate_reports_all_positivity_violations():
    problems = validate(replace(SHARED, b=0.0, r=-1.0), replace(REF, q=0.0, h=-1.0))
    assert len(problems) == 4
    assert all(isinstance(p, NonPositiveParameter) for p in problems)
