from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from fishgame import GameConfig, MarketStockParams, PlayerParams, load_scenario
from fishgame.model import threshold_value

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"

SHARED = MarketStockParams(a=10.0, b=0.01, r=1000.0, s=1.0)
REF = PlayerParams("A", q=0.01, g=1.0, h=100.0, m=1.0, p=10.0, k=0.1)
REF_T = 900.0 - 30000.0 ** 0.5  # root of Y^2 - 1800 Y + 780000


def random_valid_draws(n, seed=0, min_kp=1e-3):
    """Random (shared, player) pairs with a positive threshold well inside (0, r/s)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = rng.uniform(5, 20)
        shared = MarketStockParams(a, rng.uniform(0.002, 0.05), rng.uniform(200, 5000),
                                   rng.uniform(0.5, 2.0))
        player = PlayerParams("X", q=rng.uniform(0.002, 0.05), g=rng.uniform(0, a / 4),
                              h=rng.uniform(0, 200), m=rng.uniform(0, a / 4),
                              p=rng.uniform(1, 50), k=rng.uniform(0.01, 0.3))
        if player.k * player.p < min_kp:
            continue
        t = threshold_value(shared, player)
        if 0.02 * shared.max_total < t:
            out.append((shared, player))
    return out


def scenario(name):
    return load_scenario((SCENARIOS / f"{name}.json").read_bytes())


@pytest.fixture
def shared():
    return SHARED


@pytest.fixture
def ref():
    return REF


@pytest.fixture
def symmetric_config():
    return GameConfig(SHARED, REF, replace(REF, id="B"), "profit")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title} -- {detail}")
