"""Regenerate the shipped scenario files under ``scenarios/``.

Both players start from the reference parameter set; the cost-margin lever
(through the market-access cost ``m``) then places A at threshold 400 and B
at 400, 300 or 200. Each regime is written for both objectives.
"""

from dataclasses import replace
from pathlib import Path

from fishgame import MarketStockParams, PlayerParams, Scenario, dump_scenario, equalize

SHARED = MarketStockParams(a=10.0, b=0.01, r=1000.0, s=1.0)
REFERENCE = PlayerParams("A", q=0.01, g=1.0, h=100.0, m=1.0, p=10.0, k=0.1)
TOL = 1e-6 * SHARED.r / SHARED.s
REGIMES = {"equal": 400.0, "slight": 300.0, "different": 200.0}


def calibrated(pid, target):
    return equalize(SHARED, "cost_margin", pid, target, player=replace(REFERENCE, id=pid)).player


def main(folder=Path(__file__).resolve().parents[1] / "scenarios"):
    folder.mkdir(exist_ok=True)
    ref_b = replace(REFERENCE, id="B")
    base = Scenario(SHARED, (REFERENCE, ref_b), "profit", TOL, TOL)
    (folder / "reference.json").write_text(dump_scenario(base))
    player_a = calibrated("A", 400.0)
    for regime, t_b in REGIMES.items():
        for objective in ("profit", "capacity"):
            sc = replace(base, players=(player_a, calibrated("B", t_b)), objective=objective)
            (folder / f"{objective}_{regime}.json").write_text(dump_scenario(sc))


if __name__ == "__main__":
    main()
