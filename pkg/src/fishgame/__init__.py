"""Constraint-coupled fishery games: viability thresholds, equilibria and bargaining."""

from .bargaining import (
    BargainingOutcome,
    PayoffSurfaces,
    bargaining_set,
    pareto_frontier,
    payoff_grid,
    threat_values,
    yield_sharing_line,
)
from .gnep import (
    EquilibriumResult,
    GameConfig,
    RegimeReport,
    Strategy,
    best_response,
    classify_regime,
    equalize,
    solve_equilibrium,
)
from .model import (
    EndogenousState,
    FeasibleInterval,
    FieldRaster,
    MarketStockParams,
    PlayerParams,
    Sensitivities,
    ViabilityResult,
    endogenous_state,
    feasible_field,
    feasible_interval,
    threshold_sensitivities,
    validate,
    viability_threshold,
    viability_threshold_oracle,
)
from .scenario import Scenario, SweepSpec, dump_scenario, load_scenario, sweep

__version__ = "0.1.0"
