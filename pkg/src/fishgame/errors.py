"""Exception hierarchy shared by every module of the package."""


class FisheryError(Exception):
    """Base class for all package errors."""


class NonPositiveParameter(FisheryError):
    pass


class MeaninglessMargin(FisheryError):
    """Raised when the cost margin ``l = a - g - m`` is not positive."""


class NotRealistic(FisheryError):
    """Raised when the viability threshold is not positive."""


class StockDepleted(FisheryError):
    """Total yield drives the stock to zero or below."""


class NonConvergence(FisheryError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class Unachievable(FisheryError):
    """Target threshold lies outside the range reachable by the lever."""


class NotApplicable(FisheryError):
    pass


class DegenerateReference(NotApplicable):
    """Equilibrium reference requested while the equilibrium is a continuum."""


class EmptyInput(FisheryError):
    pass


class ScenarioError(FisheryError):
    pass


class ParseError(ScenarioError):
    pass


class UnknownField(ScenarioError):
    pass


class PathError(ScenarioError):
    pass


class ValidationError(ScenarioError):
    """Aggregates every parameter violation found in a scenario."""

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(f"{type(v).__name__}: {v}" for v in self.violations)
        super().__init__(text or "invalid scenario")


class NonViableScenario(ValidationError):
    """All violations concern viability (margin or threshold), not the schema."""
