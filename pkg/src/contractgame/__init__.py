"""Solver library for finite-outcome principal-agent contract games.

Build a :class:`Scenario` (outcomes, effort interval, effort-dependent
outcome distribution, both parties' preferences), then:

* :func:`agent_best_response` solves the agent's effort problem under a
  fixed contract and reports every global maximizer,
* :func:`classify_risk` reads the contract-dependent risk posture off the
  sign of the expectation's second derivative,
* :func:`solve_game` completes the backward induction by exhaustive search
  over a finite contract family,
* :mod:`contractgame.analyses` provides closed-form treatments of the
  flat-profile and two-outcome-linear special cases, and
* :mod:`contractgame.oracle` holds independent brute-force and Monte Carlo
  checks.

The ``contractgame`` command line drives all of it from JSON scenario
documents.
"""

from .curves import Curve, ExpAffine, LogAffine, Polynomial, Power, Tabulated
from .errors import (
    ContractGameError,
    DimensionError,
    DomainError,
    EnumerationCapExceeded,
    NotTwoOutcomeLinearError,
    ParseError,
    ProbabilityRangeError,
    ValidationError,
)
from .model import (
    AgentPreferences,
    Contract,
    EffortInterval,
    EffortProfile,
    PrincipalPreferences,
    Scenario,
    ensure_valid,
    profile_matrix,
    profile_probs,
    scenario_validate,
)
from .agent import (
    BestResponse,
    Maximizer,
    MaximizerKind,
    RiskClass,
    RiskClassification,
    agent_best_response,
    agent_expectation,
    agent_payoff_functions,
    classify_risk,
    motivation,
    persistence,
    transience,
)
from .analyses import (
    ClassicalAssumptionsReport,
    InvisibleEffortReport,
    TwoOutcomeLinearReport,
    classical_assumptions_report,
    detect_invisible_effort,
    two_outcome_linear_analysis,
)
from .principal import (
    ContractFamily,
    GameSolution,
    WageGrid,
    principal_expectation,
    solve_game,
)
from .oracle import (
    SimulationResult,
    finite_diff_d1,
    finite_diff_d2,
    grid_argmax,
    monte_carlo_payoffs,
    sample_outcome,
)
from .scenario_io import (
    ScenarioDocument,
    SolverOptions,
    emit_report,
    parse_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AgentPreferences",
    "BestResponse",
    "ClassicalAssumptionsReport",
    "Contract",
    "ContractFamily",
    "ContractGameError",
    "Curve",
    "DimensionError",
    "DomainError",
    "EffortInterval",
    "EffortProfile",
    "EnumerationCapExceeded",
    "ExpAffine",
    "GameSolution",
    "InvisibleEffortReport",
    "LogAffine",
    "Maximizer",
    "MaximizerKind",
    "NotTwoOutcomeLinearError",
    "ParseError",
    "Polynomial",
    "Power",
    "PrincipalPreferences",
    "ProbabilityRangeError",
    "RiskClass",
    "RiskClassification",
    "Scenario",
    "ScenarioDocument",
    "SimulationResult",
    "SolverOptions",
    "Tabulated",
    "TwoOutcomeLinearReport",
    "ValidationError",
    "WageGrid",
    "agent_best_response",
    "agent_expectation",
    "agent_payoff_functions",
    "classical_assumptions_report",
    "classify_risk",
    "detect_invisible_effort",
    "emit_report",
    "ensure_valid",
    "finite_diff_d1",
    "finite_diff_d2",
    "grid_argmax",
    "monte_carlo_payoffs",
    "motivation",
    "parse_scenario",
    "persistence",
    "principal_expectation",
    "profile_matrix",
    "profile_probs",
    "sample_outcome",
    "scenario_validate",
    "solve_game",
    "transience",
    "two_outcome_linear_analysis",
]
