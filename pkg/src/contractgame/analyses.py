"""Closed-form analyzers for structured scenarios.

Two structures admit pencil-and-paper treatment and serve as cross-checks
on the general solver: profiles that do not react to effort (the agent just
minimizes the effort cost), and two-outcome scenarios with an affine first
probability component (interior optima solve C*(u(w1)-u(w2)) = v'(e)).
A third report audits the textbook monotonicity/curvature assumptions on
u and v and flags the generalized-agent cases this model admits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agent import (
    REFINE_TOL,
    MT_GRID_POINTS,
    SCAN_GRID_POINTS,
    TAU_E,
    TAU_EXPECTATION,
    BestResponse,
    Maximizer,
    MaximizerKind,
    RiskClassification,
    _AgentPayoff,
    _bisect_root,
    _kind_at,
    _merge_runs,
    classify_persistence_samples,
    hybrid_maximize,
)
from .errors import NotTwoOutcomeLinearError
from .curves import Polynomial
from .model import VALIDATION_GRID_POINTS, Contract, Scenario

__all__ = [
    "EPSILON_INVISIBLE",
    "InvisibleEffortReport",
    "TwoOutcomeLinearReport",
    "AssumptionCheck",
    "ClassicalAssumptionsReport",
    "detect_invisible_effort",
    "two_outcome_linear_analysis",
    "classical_assumptions_report",
]

# Default threshold on the profile's total variation across efforts below
# which the outcome distribution counts as effort-independent.  Raise it to
# hunt for "almost flat" profiles.
EPSILON_INVISIBLE = 1e-9


@dataclass(frozen=True)
class InvisibleEffortReport:
    """Outcome of the flat-profile detector.

    When the profile is flat, wages drop out of the agent's problem and the
    best response is the argmin set of the effort cost; ``best_response``
    then holds those efforts (its expectation values are -v, the objective
    actually maximized).  Both solution fields are None when the profile
    does react to effort.
    """

    is_invisible: bool
    max_profile_deviation: float
    epsilon: float
    best_response: BestResponse | None
    risk: RiskClassification | None


@dataclass(frozen=True)
class TwoOutcomeLinearReport:
    slope: float
    intercept: float
    foc_target: float
    interior_solutions: tuple[float, ...]
    interior_values: tuple[float, ...]
    boundary_values: tuple[float, float]
    best_response: BestResponse
    reduces_to_invisible: bool
    invisible: InvisibleEffortReport | None


@dataclass(frozen=True)
class AssumptionCheck:
    holds: bool
    witness_point: float | None = None
    witness_value: float | None = None


@dataclass(frozen=True)
class ClassicalAssumptionsReport:
    wage_range: tuple[float, float]
    u_increasing: AssumptionCheck
    u_weakly_concave: AssumptionCheck
    v_increasing: AssumptionCheck
    v_weakly_convex: AssumptionCheck
    inner_work_need: bool
    effort_yields_utility: bool
    cost_concave_somewhere: bool

    @property
    def classical(self) -> bool:
        return (
            self.u_increasing.holds
            and self.u_weakly_concave.holds
            and self.v_increasing.holds
            and self.v_weakly_convex.holds
        )


def detect_invisible_effort(
    scenario: Scenario,
    epsilon: float = EPSILON_INVISIBLE,
    *,
    grid_points: int = VALIDATION_GRID_POINTS,
) -> InvisibleEffortReport:
    """Check whether the outcome distribution is (nearly) effort-independent.

    Deviation is measured against the profile at the interval midpoint,
    over all components including the complement.  If it stays within
    epsilon, the agent's problem collapses to minimizing v: the report
    carries the argmin set (found by the same hybrid machinery, applied to
    -v) and the risk posture implied by -v''.
    """
    grid = scenario.interval.grid(grid_points)
    mid = 0.5 * (scenario.interval.lo + scenario.interval.hi)
    deviation = 0.0
    total_grid = np.zeros_like(grid)
    total_mid = 0.0
    for comp in scenario.profile.components:
        vals = np.asarray(comp.eval(grid), dtype=float)
        ref = comp.eval(mid)
        deviation = max(deviation, float(np.max(np.abs(vals - ref))))
        total_grid += vals
        total_mid += ref
    deviation = max(
        deviation, float(np.max(np.abs((1.0 - total_grid) - (1.0 - total_mid))))
    )

    if deviation > epsilon:
        return InvisibleEffortReport(False, deviation, epsilon, None, None)

    cost = scenario.agent.effort_cost
    pairs, best, constant = hybrid_maximize(
        lambda e: -cost.eval(e),
        lambda e: -cost.d1(e),
        scenario.interval,
    )
    if constant:
        maximizers = (
            Maximizer(pairs[0][0], MaximizerKind.BOUNDARY_MIN, pairs[0][1]),
            Maximizer(pairs[1][0], MaximizerKind.BOUNDARY_MAX, pairs[1][1]),
        )
    else:
        maximizers = tuple(
            Maximizer(e, _kind_at(e, scenario.interval, TAU_E), fe)
            for e, fe in pairs
        )
    best_response = BestResponse(maximizers, best, True, constant)
    risk = classify_persistence_samples(-np.asarray(cost.d2(grid), dtype=float))
    return InvisibleEffortReport(True, deviation, epsilon, best_response, risk)


def two_outcome_linear_analysis(
    scenario: Scenario,
    contract: Contract,
    *,
    mt_points: int = MT_GRID_POINTS,
    scan_points: int = SCAN_GRID_POINTS,
    refine_tol: float = REFINE_TOL,
    effort_tol: float = TAU_E,
    tie_tol: float = TAU_EXPECTATION,
) -> TwoOutcomeLinearReport:
    """First-order-condition solution for p1(e) = C*e + h with two outcomes.

    Interior optima satisfy v'(e) = C*(u(w1)-u(w2)); roots are bracketed on
    a grid and bisected, then compared against the boundaries.  With C = 0
    the case degenerates to an invisible-effort scenario and the matching
    report is attached.
    """
    if scenario.n_outcomes != 2:
        raise NotTwoOutcomeLinearError(
            f"needs exactly 2 outcomes, got {scenario.n_outcomes}"
        )
    comp = scenario.profile.components[0]
    if not isinstance(comp, Polynomial) or comp.degree() > 1:
        raise NotTwoOutcomeLinearError(
            "first profile component must be a polynomial of degree <= 1"
        )
    scenario.check_contract(contract)

    coeffs = comp.coefficients
    intercept = coeffs[0]
    slope = coeffs[1] if len(coeffs) > 1 else 0.0

    u = scenario.agent.utility
    target = slope * (u.eval(contract[0]) - u.eval(contract[1]))
    cost = scenario.agent.effort_cost
    interval = scenario.interval

    def residual(e):
        return target - cost.d1(e)

    payoff = _AgentPayoff(scenario, contract)

    # flat expectation short-circuits to the two boundary representatives,
    # mirroring the general solver's constant case
    scan = np.linspace(interval.lo, interval.hi, scan_points)
    ev = np.asarray(payoff.value(scan), dtype=float)
    best_scan = float(ev.max())
    scale = max(1.0, abs(best_scan))
    if best_scan - float(ev.min()) <= tie_tol * scale:
        maximizers = (
            Maximizer(interval.lo, MaximizerKind.BOUNDARY_MIN, float(ev[0])),
            Maximizer(interval.hi, MaximizerKind.BOUNDARY_MAX, float(ev[-1])),
        )
        best_response = BestResponse(
            maximizers,
            best_scan,
            best_scan >= scenario.agent.reservation_utility,
            True,
        )
        return _finish_two_outcome(
            scenario, slope, intercept, target, (), (),
            (float(ev[0]), float(ev[-1])), best_response,
        )

    roots: list[float] = []
    grid = np.linspace(interval.lo, interval.hi, mt_points)
    rv = np.asarray(residual(grid), dtype=float)
    for first, last in _merge_runs(np.nonzero(rv == 0.0)[0]):
        roots.append(float(grid[first]))
        if last != first:
            roots.append(float(grid[last]))
    for i in np.nonzero(rv[:-1] * rv[1:] < 0.0)[0]:
        roots.append(
            _bisect_root(residual, float(grid[i]), float(grid[i + 1]), refine_tol)
        )
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if deduped and r - deduped[-1] <= effort_tol:
            continue
        deduped.append(r)

    interior = tuple(
        r for r in deduped
        if r - interval.lo > effort_tol and interval.hi - r > effort_tol
    )
    interior_values = tuple(float(payoff.value(r)) for r in interior)
    boundary_values = (
        float(payoff.value(interval.lo)),
        float(payoff.value(interval.hi)),
    )

    candidates = [interval.lo, *interior, interval.hi]
    values = [boundary_values[0], *interior_values, boundary_values[1]]
    best = max(values)
    scale = max(1.0, abs(best))
    maximizers = tuple(
        Maximizer(e, _kind_at(e, interval, effort_tol), fe)
        for e, fe in zip(candidates, values)
        if best - fe <= tie_tol * scale
    )
    best_response = BestResponse(
        maximizers, best, best >= scenario.agent.reservation_utility, False
    )
    return _finish_two_outcome(
        scenario, slope, intercept, target, interior, interior_values,
        boundary_values, best_response,
    )


def _finish_two_outcome(
    scenario, slope, intercept, target, interior, interior_values,
    boundary_values, best_response,
):
    reduces = slope == 0.0
    invisible = detect_invisible_effort(scenario) if reduces else None
    return TwoOutcomeLinearReport(
        slope=slope,
        intercept=intercept,
        foc_target=target,
        interior_solutions=tuple(interior),
        interior_values=tuple(interior_values),
        boundary_values=boundary_values,
        best_response=best_response,
        reduces_to_invisible=reduces,
        invisible=invisible,
    )


def _grid_check(mask: np.ndarray, grid: np.ndarray, vals: np.ndarray) -> AssumptionCheck:
    if bool(np.all(mask)):
        return AssumptionCheck(True)
    first = int(np.argmin(mask))
    return AssumptionCheck(False, float(grid[first]), float(vals[first]))


def classical_assumptions_report(
    scenario: Scenario,
    wage_range: tuple[float, float],
    *,
    grid_points: int = VALIDATION_GRID_POINTS,
) -> ClassicalAssumptionsReport:
    """Audit u'(w) > 0, u''(w) <= 0, v'(e) > 0 and v''(e) >= 0 on grids.

    Failures carry the first offending grid point.  Two generalized-agent
    flags are reported alongside: negative marginal cost somewhere (the
    agent wants to work) and negative cost somewhere (effort itself yields
    utility).  A concave stretch of v is surfaced separately because the
    risk conclusions here lean on v being convex.
    """
    lo, hi = float(wage_range[0]), float(wage_range[1])
    if hi < lo:
        lo, hi = hi, lo
    wgrid = np.linspace(lo, hi, grid_points)
    egrid = scenario.interval.grid(grid_points)

    u = scenario.agent.utility
    v = scenario.agent.effort_cost
    u1 = np.asarray(u.d1(wgrid), dtype=float)
    u2 = np.asarray(u.d2(wgrid), dtype=float)
    v0 = np.asarray(v.eval(egrid), dtype=float)
    v1 = np.asarray(v.d1(egrid), dtype=float)
    v2 = np.asarray(v.d2(egrid), dtype=float)

    return ClassicalAssumptionsReport(
        wage_range=(lo, hi),
        u_increasing=_grid_check(u1 > 0.0, wgrid, u1),
        u_weakly_concave=_grid_check(u2 <= 0.0, wgrid, u2),
        v_increasing=_grid_check(v1 > 0.0, egrid, v1),
        v_weakly_convex=_grid_check(v2 >= 0.0, egrid, v2),
        inner_work_need=bool(np.any(v1 < 0.0)),
        effort_yields_utility=bool(np.any(v0 < 0.0)),
        cost_concave_somewhere=bool(np.any(v2 < 0.0)),
    )
