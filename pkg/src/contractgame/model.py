"""Data model of the contract game: outcomes, contracts, profiles, scenarios.

A scenario bundles everything both parties know before play starts: the
finite outcome set, the admissible effort interval, the effort profile
(outcome distribution as a function of effort), and both parties'
preferences.  Construction enforces the cheap structural invariants;
:func:`scenario_validate` runs the grid-based checks and returns every
violation it finds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import DimensionError, DomainError, ProbabilityRangeError, ValidationError

__all__ = [
    "TAU_P",
    "VALIDATION_GRID_POINTS",
    "EffortInterval",
    "Contract",
    "EffortProfile",
    "AgentPreferences",
    "PrincipalPreferences",
    "Scenario",
    "profile_probs",
    "profile_matrix",
    "scenario_validate",
    "ensure_valid",
]

# Probability slack: profile values may stray this far outside [0, 1]
# before validation fails; values inside the slack are clamped.
TAU_P = 1e-9

# Uniform grid resolution used by scenario_validate and the risk sampler.
VALIDATION_GRID_POINTS = 2049


@dataclass(frozen=True)
class EffortInterval:
    """Closed effort interval [lo, hi] with lo < hi, both finite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DimensionError("effort interval bounds must be finite")
        if not lo < hi:
            raise DimensionError(
                f"effort interval needs lo < hi; got [{lo}, {hi}]"
            )
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def span(self) -> float:
        return self.hi - self.lo

    def contains(self, e) -> bool:
        if isinstance(e, np.ndarray):
            return bool(np.all(e >= self.lo) and np.all(e <= self.hi))
        return self.lo <= e <= self.hi

    def require(self, e) -> None:
        if not self.contains(e):
            raise DomainError(
                f"effort {e} outside interval [{self.lo}, {self.hi}]"
            )

    def grid(self, points: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, points)


@dataclass(frozen=True)
class Contract:
    """Wage vector aligned index-by-index with the outcome set."""

    wages: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "wages", tuple(float(w) for w in self.wages))

    def __len__(self) -> int:
        return len(self.wages)

    def __getitem__(self, i: int) -> float:
        return self.wages[i]


@dataclass(frozen=True)
class EffortProfile:
    """Curves p_1(e)..p_{n-1}(e); the last probability is the complement."""

    components: tuple[Curve, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) < 1:
            raise DimensionError("profile needs at least one component curve")


@dataclass(frozen=True)
class AgentPreferences:
    """Wage utility u, effort cost v, and the acceptance threshold."""

    utility: Curve
    effort_cost: Curve
    reservation_utility: float = 0.0


@dataclass(frozen=True)
class PrincipalPreferences:
    """Utility of the net result (outcome minus wage)."""

    utility: Curve


@dataclass(frozen=True)
class Scenario:
    outcomes: tuple[float, ...]
    interval: EffortInterval
    profile: EffortProfile
    agent: AgentPreferences
    principal: PrincipalPreferences

    def __post_init__(self):
        outcomes = tuple(float(x) for x in self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)
        if len(outcomes) < 2:
            raise DimensionError("need at least 2 outcomes")
        if len(self.profile.components) != len(outcomes) - 1:
            raise DimensionError(
                f"{len(outcomes)} outcomes require "
                f"{len(outcomes) - 1} profile components; "
                f"got {len(self.profile.components)}"
            )

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    def check_contract(self, contract: Contract) -> None:
        if len(contract) != self.n_outcomes:
            raise DimensionError(
                f"contract has {len(contract)} wages for "
                f"{self.n_outcomes} outcomes"
            )


def profile_probs(scenario: Scenario, e: float) -> tuple[float, ...]:
    """Outcome distribution at effort e.

    The last probability is one minus the sum of the component curves, so
    the vector sums to one by construction.  Component values may overshoot
    [0, 1] by at most TAU_P (and are clamped back); anything further out
    raises ProbabilityRangeError.
    """
    scenario.interval.require(e)
    clamped = []
    for i, comp in enumerate(scenario.profile.components):
        p = comp.eval(e)
        clamped.append(_clamp_probability(p, i, e))
    rest = 1.0 - math.fsum(clamped)
    clamped.append(_clamp_probability(rest, len(clamped), e))
    # 1 - fsum(...) rounds twice, which can leave the total one ulp off;
    # nudge the complement until the correctly rounded sum is exactly 1
    for _ in range(2):
        residual = 1.0 - math.fsum(clamped)
        if residual == 0.0 or not 0.0 <= clamped[-1] + residual <= 1.0:
            break
        clamped[-1] += residual
    return tuple(clamped)


def _clamp_probability(p: float, index: int, e) -> float:
    if p < -TAU_P or p > 1.0 + TAU_P:
        raise ProbabilityRangeError(
            f"profile component {index} = {p} at effort {e} "
            f"outside [0, 1] beyond tolerance {TAU_P}"
        )
    return min(max(p, 0.0), 1.0)


def profile_matrix(scenario: Scenario, e: np.ndarray) -> np.ndarray:
    """Vectorized profile: row per effort value, column per outcome."""
    scenario.interval.require(e)
    e = np.asarray(e, dtype=float)
    n = scenario.n_outcomes
    out = np.empty((e.size, n))
    for i, comp in enumerate(scenario.profile.components):
        out[:, i] = comp.eval(e)
    out[:, n - 1] = 1.0 - out[:, : n - 1].sum(axis=1)
    bad = (out < -TAU_P) | (out > 1.0 + TAU_P)
    if np.any(bad):
        rows, cols = np.nonzero(bad)
        raise ProbabilityRangeError(
            f"profile component {cols[0]} = {out[rows[0], cols[0]]} at "
            f"effort {e[rows[0]]} outside [0, 1] beyond tolerance {TAU_P}"
        )
    np.clip(out, 0.0, 1.0, out=out)
    return out


def scenario_validate(
    scenario: Scenario,
    contracts: tuple[Contract, ...] = (),
    grid_points: int = VALIDATION_GRID_POINTS,
) -> list[Exception]:
    """Grid-check a scenario; returns every violation found (empty = valid).

    Profile components and the effort cost are sampled on a uniform grid
    over the effort interval; wage utility and principal utility are
    checked at the wages / net results induced by the given contracts.
    """
    issues: list[Exception] = []
    grid = scenario.interval.grid(grid_points)
    n = scenario.n_outcomes

    total = np.zeros_like(grid)
    complement_ok = True
    for i, comp in enumerate(scenario.profile.components):
        try:
            vals = np.asarray(comp.eval(grid), dtype=float)
        except DomainError as err:
            issues.append(
                DomainError(f"profile component {i}: {err}")
            )
            complement_ok = False
            continue
        issues.extend(_range_issues(vals, grid, i))
        total += vals
    if complement_ok:
        issues.extend(_range_issues(1.0 - total, grid, n - 1))

    try:
        scenario.agent.effort_cost.eval(grid)
    except DomainError as err:
        issues.append(DomainError(f"effort cost: {err}"))

    for ci, contract in enumerate(contracts):
        if len(contract) != n:
            issues.append(
                DimensionError(
                    f"contract {ci} has {len(contract)} wages for "
                    f"{n} outcomes"
                )
            )
            continue
        for wi, wage in enumerate(contract.wages):
            try:
                scenario.agent.utility.eval(wage)
            except DomainError as err:
                issues.append(
                    DomainError(f"wage utility at contract {ci} w{wi+1}: {err}")
                )
            try:
                scenario.principal.utility.eval(scenario.outcomes[wi] - wage)
            except DomainError as err:
                issues.append(
                    DomainError(
                        f"principal utility at contract {ci} "
                        f"net result x{wi+1} - w{wi+1}: {err}"
                    )
                )
    return issues


def _range_issues(vals, grid, index):
    bad = (vals < -TAU_P) | (vals > 1.0 + TAU_P)
    if not np.any(bad):
        return []
    dev = np.where(vals < 0.0, -vals, vals - 1.0)
    worst = int(np.argmax(np.where(bad, dev, -np.inf)))
    return [
        ProbabilityRangeError(
            f"profile component {index} = {vals[worst]} at effort "
            f"{grid[worst]} outside [0, 1] beyond tolerance {TAU_P} "
            f"({int(bad.sum())} grid points affected)"
        )
    ]


def ensure_valid(
    scenario: Scenario, contracts: tuple[Contract, ...] = ()
) -> Scenario:
    """Raise ValidationError if the scenario fails any grid check."""
    issues = scenario_validate(scenario, contracts)
    if issues:
        raise ValidationError(issues)
    return scenario
