"""Agent-side solver: payment expectation, effort best response, risk posture.

Under a fixed contract the agent faces a one-dimensional problem: pick the
effort in [lo, hi] that maximizes expected utility

    E(e) = sum_i p_i(e) * u(w_i) - v(e).

The first derivative of E is the agent's motivation, the second the
persistence; the sign of persistence over the interval determines whether
this contract makes the agent risk-averse, risk-seeking, or risk-neutral.
The maximizer search is a belt-and-braces hybrid: derivative root
bracketing plus a dense value scan, so tangential critical points and
boundary maxima are caught even when bisection alone would miss them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import Contract, EffortInterval, Scenario

__all__ = [
    "TAU_E",
    "TAU_EXPECTATION",
    "TAU_R",
    "MT_GRID_POINTS",
    "SCAN_GRID_POINTS",
    "RISK_GRID_POINTS",
    "REFINE_TOL",
    "MaximizerKind",
    "Maximizer",
    "BestResponse",
    "RiskClass",
    "RiskClassification",
    "agent_expectation",
    "motivation",
    "persistence",
    "transience",
    "agent_payoff_functions",
    "agent_best_response",
    "classify_risk",
    "classify_persistence_samples",
    "hybrid_maximize",
]

TAU_E = 1e-9            # effort dedup / boundary-coincidence tolerance
TAU_EXPECTATION = 1e-9  # relative tie tolerance on expectation values
TAU_R = 1e-9            # absolute persistence sign tolerance

MT_GRID_POINTS = 1025    # bracketing grid for motivation roots
SCAN_GRID_POINTS = 4097  # dense value scan for local maxima
RISK_GRID_POINTS = 2049  # persistence sampling grid
REFINE_TOL = 1e-12       # bisection / golden-section interval target

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class MaximizerKind(Enum):
    INTERIOR_CRITICAL = "interior_critical"
    BOUNDARY_MIN = "boundary_min"
    BOUNDARY_MAX = "boundary_max"


class RiskClass(Enum):
    AVERSE = "averse"
    SEEKING = "seeking"
    NEUTRAL = "neutral"
    MIXED = "mixed"


@dataclass(frozen=True)
class Maximizer:
    effort: float
    kind: MaximizerKind
    expectation: float


@dataclass(frozen=True)
class BestResponse:
    """Agent's solution to the effort problem under one contract.

    ``maximizers`` lists every global maximizer found (ascending effort,
    expectations tied within the relative tolerance).  When the expectation
    is constant over the whole interval the set is represented by the two
    boundary points and ``constant_expectation`` is set.
    """

    maximizers: tuple[Maximizer, ...]
    optimal_expectation: float
    accepted: bool
    constant_expectation: bool = False

    def efforts(self) -> tuple[float, ...]:
        return tuple(m.effort for m in self.maximizers)


@dataclass(frozen=True)
class RiskClassification:
    classification: RiskClass
    persistence_min: float
    persistence_max: float


class _AgentPayoff:
    """E, E', E'' for one (scenario, contract) pair, scalar or vectorized.

    Uses the complement identity: with du_i = u(w_i) - u(w_n),
    E(e) = u(w_n) + sum_{i<n} p_i(e) du_i - v(e), so only the n-1 component
    curves are evaluated and the probabilities never need renormalizing.
    """

    __slots__ = ("base", "deltas", "components", "cost")

    def __init__(self, scenario: Scenario, contract: Contract):
        scenario.check_contract(contract)
        u = scenario.agent.utility
        uw = [u.eval(w) for w in contract.wages]
        self.base = uw[-1]
        self.deltas = tuple(x - uw[-1] for x in uw[:-1])
        self.components = scenario.profile.components
        self.cost = scenario.agent.effort_cost

    def value(self, e):
        acc = 0.0
        for delta, comp in zip(self.deltas, self.components):
            if delta != 0.0:
                acc = acc + delta * comp.eval(e)
        return self.base + acc - self.cost.eval(e)

    def slope(self, e):
        acc = 0.0
        for delta, comp in zip(self.deltas, self.components):
            if delta != 0.0:
                acc = acc + delta * comp.d1(e)
        return acc - self.cost.d1(e)

    def curvature(self, e):
        acc = 0.0
        for delta, comp in zip(self.deltas, self.components):
            if delta != 0.0:
                acc = acc + delta * comp.d2(e)
        return acc - self.cost.d2(e)


def agent_expectation(scenario: Scenario, contract: Contract, e: float) -> float:
    """Expected agent utility sum_i p_i(e) u(w_i) - v(e)."""
    scenario.interval.require(e)
    return _AgentPayoff(scenario, contract).value(e)


def motivation(scenario: Scenario, contract: Contract, e: float) -> float:
    """First derivative of the payment expectation with respect to effort."""
    scenario.interval.require(e)
    return _AgentPayoff(scenario, contract).slope(e)


def persistence(scenario: Scenario, contract: Contract, e: float) -> float:
    """Second derivative of the payment expectation with respect to effort."""
    scenario.interval.require(e)
    return _AgentPayoff(scenario, contract).curvature(e)


def transience(scenario: Scenario, contract: Contract, e: float) -> float:
    return -persistence(scenario, contract, e)


def agent_payoff_functions(scenario: Scenario, contract: Contract):
    """(E, Mt, Prst) closures accepting scalars or numpy arrays.

    Shares one precomputed payoff object, so this is the fast path for
    sweeps and dense grids.
    """
    payoff = _AgentPayoff(scenario, contract)
    interval = scenario.interval

    def expectation(e):
        interval.require(e)
        return payoff.value(e)

    def slope(e):
        interval.require(e)
        return payoff.slope(e)

    def curvature(e):
        interval.require(e)
        return payoff.curvature(e)

    return expectation, slope, curvature


def _bisect_root(g, a: float, b: float, tol: float) -> float:
    """Root of g in [a, b] given a sign change; interval shrunk to tol."""
    ga = g(a)
    if ga == 0.0:
        return a
    gb = g(b)
    if gb == 0.0:
        return b
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (ga < 0.0) == (gm < 0.0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


def _golden_max(f, a: float, b: float, tol: float) -> float:
    """Golden-section maximizer of f on [a, b]; bracket shrunk to tol."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(256):
        if b - a <= tol or not a < c < d < b:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _merge_runs(indices):
    """Group consecutive integer indices into (first, last) runs."""
    runs = []
    for i in indices:
        if runs and i == runs[-1][1] + 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])
    return runs


def hybrid_maximize(
    f,
    df,
    interval: EffortInterval,
    *,
    mt_points: int = MT_GRID_POINTS,
    scan_points: int = SCAN_GRID_POINTS,
    refine_tol: float = REFINE_TOL,
    effort_tol: float = TAU_E,
    tie_tol: float = TAU_EXPECTATION,
):
    """Global maximizers of a C1 function f on a closed interval.

    Returns (maximizers, best_value, constant) where maximizers is a tuple
    of (point, value) pairs sorted by point.  Candidates come from three
    sources: the interval boundaries, sign-change roots of df bracketed on
    a uniform grid and bisected to ``refine_tol``, and local maxima of a
    dense value scan.  Scan brackets that contain a sign change of df are
    snapped onto the root by bisection (golden-section alone only locates
    a smooth peak to about sqrt(eps)); the remaining brackets are polished
    by golden-section.  A flat function (value spread within the tie
    tolerance) is reported as constant via its two boundary points.
    """
    lo, hi = interval.lo, interval.hi
    scan = np.linspace(lo, hi, scan_points)
    fv = np.asarray(f(scan), dtype=float)
    fmax = float(fv.max())
    scale = max(1.0, abs(fmax))
    if fmax - float(fv.min()) <= tie_tol * scale:
        pairs = ((lo, float(fv[0])), (hi, float(fv[-1])))
        return pairs, fmax, True

    candidates = [lo, hi]

    mt_grid = np.linspace(lo, hi, mt_points)
    dv = np.asarray(df(mt_grid), dtype=float)
    # a run of exact derivative zeros is a flat stretch; its edges are the
    # informative representatives (a lone zero is its own edge)
    for first, last in _merge_runs(np.nonzero(dv == 0.0)[0]):
        candidates.append(float(mt_grid[first]))
        candidates.append(float(mt_grid[last]))
    for i in np.nonzero(dv[:-1] * dv[1:] < 0.0)[0]:
        candidates.append(
            _bisect_root(df, float(mt_grid[i]), float(mt_grid[i + 1]), refine_tol)
        )

    interior = np.nonzero((fv[1:-1] >= fv[:-2]) & (fv[1:-1] >= fv[2:]))[0] + 1
    for first, last in _merge_runs(interior):
        a = float(scan[first - 1])
        b = float(scan[last + 1])
        da = df(a)
        db = df(b)
        if da == 0.0:
            candidates.append(a)
        elif db == 0.0:
            candidates.append(b)
        elif da * db < 0.0:
            candidates.append(_bisect_root(df, a, b, refine_tol))
        else:
            candidates.append(_golden_max(f, a, b, refine_tol))

    clamped = sorted(min(max(c, lo), hi) for c in candidates)
    merged: list[tuple[float, float]] = []
    for c in clamped:
        if merged and c - merged[-1][0] <= effort_tol:
            continue
        merged.append((c, float(f(c))))

    best = max(fc for _, fc in merged)
    scale = max(1.0, abs(best))
    pairs = tuple((c, fc) for c, fc in merged if best - fc <= tie_tol * scale)
    return pairs, best, False


def _kind_at(e: float, interval: EffortInterval, tol: float) -> MaximizerKind:
    if e - interval.lo <= tol:
        return MaximizerKind.BOUNDARY_MIN
    if interval.hi - e <= tol:
        return MaximizerKind.BOUNDARY_MAX
    return MaximizerKind.INTERIOR_CRITICAL


def agent_best_response(
    scenario: Scenario,
    contract: Contract,
    *,
    mt_points: int = MT_GRID_POINTS,
    scan_points: int = SCAN_GRID_POINTS,
    refine_tol: float = REFINE_TOL,
    effort_tol: float = TAU_E,
    tie_tol: float = TAU_EXPECTATION,
) -> BestResponse:
    """Solve max E(e) over the effort interval.

    All global maximizers are reported; the agent accepts the contract when
    the optimum is at least the reservation utility (rejection keeps the
    maximizer list, only the flag flips).
    """
    payoff = _AgentPayoff(scenario, contract)
    pairs, best, constant = hybrid_maximize(
        payoff.value,
        payoff.slope,
        scenario.interval,
        mt_points=mt_points,
        scan_points=scan_points,
        refine_tol=refine_tol,
        effort_tol=effort_tol,
        tie_tol=tie_tol,
    )
    if constant:
        maximizers = (
            Maximizer(pairs[0][0], MaximizerKind.BOUNDARY_MIN, pairs[0][1]),
            Maximizer(pairs[1][0], MaximizerKind.BOUNDARY_MAX, pairs[1][1]),
        )
    else:
        maximizers = tuple(
            Maximizer(e, _kind_at(e, scenario.interval, effort_tol), fe)
            for e, fe in pairs
        )
    accepted = best >= scenario.agent.reservation_utility
    return BestResponse(maximizers, best, accepted, constant)


def classify_persistence_samples(
    samples: np.ndarray, tau: float = TAU_R
) -> RiskClassification:
    """Apply the sign rule to sampled persistence values."""
    pmin = float(np.min(samples))
    pmax = float(np.max(samples))
    if pmax < -tau:
        cls = RiskClass.AVERSE
    elif pmin > tau:
        cls = RiskClass.SEEKING
    elif -tau <= pmin and pmax <= tau:
        cls = RiskClass.NEUTRAL
    else:
        cls = RiskClass.MIXED
    return RiskClassification(cls, pmin, pmax)


def classify_risk(
    scenario: Scenario,
    contract: Contract,
    *,
    grid_points: int = RISK_GRID_POINTS,
    tau: float = TAU_R,
) -> RiskClassification:
    """Contract-dependent risk posture from the sign of the persistence.

    Negative persistence throughout means the expectation is concave in
    effort (risk-averse behavior for this contract), positive means convex
    (risk-seeking, maxima only at the boundary), zero means linear.  A sign
    change is reported as mixed.
    """
    payoff = _AgentPayoff(scenario, contract)
    grid = scenario.interval.grid(grid_points)
    samples = np.asarray(payoff.curvature(grid), dtype=float)
    return classify_persistence_samples(samples, tau)
