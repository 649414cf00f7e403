"""Principal side: expected payoff and exhaustive backward induction.

The agent's move is solved exactly (per contract) by the agent solver; the
principal's move is completed by enumerating a finite contract family and
keeping the candidate with the best expected payoff among those the agent
accepts.  Ties between the agent's optimal efforts are settled by an
explicit policy, ties between contracts by the lexicographically smallest
wage vector, so the result is deterministic regardless of evaluation order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .agent import BestResponse, agent_best_response
from .errors import DimensionError, EnumerationCapExceeded
from .model import Contract, Scenario

__all__ = [
    "ENUMERATION_CAP",
    "TIE_BREAK_POLICIES",
    "WageGrid",
    "ContractFamily",
    "GameSolution",
    "principal_expectation",
    "solve_game",
]

ENUMERATION_CAP = 10**6

TIE_BREAK_POLICIES = (
    "principal-favorable",
    "agent-lowest-effort",
    "agent-highest-effort",
)


@dataclass(frozen=True)
class WageGrid:
    """Arithmetic wage range lo, lo+step, ... capped at hi (inclusive)."""

    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if self.step <= 0.0:
            raise DimensionError(f"wage grid step must be positive, got {self.step}")
        if self.hi < self.lo:
            raise DimensionError(
                f"wage grid needs hi >= lo, got [{self.lo}, {self.hi}]"
            )

    def count(self) -> int:
        return int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1

    def values(self) -> tuple[float, ...]:
        return tuple(self.lo + k * self.step for k in range(self.count()))


@dataclass(frozen=True)
class ContractFamily:
    """Finite candidate set: an explicit list or a per-wage grid product."""

    contracts: tuple[Contract, ...] | None = None
    grids: tuple[WageGrid, ...] | None = None
    cap: int = ENUMERATION_CAP

    def __post_init__(self):
        if (self.contracts is None) == (self.grids is None):
            raise DimensionError(
                "contract family needs exactly one of: contracts, grids"
            )
        if self.contracts is not None:
            object.__setattr__(self, "contracts", tuple(self.contracts))
            if len(self.contracts) == 0:
                raise DimensionError("contract family must not be empty")
        else:
            object.__setattr__(self, "grids", tuple(self.grids))
            if len(self.grids) == 0:
                raise DimensionError("contract family must not be empty")

    def size(self) -> int:
        if self.contracts is not None:
            return len(self.contracts)
        prod = 1
        for g in self.grids:
            prod *= g.count()
        return prod

    def __iter__(self):
        size = self.size()
        if size > self.cap:
            raise EnumerationCapExceeded(
                f"family enumerates {size} candidates, cap is {self.cap}"
            )
        if self.contracts is not None:
            return iter(self.contracts)
        return (
            Contract(wages)
            for wages in itertools.product(*(g.values() for g in self.grids))
        )


@dataclass(frozen=True)
class GameSolution:
    all_rejected: bool
    contract: Contract | None
    best_response: BestResponse | None
    effort: float | None
    principal_payoff: float | None
    agent_payoff: float | None
    tie_break: str


class _PrincipalPayoff:
    """Expected principal utility at fixed contract, as a function of effort."""

    __slots__ = ("base", "deltas", "components")

    def __init__(self, scenario: Scenario, contract: Contract):
        scenario.check_contract(contract)
        B = scenario.principal.utility
        net = [B.eval(x - w) for x, w in zip(scenario.outcomes, contract.wages)]
        self.base = net[-1]
        self.deltas = tuple(p - net[-1] for p in net[:-1])
        self.components = scenario.profile.components

    def value(self, e):
        acc = 0.0
        for delta, comp in zip(self.deltas, self.components):
            if delta != 0.0:
                acc = acc + delta * comp.eval(e)
        return self.base + acc


def principal_expectation(
    scenario: Scenario, contract: Contract, e: float
) -> float:
    """Expected principal utility sum_i p_i(e) B(x_i - w_i)."""
    scenario.interval.require(e)
    return _PrincipalPayoff(scenario, contract).value(e)


def _select_effort(
    response: BestResponse, payoff: _PrincipalPayoff, policy: str
) -> float:
    efforts = response.efforts()
    if policy == "agent-lowest-effort":
        return efforts[0]
    if policy == "agent-highest-effort":
        return efforts[-1]
    if policy == "principal-favorable":
        best_e = efforts[0]
        best_p = payoff.value(best_e)
        for e in efforts[1:]:
            p = payoff.value(e)
            if p > best_p:
                best_e, best_p = e, p
        return best_e
    raise ValueError(f"unknown tie-break policy {policy!r}")


def solve_game(
    scenario: Scenario,
    family: ContractFamily,
    tie_break: str = "principal-favorable",
    **solver_kwargs,
) -> GameSolution:
    """Backward induction against a finite contract family.

    For every candidate the agent's problem is solved first; rejected
    contracts are discarded, the rest are scored by the principal's
    expectation at the tie-break effort.  Extra keyword arguments flow
    through to :func:`agent_best_response`.
    """
    if tie_break not in TIE_BREAK_POLICIES:
        raise ValueError(
            f"unknown tie-break policy {tie_break!r}; "
            f"choose one of {TIE_BREAK_POLICIES}"
        )
    best: tuple[float, tuple[float, ...]] | None = None
    chosen: GameSolution | None = None
    for contract in family:
        response = agent_best_response(scenario, contract, **solver_kwargs)
        if not response.accepted:
            continue
        payoff = _PrincipalPayoff(scenario, contract)
        effort = _select_effort(response, payoff, tie_break)
        value = payoff.value(effort)
        key = (-value, contract.wages)
        if best is None or key < best:
            best = key
            chosen = GameSolution(
                all_rejected=False,
                contract=contract,
                best_response=response,
                effort=effort,
                principal_payoff=value,
                agent_payoff=response.optimal_expectation,
                tie_break=tie_break,
            )
    if chosen is None:
        return GameSolution(True, None, None, None, None, None, tie_break)
    return chosen
