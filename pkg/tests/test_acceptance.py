"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute.  Every tolerance is pinned here; the corpora are seeded,
so the suite is deterministic.
"""

import json
import math
import time
from pathlib import Path

import numpy as np

from contractgame import (
    Contract,
    ContractFamily,
    MaximizerKind,
    RiskClass,
    agent_best_response,
    agent_payoff_functions,
    classify_risk,
    grid_argmax,
    monte_carlo_payoffs,
    motivation,
    solve_game,
    two_outcome_linear_analysis,
)
from contractgame.cli import run_command
from contractgame.oracle import finite_diff_d1
from game_oracle import enumeration_oracle
from scenario_gen import (
    averse_taxonomy_scenario,
    constant_profile_scenario,
    linear_two_outcome_scenario,
    neutral_taxonomy_scenario,
    random_scenario,
    reference_scenario,
    seeking_taxonomy_scenario,
)

FIXTURE = str(Path(__file__).parent / "fixtures" / "scenario_r.json")


def _finish(num, description, failures, started, budget):
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < budget
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num} {status} ({elapsed:.2f}s, budget {budget:.0f}s): {description}")
    assert not failures, failures[:5]
    assert elapsed < budget, f"runtime {elapsed:.2f}s exceeded budget {budget}s"


def test_criterion_1_invisible_effort():
    """Constant profiles: best response = argmin of v, classified averse."""
    started = time.perf_counter()
    rng = np.random.default_rng(202601)
    failures = []
    for case in range(100):
        scenario, contract, argmin = constant_profile_scenario(rng)
        response = agent_best_response(scenario, contract)
        efforts = response.efforts()
        if len(efforts) != 1 or abs(efforts[0] - argmin) > 1e-6:
            failures.append((case, efforts, argmin))
            continue
        risk = classify_risk(scenario, contract)
        if risk.classification is not RiskClass.AVERSE:
            failures.append((case, risk.classification))
    _finish(
        1,
        "constant-profile best response minimizes effort cost, risk averse",
        failures,
        started,
        10.0,
    )


def test_criterion_2_two_outcome_linear_foc():
    """Interior optima obey C*(u(w1)-u(w2)) = v'(e); analyzer matches solver."""
    started = time.perf_counter()
    rng = np.random.default_rng(202602)
    failures = []
    for case in range(200):
        scenario, contract = linear_two_outcome_scenario(rng)
        response = agent_best_response(scenario, contract)
        slope = scenario.profile.components[0].coefficients[1]
        u = scenario.agent.utility
        target = slope * (u.eval(contract[0]) - u.eval(contract[1]))
        cost = scenario.agent.effort_cost
        for m in response.maximizers:
            if m.kind is MaximizerKind.INTERIOR_CRITICAL:
                residual = abs(target - cost.d1(m.effort))
                if residual > 1e-8:
                    failures.append((case, "foc", residual))
        report = two_outcome_linear_analysis(scenario, contract)
        for e in report.interior_solutions:
            if abs(report.foc_target - cost.d1(e)) > 1e-10:
                failures.append((case, "analyzer-foc", e))
        a = report.best_response.efforts()
        b = response.efforts()
        if len(a) != len(b) or any(abs(x - y) > 1e-9 for x, y in zip(a, b)):
            failures.append((case, "mismatch", a, b))
    _finish(
        2,
        "two-outcome linear first-order condition and analyzer agreement",
        failures,
        started,
        10.0,
    )


def test_criterion_3_risk_taxonomy():
    """150 constructed cases classify and locate exactly as predicted."""
    started = time.perf_counter()
    rng = np.random.default_rng(202603)
    failures = []

    for case in range(50):  # (a) concave: interior critical optimum
        scenario, contract, e_star = averse_taxonomy_scenario(rng)
        risk = classify_risk(scenario, contract)
        response = agent_best_response(scenario, contract)
        if risk.classification is not RiskClass.AVERSE:
            failures.append(("averse", case, risk.classification))
            continue
        for m in response.maximizers:
            # boundary kinds are only acceptable when the critical point
            # itself coincides with that boundary
            critical = abs(motivation(scenario, contract, m.effort)) <= 1e-8
            if not critical or abs(m.effort - e_star) > 1e-6:
                failures.append(("averse", case, m.effort, e_star))

    for case in range(50):  # (b) convex: boundary optima only
        scenario, contract = seeking_taxonomy_scenario(rng)
        risk = classify_risk(scenario, contract)
        response = agent_best_response(scenario, contract)
        if risk.classification is not RiskClass.SEEKING:
            failures.append(("seeking", case, risk.classification))
            continue
        for m in response.maximizers:
            if m.kind is MaximizerKind.INTERIOR_CRITICAL:
                failures.append(("seeking", case, m.effort))

    for case in range(50):  # (c) linear: boundary, or flat with the flag
        constant = case % 2 == 0
        scenario, contract, slope = neutral_taxonomy_scenario(rng, constant)
        risk = classify_risk(scenario, contract)
        response = agent_best_response(scenario, contract)
        if risk.classification is not RiskClass.NEUTRAL:
            failures.append(("neutral", case, risk.classification))
            continue
        if constant:
            if not response.constant_expectation:
                failures.append(("neutral-flat", case))
            elif response.efforts() != (
                scenario.interval.lo,
                scenario.interval.hi,
            ):
                failures.append(("neutral-flat", case, response.efforts()))
        else:
            expected = (
                MaximizerKind.BOUNDARY_MAX if slope > 0 else MaximizerKind.BOUNDARY_MIN
            )
            if response.constant_expectation or len(response.maximizers) != 1:
                failures.append(("neutral-slope", case, response.maximizers))
            elif response.maximizers[0].kind is not expected:
                failures.append(("neutral-slope", case, response.maximizers[0]))
    _finish(
        3,
        "risk taxonomy: averse/seeking/neutral classify and locate as predicted",
        failures,
        started,
        60.0,
    )


def test_criterion_4_derivative_oracle():
    """Motivation and persistence match central finite differences."""
    started = time.perf_counter()
    rng = np.random.default_rng(202604)
    failures = []
    for case in range(100):
        scenario, contract = random_scenario(rng, smooth_only=True)
        value, slope, curvature = agent_payoff_functions(scenario, contract)
        lo, hi = scenario.interval.lo, scenario.interval.hi
        pad = 1e-3 * (hi - lo)
        for e in rng.uniform(lo + pad, hi - pad, size=20):
            e = float(e)
            step = 1e-6 * max(1.0, abs(e))
            mt = slope(e)
            fd_mt = finite_diff_d1(value, e, step)
            if abs(mt - fd_mt) > 1e-6 * max(1.0, abs(mt), abs(fd_mt)):
                failures.append((case, "motivation", e, mt, fd_mt))
            prst = curvature(e)
            fd_prst = finite_diff_d1(slope, e, step)
            if abs(prst - fd_prst) > 1e-6 * max(1.0, abs(prst), abs(fd_prst)):
                failures.append((case, "persistence", e, prst, fd_prst))
    _finish(
        4,
        "derivatives match central finite differences (rel err <= 1e-6)",
        failures,
        started,
        5.0,
    )


def test_criterion_5_global_optimum_oracle():
    """Best-response optimum within 1e-6 of a million-point grid maximum."""
    started = time.perf_counter()
    rng = np.random.default_rng(202605)
    failures = []
    for case in range(100):
        scenario, contract = random_scenario(rng)
        response = agent_best_response(scenario, contract)
        value, _, _ = agent_payoff_functions(scenario, contract)
        arg, best = grid_argmax(value, scenario.interval, 10**6 + 1)
        if abs(response.optimal_expectation - best) > 1e-6:
            failures.append((case, response.optimal_expectation, best))
        elif min(abs(e - arg) for e in response.efforts()) > 1e-4:
            failures.append((case, "argmax", response.efforts(), arg))
    _finish(
        5,
        "global optimum matches 10^6-point grid oracle within 1e-6",
        failures,
        started,
        60.0,
    )


def test_criterion_6_backward_induction():
    """solve_game equals independent exhaustive enumeration on 50 families."""
    started = time.perf_counter()
    rng = np.random.default_rng(202606)
    failures = []
    for case in range(50):
        if case % 3 == 2:
            scenario, _, _ = averse_taxonomy_scenario(rng)
            scenario = scenario.__class__(
                outcomes=scenario.outcomes,
                interval=scenario.interval,
                profile=scenario.profile,
                agent=scenario.agent.__class__(
                    scenario.agent.utility, scenario.agent.effort_cost, -1e9
                ),
                principal=scenario.principal,
            )
        else:
            scenario, _ = linear_two_outcome_scenario(rng, reservation=-1e9)
        n = scenario.n_outcomes
        size = 1000 if case == 0 else int(rng.integers(50, 351))
        contracts = tuple(
            Contract(tuple(float(w) for w in rng.uniform(0.0, 8.0, size=n)))
            for _ in range(size)
        )
        family = ContractFamily(contracts=contracts)
        solution = solve_game(scenario, family)
        oracle = enumeration_oracle(scenario, family)
        if oracle is None or solution.all_rejected:
            failures.append((case, "rejection mismatch"))
            continue
        contract, _, payoff = oracle
        if solution.contract != contract:
            failures.append((case, solution.contract, contract))
        elif abs(solution.principal_payoff - payoff) > 1e-6:
            failures.append((case, solution.principal_payoff, payoff))
    _finish(
        6,
        "backward induction equals exhaustive-enumeration oracle",
        failures,
        started,
        120.0,
    )


def test_criterion_7_monte_carlo_consistency():
    """Reference scenario: empirical means within 3 SD/sqrt(n) of 1.3 / 3.8."""
    started = time.perf_counter()
    scenario, contract = reference_scenario()
    n = 10**6
    result = monte_carlo_payoffs(scenario, contract, 0.5, n, seed=20260808)
    failures = []
    agent_band = 3.0 * result.agent_sd / math.sqrt(n)
    principal_band = 3.0 * result.principal_sd / math.sqrt(n)
    if abs(result.agent_mean - 1.3) > agent_band:
        failures.append(("agent", result.agent_mean, agent_band))
    if abs(result.principal_mean - 3.8) > principal_band:
        failures.append(("principal", result.principal_mean, principal_band))
    _finish(
        7,
        "Monte Carlo means hit analytic 1.3 / 3.8 within 3 SD bands",
        failures,
        started,
        30.0,
    )


def test_criterion_8_reference_case_via_cli(capsys):
    """solve-agent CLI reproduces the hand-derived closed form."""
    started = time.perf_counter()
    failures = []
    code = run_command(["solve-agent", FIXTURE])
    out = json.loads(capsys.readouterr().out)
    if code != 0:
        failures.append(("exit", code))
    tops = out["maximizers"]
    if len(tops) != 1:
        failures.append(("maximizers", tops))
    else:
        if abs(tops[0]["effort"] - 0.5) > 1e-9:
            failures.append(("effort", tops[0]["effort"]))
        if tops[0]["kind"] != "interior_critical":
            failures.append(("kind", tops[0]["kind"]))
    if abs(out["optimal_expectation"] - 1.3) > 1e-9:
        failures.append(("expectation", out["optimal_expectation"]))
    if out["risk"]["classification"] != "averse":
        failures.append(("risk", out["risk"]))
    with capsys.disabled():
        _finish(
            8,
            "CLI solve-agent reports e*=0.5, E*=1.3, interior critical, averse",
            failures,
            started,
            10.0,
        )
