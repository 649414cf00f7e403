"""Command-line driver.

Exit codes: 0 success, 1 parse/validation/solver failure, 2 usage error.
Reports go to stdout (or the file given by --out); error text goes to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .agent import agent_best_response, agent_payoff_functions, classify_risk
from .analyses import (
    classical_assumptions_report,
    detect_invisible_effort,
    two_outcome_linear_analysis,
)
from .errors import ContractGameError, NotTwoOutcomeLinearError, ParseError, ValidationError
from .model import Contract
from .oracle import monte_carlo_payoffs
from .principal import TIE_BREAK_POLICIES, solve_game
from .scenario_io import (
    ScenarioDocument,
    SweepTable,
    emit_report,
    parse_scenario,
    render_json,
    result_to_dict,
)

__all__ = ["build_parser", "run_command", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contractgame",
        description="Solve principal-agent contract games from scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, contract=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="scenario document (JSON)")
        if contract:
            p.add_argument(
                "--contract",
                default="0",
                help="index into the document's contracts, or an inline "
                'wage vector like "[4, 0]" (default: 0)',
            )
        return p

    add("validate", "check a scenario document and print a report")
    add("solve-agent", "agent best response for one contract", contract=True)
    add("classify-risk", "contract-dependent risk posture", contract=True)
    p = add("analyze", "run all structural analyzers", contract=True)
    p.add_argument(
        "--epsilon",
        type=float,
        default=None,
        help="override the flat-profile detection threshold",
    )
    p = add("solve-game", "backward induction over the contract family")
    p.add_argument(
        "--tie-break",
        choices=TIE_BREAK_POLICIES,
        default=None,
        help="effort tie-break policy (default from the document)",
    )
    p = add("sweep", "tabulate expectation/motivation/persistence", contract=True)
    p.add_argument("--points", type=int, required=True, help="grid size")
    p.add_argument("--out", default=None, help="CSV destination (default: stdout)")
    p = add("simulate", "Monte Carlo payoffs at fixed effort", contract=True)
    p.add_argument("--effort", type=float, required=True)
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument("--seed", type=int, default=None, help="rng seed (default from document)")
    return parser


def _resolve_contract(doc: ScenarioDocument, spec: str) -> Contract:
    text = spec.strip()
    if text.startswith("["):
        try:
            wages = json.loads(text)
        except json.JSONDecodeError as err:
            raise ContractGameError(f"bad inline contract {spec!r}: {err.msg}") from err
        if not isinstance(wages, list) or not all(
            isinstance(w, (int, float)) and not isinstance(w, bool) for w in wages
        ):
            raise ContractGameError(f"bad inline contract {spec!r}: expected numbers")
        contract = Contract(tuple(float(w) for w in wages))
    else:
        try:
            index = int(text)
        except ValueError as err:
            raise ContractGameError(
                f"--contract must be an index or an inline vector, got {spec!r}"
            ) from err
        if not 0 <= index < len(doc.contracts):
            raise ContractGameError(
                f"contract index {index} out of range; document has "
                f"{len(doc.contracts)} contract(s)"
            )
        contract = doc.contracts[index]
    doc.scenario.check_contract(contract)
    return contract


def _cmd_validate(args) -> int:
    try:
        parse_scenario(args.file)
    except ValidationError as err:
        report = {
            "valid": False,
            "issues": [
                {"kind": type(i).__name__, "message": str(i)} for i in err.issues
            ],
        }
        print(render_json(report))
        return 1
    except ParseError as err:
        report = {
            "valid": False,
            "issues": [{"kind": "ParseError", "message": str(err)}],
        }
        print(render_json(report))
        return 1
    print(render_json({"valid": True, "issues": []}))
    return 0


def _cmd_solve_agent(args) -> int:
    doc = parse_scenario(args.file)
    contract = _resolve_contract(doc, args.contract)
    response = agent_best_response(
        doc.scenario, contract, **doc.options.best_response_kwargs()
    )
    risk = classify_risk(
        doc.scenario, contract, grid_points=doc.options.risk_grid_points
    )
    out = result_to_dict(response)
    out["risk"] = result_to_dict(risk)
    print(render_json(out))
    return 0


def _cmd_classify_risk(args) -> int:
    doc = parse_scenario(args.file)
    contract = _resolve_contract(doc, args.contract)
    risk = classify_risk(
        doc.scenario, contract, grid_points=doc.options.risk_grid_points
    )
    print(render_json(result_to_dict(risk)))
    return 0


def _cmd_analyze(args) -> int:
    doc = parse_scenario(args.file)
    contract = _resolve_contract(doc, args.contract)
    epsilon = args.epsilon if args.epsilon is not None else doc.options.epsilon_invisible
    invisible = detect_invisible_effort(doc.scenario, epsilon)
    try:
        linear = result_to_dict(
            two_outcome_linear_analysis(
                doc.scenario, contract, **doc.options.best_response_kwargs()
            )
        )
    except NotTwoOutcomeLinearError:
        linear = None
    classical = classical_assumptions_report(
        doc.scenario, (min(contract.wages), max(contract.wages))
    )
    out = {
        "invisible_effort": result_to_dict(invisible),
        "two_outcome_linear": linear,
        "classical_assumptions": result_to_dict(classical),
    }
    print(render_json(out))
    return 0


def _cmd_solve_game(args) -> int:
    doc = parse_scenario(args.file)
    if doc.contract_family is None:
        raise ContractGameError("document has no contract_family to search")
    tie_break = args.tie_break if args.tie_break is not None else doc.options.tie_break
    solution = solve_game(
        doc.scenario,
        doc.contract_family,
        tie_break=tie_break,
        **doc.options.best_response_kwargs(),
    )
    print(render_json(result_to_dict(solution)))
    return 0


def _cmd_sweep(args) -> int:
    doc = parse_scenario(args.file)
    contract = _resolve_contract(doc, args.contract)
    if args.points < 2:
        raise ContractGameError("--points must be at least 2")
    expectation, slope, curvature = agent_payoff_functions(doc.scenario, contract)
    grid = doc.scenario.interval.grid(args.points)
    ev = np.asarray(expectation(grid), dtype=float)
    mv = np.asarray(slope(grid), dtype=float)
    pv = np.asarray(curvature(grid), dtype=float)
    table = SweepTable(
        columns=("e", "expectation", "motivation", "persistence"),
        rows=tuple(
            (float(e), float(a), float(b), float(c))
            for e, a, b, c in zip(grid, ev, mv, pv)
        ),
    )
    emit_report(table, format="csv", destination=args.out)
    return 0


def _cmd_simulate(args) -> int:
    doc = parse_scenario(args.file)
    contract = _resolve_contract(doc, args.contract)
    if args.n < 1:
        raise ContractGameError("--n must be at least 1")
    seed = args.seed if args.seed is not None else doc.options.seed
    result = monte_carlo_payoffs(doc.scenario, contract, args.effort, args.n, seed)
    print(render_json(result_to_dict(result)))
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "solve-agent": _cmd_solve_agent,
    "classify-risk": _cmd_classify_risk,
    "analyze": _cmd_analyze,
    "solve-game": _cmd_solve_game,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except ContractGameError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
