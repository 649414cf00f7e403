"""Scenario documents: strict JSON parsing and precise report emission.

A scenario document is UTF-8 JSON with ``"schema": 1``.  Parsing is strict:
unknown keys anywhere in the document are rejected, so a typo in a curve
parameter fails loudly instead of silently changing the economics.  All
floating-point output is rendered with 17 significant digits, which
round-trips 64-bit floats exactly, and keys are emitted in a fixed order,
so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, fields

from . import agent as _agent
from . import analyses as _analyses
from . import model as _model
from . import principal as _principal
from .agent import BestResponse, RiskClassification
from .analyses import (
    AssumptionCheck,
    ClassicalAssumptionsReport,
    InvisibleEffortReport,
    TwoOutcomeLinearReport,
)
from .curves import Curve, ExpAffine, LogAffine, Polynomial, Power, Tabulated
from .errors import ContractGameError, ParseError, ValidationError
from .model import (
    AgentPreferences,
    Contract,
    EffortInterval,
    EffortProfile,
    PrincipalPreferences,
    Scenario,
    scenario_validate,
)
from .oracle import SimulationResult
from .principal import ContractFamily, GameSolution, WageGrid

__all__ = [
    "SolverOptions",
    "ScenarioDocument",
    "SweepTable",
    "parse_scenario",
    "document_from_dict",
    "document_to_dict",
    "curve_from_spec",
    "curve_to_spec",
    "result_to_dict",
    "render_json",
    "emit_report",
]


@dataclass(frozen=True)
class SolverOptions:
    """Document-overridable solver tunables (defaults match the modules)."""

    epsilon_invisible: float = _analyses.EPSILON_INVISIBLE
    tie_break: str = "principal-favorable"
    seed: int = 0
    mt_grid_points: int = _agent.MT_GRID_POINTS
    scan_grid_points: int = _agent.SCAN_GRID_POINTS
    risk_grid_points: int = _agent.RISK_GRID_POINTS
    validation_grid_points: int = _model.VALIDATION_GRID_POINTS
    refine_tolerance: float = _agent.REFINE_TOL
    effort_tolerance: float = _agent.TAU_E
    expectation_tie_tolerance: float = _agent.TAU_EXPECTATION

    def best_response_kwargs(self) -> dict:
        return {
            "mt_points": self.mt_grid_points,
            "scan_points": self.scan_grid_points,
            "refine_tol": self.refine_tolerance,
            "effort_tol": self.effort_tolerance,
            "tie_tol": self.expectation_tie_tolerance,
        }


@dataclass(frozen=True)
class ScenarioDocument:
    scenario: Scenario
    contracts: tuple[Contract, ...]
    contract_family: ContractFamily | None
    options: SolverOptions


@dataclass(frozen=True)
class SweepTable:
    """Plot-ready table; serialized as CSV with one header row."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]


# ---------------------------------------------------------------------------
# strict parsing

def _check_keys(obj: dict, allowed, required, path: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    for key in obj:
        if key not in allowed:
            raise ParseError(f"{path}: unknown key {key!r}")
    for key in required:
        if key not in obj:
            raise ParseError(f"{path}: missing required key {key!r}")


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}: expected an integer, got {value!r}")
    return value


def _number_list(value, path: str) -> list[float]:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected a list of numbers")
    return [_number(x, f"{path}[{i}]") for i, x in enumerate(value)]


_CURVE_KEYS = {
    "polynomial": ({"family", "coefficients"}, {"coefficients"}),
    "exp-affine": ({"family", "a", "b", "c"}, {"a", "b", "c"}),
    "log-affine": ({"family", "a", "b", "c"}, {"a", "b", "c"}),
    "power": ({"family", "a", "gamma", "c"}, {"a", "gamma", "c"}),
    "tabulated": ({"family", "knots", "values"}, {"knots", "values"}),
}


def curve_from_spec(spec, path: str) -> Curve:
    if not isinstance(spec, dict):
        raise ParseError(f"{path}: expected a curve object")
    family = spec.get("family")
    if family not in _CURVE_KEYS:
        raise ParseError(
            f"{path}: unknown curve family {family!r}; "
            f"expected one of {sorted(_CURVE_KEYS)}"
        )
    allowed, required = _CURVE_KEYS[family]
    _check_keys(spec, allowed, required, path)
    try:
        if family == "polynomial":
            return Polynomial(tuple(_number_list(spec["coefficients"], f"{path}.coefficients")))
        if family == "exp-affine":
            return ExpAffine(
                _number(spec["a"], f"{path}.a"),
                _number(spec["b"], f"{path}.b"),
                _number(spec["c"], f"{path}.c"),
            )
        if family == "log-affine":
            return LogAffine(
                _number(spec["a"], f"{path}.a"),
                _number(spec["b"], f"{path}.b"),
                _number(spec["c"], f"{path}.c"),
            )
        if family == "power":
            return Power(
                _number(spec["a"], f"{path}.a"),
                _number(spec["gamma"], f"{path}.gamma"),
                _number(spec["c"], f"{path}.c"),
            )
        return Tabulated(
            tuple(_number_list(spec["knots"], f"{path}.knots")),
            tuple(_number_list(spec["values"], f"{path}.values")),
        )
    except ValueError as err:
        raise ParseError(f"{path}: {err}") from err


def curve_to_spec(curve: Curve) -> dict:
    if isinstance(curve, Polynomial):
        return {"family": "polynomial", "coefficients": list(curve.coefficients)}
    if isinstance(curve, ExpAffine):
        return {"family": "exp-affine", "a": curve.a, "b": curve.b, "c": curve.c}
    if isinstance(curve, LogAffine):
        return {"family": "log-affine", "a": curve.a, "b": curve.b, "c": curve.c}
    if isinstance(curve, Power):
        return {"family": "power", "a": curve.a, "gamma": curve.gamma, "c": curve.c}
    if isinstance(curve, Tabulated):
        return {
            "family": "tabulated",
            "knots": list(curve.knots),
            "values": list(curve.values),
        }
    raise TypeError(f"cannot serialize curve {curve!r}")


_TOP_KEYS = {
    "schema",
    "outcomes",
    "effort_interval",
    "profile",
    "agent",
    "principal",
    "contracts",
    "contract_family",
    "options",
}
_TOP_REQUIRED = {
    "schema",
    "outcomes",
    "effort_interval",
    "profile",
    "agent",
    "principal",
}


def document_from_dict(raw: dict) -> ScenarioDocument:
    """Build and grid-validate a document from parsed JSON."""
    _check_keys(raw, _TOP_KEYS, _TOP_REQUIRED, "document")
    if raw["schema"] != 1:
        raise ParseError(f"document: unsupported schema {raw['schema']!r}")

    outcomes = _number_list(raw["outcomes"], "outcomes")
    bounds = _number_list(raw["effort_interval"], "effort_interval")
    if len(bounds) != 2:
        raise ParseError("effort_interval: expected [lo, hi]")

    if not isinstance(raw["profile"], list):
        raise ParseError("profile: expected a list of curves")
    components = tuple(
        curve_from_spec(spec, f"profile[{i}]")
        for i, spec in enumerate(raw["profile"])
    )

    agent_raw = raw["agent"]
    _check_keys(
        agent_raw,
        {"utility", "effort_cost", "reservation_utility"},
        {"utility", "effort_cost"},
        "agent",
    )
    agent_prefs = AgentPreferences(
        utility=curve_from_spec(agent_raw["utility"], "agent.utility"),
        effort_cost=curve_from_spec(agent_raw["effort_cost"], "agent.effort_cost"),
        reservation_utility=_number(
            agent_raw.get("reservation_utility", 0.0), "agent.reservation_utility"
        ),
    )

    principal_raw = raw["principal"]
    _check_keys(principal_raw, {"utility"}, {"utility"}, "principal")
    principal_prefs = PrincipalPreferences(
        utility=curve_from_spec(principal_raw["utility"], "principal.utility")
    )

    contracts = tuple(
        Contract(tuple(_number_list(w, f"contracts[{i}]")))
        for i, w in enumerate(raw.get("contracts", []))
    )

    family = None
    if "contract_family" in raw:
        try:
            family = _family_from_dict(raw["contract_family"], len(outcomes))
        except (ParseError, ValidationError):
            raise
        except ContractGameError as err:
            raise ValidationError([err]) from err

    options = _options_from_dict(raw.get("options", {}))

    try:
        scenario = Scenario(
            outcomes=tuple(outcomes),
            interval=EffortInterval(bounds[0], bounds[1]),
            profile=EffortProfile(components),
            agent=agent_prefs,
            principal=principal_prefs,
        )
    except ContractGameError as err:
        raise ValidationError([err]) from err

    issues = scenario_validate(
        scenario, contracts, grid_points=options.validation_grid_points
    )
    if issues:
        raise ValidationError(issues)
    return ScenarioDocument(scenario, contracts, family, options)


def _family_from_dict(raw: dict, n_outcomes: int) -> ContractFamily:
    _check_keys(
        raw, {"contracts", "wage_grids", "cap"}, set(), "contract_family"
    )
    cap = _integer(raw.get("cap", _principal.ENUMERATION_CAP), "contract_family.cap")
    has_list = "contracts" in raw
    has_grids = "wage_grids" in raw
    if has_list == has_grids:
        raise ParseError(
            "contract_family: expected exactly one of 'contracts', 'wage_grids'"
        )
    try:
        if has_list:
            contracts = tuple(
                Contract(tuple(_number_list(w, f"contract_family.contracts[{i}]")))
                for i, w in enumerate(raw["contracts"])
            )
            for i, c in enumerate(contracts):
                if len(c) != n_outcomes:
                    raise ValidationError(
                        [
                            ContractGameError(
                                f"contract_family.contracts[{i}] has {len(c)} "
                                f"wages for {n_outcomes} outcomes"
                            )
                        ]
                    )
            return ContractFamily(contracts=contracts, cap=cap)
        grids_raw = raw["wage_grids"]
        if not isinstance(grids_raw, list) or len(grids_raw) != n_outcomes:
            raise ParseError(
                f"contract_family.wage_grids: expected {n_outcomes} grids "
                "(one per outcome)"
            )
        grids = []
        for i, g in enumerate(grids_raw):
            gpath = f"contract_family.wage_grids[{i}]"
            _check_keys(g, {"min", "max", "step"}, {"min", "max", "step"}, gpath)
            grids.append(
                WageGrid(
                    _number(g["min"], f"{gpath}.min"),
                    _number(g["max"], f"{gpath}.max"),
                    _number(g["step"], f"{gpath}.step"),
                )
            )
        return ContractFamily(grids=tuple(grids), cap=cap)
    except ContractGameError:
        raise
    except ValueError as err:
        raise ParseError(f"contract_family: {err}") from err


_OPTION_TYPES = {
    "epsilon_invisible": _number,
    "tie_break": None,
    "seed": _integer,
    "mt_grid_points": _integer,
    "scan_grid_points": _integer,
    "risk_grid_points": _integer,
    "validation_grid_points": _integer,
    "refine_tolerance": _number,
    "effort_tolerance": _number,
    "expectation_tie_tolerance": _number,
}


def _options_from_dict(raw: dict) -> SolverOptions:
    _check_keys(raw, set(_OPTION_TYPES), set(), "options")
    kwargs = {}
    for key, value in raw.items():
        if key == "tie_break":
            if value not in _principal.TIE_BREAK_POLICIES:
                raise ParseError(
                    f"options.tie_break: {value!r} not in "
                    f"{_principal.TIE_BREAK_POLICIES}"
                )
            kwargs[key] = value
        else:
            kwargs[key] = _OPTION_TYPES[key](value, f"options.{key}")
    return SolverOptions(**kwargs)


def parse_scenario(path: str) -> ScenarioDocument:
    """Read, parse, and grid-validate a scenario document from disk."""
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as err:
        raise ParseError(f"{path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(
            f"{path}: invalid JSON at line {err.lineno} column {err.colno}: "
            f"{err.msg}"
        ) from err
    return document_from_dict(raw)


def document_to_dict(doc: ScenarioDocument) -> dict:
    s = doc.scenario
    out = {
        "schema": 1,
        "outcomes": list(s.outcomes),
        "effort_interval": [s.interval.lo, s.interval.hi],
        "profile": [curve_to_spec(c) for c in s.profile.components],
        "agent": {
            "utility": curve_to_spec(s.agent.utility),
            "effort_cost": curve_to_spec(s.agent.effort_cost),
            "reservation_utility": s.agent.reservation_utility,
        },
        "principal": {"utility": curve_to_spec(s.principal.utility)},
    }
    if doc.contracts:
        out["contracts"] = [list(c.wages) for c in doc.contracts]
    if doc.contract_family is not None:
        fam = doc.contract_family
        fam_out: dict = {}
        if fam.contracts is not None:
            fam_out["contracts"] = [list(c.wages) for c in fam.contracts]
        else:
            fam_out["wage_grids"] = [
                {"min": g.lo, "max": g.hi, "step": g.step} for g in fam.grids
            ]
        fam_out["cap"] = fam.cap
        out["contract_family"] = fam_out
    defaults = SolverOptions()
    overrides = {
        f.name: getattr(doc.options, f.name)
        for f in fields(SolverOptions)
        if getattr(doc.options, f.name) != getattr(defaults, f.name)
    }
    if overrides:
        out["options"] = overrides
    return out


# ---------------------------------------------------------------------------
# report conversion

def result_to_dict(result):
    """Convert any solver/report dataclass to a JSON-ready dict."""
    if isinstance(result, BestResponse):
        return {
            "maximizers": [
                {
                    "effort": m.effort,
                    "kind": m.kind.value,
                    "expectation": m.expectation,
                }
                for m in result.maximizers
            ],
            "optimal_expectation": result.optimal_expectation,
            "accepted": result.accepted,
            "constant_expectation": result.constant_expectation,
        }
    if isinstance(result, RiskClassification):
        return {
            "classification": result.classification.value,
            "persistence_min": result.persistence_min,
            "persistence_max": result.persistence_max,
        }
    if isinstance(result, InvisibleEffortReport):
        return {
            "is_invisible": result.is_invisible,
            "max_profile_deviation": result.max_profile_deviation,
            "epsilon": result.epsilon,
            "best_response": (
                result_to_dict(result.best_response)
                if result.best_response is not None
                else None
            ),
            "risk": (
                result_to_dict(result.risk) if result.risk is not None else None
            ),
        }
    if isinstance(result, TwoOutcomeLinearReport):
        return {
            "slope": result.slope,
            "intercept": result.intercept,
            "foc_target": result.foc_target,
            "interior_solutions": list(result.interior_solutions),
            "interior_values": list(result.interior_values),
            "boundary_values": list(result.boundary_values),
            "best_response": result_to_dict(result.best_response),
            "reduces_to_invisible": result.reduces_to_invisible,
            "invisible": (
                result_to_dict(result.invisible)
                if result.invisible is not None
                else None
            ),
        }
    if isinstance(result, AssumptionCheck):
        return {
            "holds": result.holds,
            "witness_point": result.witness_point,
            "witness_value": result.witness_value,
        }
    if isinstance(result, ClassicalAssumptionsReport):
        return {
            "wage_range": list(result.wage_range),
            "u_increasing": result_to_dict(result.u_increasing),
            "u_weakly_concave": result_to_dict(result.u_weakly_concave),
            "v_increasing": result_to_dict(result.v_increasing),
            "v_weakly_convex": result_to_dict(result.v_weakly_convex),
            "inner_work_need": result.inner_work_need,
            "effort_yields_utility": result.effort_yields_utility,
            "cost_concave_somewhere": result.cost_concave_somewhere,
            "classical": result.classical,
        }
    if isinstance(result, GameSolution):
        return {
            "all_rejected": result.all_rejected,
            "contract": list(result.contract.wages) if result.contract else None,
            "effort": result.effort,
            "principal_payoff": result.principal_payoff,
            "agent_payoff": result.agent_payoff,
            "tie_break": result.tie_break,
            "best_response": (
                result_to_dict(result.best_response)
                if result.best_response is not None
                else None
            ),
        }
    if isinstance(result, SimulationResult):
        return {
            "draws": result.draws,
            "agent_mean": result.agent_mean,
            "agent_sd": result.agent_sd,
            "principal_mean": result.principal_mean,
            "principal_sd": result.principal_sd,
            "frequencies": list(result.frequencies),
            "seed": result.seed,
            "generator": result.generator,
        }
    if isinstance(result, dict):
        return result
    raise TypeError(f"cannot serialize result of type {type(result).__name__}")


# ---------------------------------------------------------------------------
# precise emission

def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    return format(x, ".17g")


def render_json(value, indent: int = 2) -> str:
    """Serialize with 17-significant-digit floats and stable key order."""
    pieces: list[str] = []
    _render(value, indent, 0, pieces)
    return "".join(pieces)


def _render(value, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_format_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _render(item, indent, level + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(close_pad + "}")
    elif isinstance(value, (list, tuple)):
        seq = list(value)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(seq):
            out.append(pad)
            _render(item, indent, level + 1, out)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(close_pad + "]")
    else:
        raise TypeError(f"cannot serialize value of type {type(value).__name__}")


def sweep_to_csv(table: SweepTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_format_float(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def emit_report(result, format: str = "json", destination=None) -> None:
    """Write a report as JSON or CSV to a path (or stdout when None)."""
    if format == "json":
        text = render_json(result_to_dict(result)) + "\n"
    elif format == "csv":
        if not isinstance(result, SweepTable):
            raise TypeError("csv output is only defined for sweep tables")
        text = sweep_to_csv(result)
    else:
        raise ValueError(f"unknown format {format!r}")
    if destination is None:
        sys.stdout.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as err:
        raise ContractGameError(f"cannot write {destination}: {err}") from err
