"""Query execution: one model, one limits policy, reusable by every front end.

A session owns a parsed model and answers query text with a QueryResult.
Sticky assumptions (the REPL's ``:assume``) are appended after the query's
own assumptions, so a query-local ``set`` on the same target wins.  Errors
never escape ``run_text``: they come back as structured diagnostics.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

from .errors import CapacityError, Diagnostic, DogwatchError, ParseError
from .layer1 import ambient_model, apply_evidence, eval_l1, min_sat_set
from .layer2 import apply_prob_evidence, eval_l2, rho
from .layer3 import (ConfigSet, full_config_set, most_risky, optimal_conf,
                     restrict_configs, total_risk, witness_scenario)
from .limits import Limits
from .logic import (CEvidence, LEvidence, LMrs, MostRisky, OptimalConf,
                    TotalRisk)
from .model import Attribution, Dog, GateKind
from .ops import default_config
from .queries import Assumption, Plan, Query, parse_query, translate


@dataclass
class QueryResult:
    """The uniform answer shape shared by the CLI, REPL and service."""

    mode: str | None
    layer: int | None
    value: object
    witnesses: dict
    diagnostics: list[Diagnostic]
    elapsed_ms: float
    error_kind: str | None = None  # parse|query|capacity when value is None

    @property
    def ok(self) -> bool:
        return self.error_kind is None

    def to_json(self, include_witnesses: bool = True) -> dict:
        return {
            "mode": self.mode,
            "layer": self.layer,
            "value": self.value,
            "witnesses": self.witnesses if include_witnesses else {},
            "diagnostics": [d.to_json() for d in self.diagnostics],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json_text(self, include_witnesses: bool = True) -> str:
        return json.dumps(self.to_json(include_witnesses), indent=2,
                          sort_keys=True)


def _bits(assignment: dict[str, bool]) -> dict[str, int]:
    return {label: int(value) for label, value in sorted(assignment.items())}


def _is_gate(dog: Dog, label: str) -> bool:
    side = dog.side_of(label)
    return (side is not None
            and dog.tree(side).node(label).gate is not GateKind.LEAF)


class Session:
    def __init__(self, dog: Dog, attribution: Attribution,
                 limits: Limits | None = None):
        self.dog = dog
        self.attribution = attribution
        self.limits = limits or Limits()
        self.sticky: list[tuple[str, Assumption]] = []

    # -- sticky assumptions (REPL state) ------------------------------------

    def add_sticky(self, text: str, assumption: Assumption) -> None:
        self.sticky.append((text, assumption))

    def clear_sticky(self) -> None:
        self.sticky.clear()

    def sticky_lines(self) -> list[str]:
        return [text for text, _ in self.sticky]

    # -- execution -----------------------------------------------------------

    def run_text(self, text: str) -> QueryResult:
        started = time.perf_counter()
        mode: str | None = None
        layer: int | None = None
        try:
            query = parse_query(text)
            mode = query.mode
            if self.sticky:
                query = Query(query.mode,
                              query.assumptions
                              + tuple(a for _, a in self.sticky),
                              query.body, query.spans)
            plan = translate(query, self.dog)
            layer = plan.layer
            value, witnesses = self._evaluate(plan)
            elapsed = (time.perf_counter() - started) * 1000.0
            return QueryResult(plan.mode, plan.layer, value, witnesses, [],
                               elapsed)
        except DogwatchError as err:
            elapsed = (time.perf_counter() - started) * 1000.0
            if isinstance(err, ParseError):
                kind = "parse"
            elif isinstance(err, CapacityError):
                kind = "capacity"
            else:
                kind = "query"
            return QueryResult(mode, layer, None, {}, err.diagnostics,
                               elapsed, error_kind=kind)

    def _evaluate(self, plan: Plan) -> tuple[object, dict]:
        handler = {
            "check-l1": self._run_check_l1,
            "check-l2": self._run_check_l2,
            "scenarios": self._run_scenarios,
            "probability": self._run_probability,
            "most-risky": self._run_most_risky,
            "total-risk": self._run_total_risk,
            "optimal-conf": self._run_optimal_conf,
        }[plan.kind]
        return handler(plan)

    def _run_check_l1(self, plan: Plan) -> tuple[object, dict]:
        # Leading property and leaf evidence is the assumed part of the
        # world; fold it into the ambient model so the witness reports it.
        # Gate evidence stays in the formula, where evaluation prunes.
        model = ambient_model(self.dog)
        body = plan.l1
        while isinstance(body, LEvidence) and not _is_gate(self.dog,
                                                           body.target):
            model = apply_evidence(model, body.target, body.value)
            body = body.inner
        value = eval_l1(model, body, self.limits)
        witnesses = {"scenario": _bits(dict(model.scenario)),
                     "config": _bits(dict(model.config))}
        return value, witnesses

    def _run_scenarios(self, plan: Plan) -> tuple[object, dict]:
        phi = plan.l1
        assert isinstance(phi, LMrs)
        # Leading property evidence moves into the ambient configuration so
        # the witness reports it; leaf and module evidence stays in the
        # formula, where enumeration handles the context switch.
        config = dict(default_config(self.dog))
        body = phi.inner
        while isinstance(body, LEvidence) and self.dog.is_property(body.target):
            config[body.target] = body.value
            body = body.inner
        scenarios = min_sat_set(self.dog, config, body, self.limits)
        value = [_bits(s) for s in scenarios]
        return value, {"config": _bits(config)}

    def _apply_prob_evidence(self, plan: Plan) -> tuple[Dog, Attribution]:
        dog, attribution = self.dog, self.attribution
        for target, prob in plan.prob_evidence:
            # Ranking plans carry no formula whose atoms could clash with a
            # pruned subtree, so the scope check only sees layer-1 bodies.
            dog, attribution = apply_prob_evidence(dog, attribution, target,
                                                   prob, plan.l1)
        return dog, attribution

    def _run_probability(self, plan: Plan) -> tuple[object, dict]:
        dog, attribution = self._apply_prob_evidence(plan)
        # Property evidence moves into the evaluation configuration so the
        # witness reports it; leaf and module evidence stays in the formula,
        # where enumeration handles the context switch.
        config = dict(default_config(dog))
        body = plan.l1
        while isinstance(body, LEvidence) and dog.is_property(body.target):
            config[body.target] = body.value
            body = body.inner
        value = rho(dog, attribution, config, body, self.limits)
        return value, {"config": _bits(config)}

    def _run_check_l2(self, plan: Plan) -> tuple[object, dict]:
        trace: list = []
        value = eval_l2(self.dog, self.attribution,
                        default_config(self.dog), plan.l2, self.limits,
                        trace)
        witnesses = {"thresholds": [
            {"formula": text, "probability": prob, "holds": verdict}
            for text, prob, verdict in trace]}
        return value, witnesses

    def _peel_config(self, plan: Plan) -> tuple[object, ConfigSet]:
        xi = plan.l3
        configs = full_config_set(self.dog)
        while isinstance(xi, CEvidence):
            configs = restrict_configs(configs, xi.prop, xi.value)
            xi = xi.inner
        return xi, configs

    def _run_most_risky(self, plan: Plan) -> tuple[object, dict]:
        xi, configs = self._peel_config(plan)
        assert isinstance(xi, MostRisky)
        dog, attribution = self._apply_prob_evidence(plan)
        value, winners, config, risks = most_risky(
            dog, attribution, xi.object, xi.side, configs, self.limits)
        scenarios = {}
        for label in winners:
            scenario = witness_scenario(dog, attribution, label, config,
                                        self.limits)
            scenarios[label] = None if scenario is None else _bits(scenario)
        witnesses = {"risk": value,
                     "config": _bits(config),
                     "risks": {label: risks[label] for label in sorted(risks)},
                     "scenarios": scenarios}
        return winners, witnesses

    def _run_total_risk(self, plan: Plan) -> tuple[object, dict]:
        xi, configs = self._peel_config(plan)
        assert isinstance(xi, TotalRisk)
        dog, attribution = self._apply_prob_evidence(plan)
        value, config = total_risk(dog, attribution, xi.object, xi.mode,
                                   configs, self.limits)
        return value, {"config": _bits(config)}

    def _run_optimal_conf(self, plan: Plan) -> tuple[object, dict]:
        xi, configs = self._peel_config(plan)
        assert isinstance(xi, OptimalConf)
        dog, attribution = self._apply_prob_evidence(plan)
        value, winners = optimal_conf(dog, attribution, xi.object, configs,
                                      self.limits)
        return [_bits(c) for c in winners], {"risk": value}
