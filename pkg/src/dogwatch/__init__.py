"""Risk analysis over object-oriented disruption graphs.

The package models systems whose attack and fault trees are annotated with
the objects they involve and the object properties that gate them, and
answers three layers of queries: Boolean world checks, risk probabilities
against an adaptive attacker, and per-object risk rankings with
configuration optimization.
"""

from .conditions import Cond, cond_to_text, eval_cond
from .errors import (CapacityError, Diagnostic, DogwatchError,
                     EmptyParticipationError, ModelError, ParseError,
                     QueryError)
from .layer1 import (ModelL1, ambient_model, apply_evidence, eval_l1,
                     min_sat_set)
from .layer2 import (best_attack_scenario, eval_l2, max_attack_prob,
                     prob_fault_scenario, rho, set_transform)
from .layer3 import (ConfigSet, can_fire, full_config_set, most_risky,
                     obj_risk_val, optimal_conf, participation_set,
                     restrict_configs, total_risk, witness_scenario)
from .limits import Limits, limits_from_env
from .logic import (FormulaL1, FormulaL2, FormulaL3, LAnd, LAtom, LConst,
                    LEvidence, LMrs, LNot, MostRisky, OptimalConf, PAnd,
                    PEvidence, PNot, PThreshold, TotalRisk, CEvidence,
                    l1_to_text, l2_to_text, l3_to_text, l_impl, l_or)
from .model import (Attribution, Dog, DisruptionTree, GateKind, KnowledgeBase,
                    ObjectGraph, ObjectNode, TreeNode, effective_participants,
                    preconditions)
from .ops import (default_config, default_scenario, eval_element, is_module,
                  prune_to_module)
from .queries import Plan, Query, parse_assumptions, parse_query, translate
from .session import QueryResult, Session
from .textfmt import (model_from_json, model_to_json, parse_model,
                      print_model)
from .validate import ValidationReport, Violation, validate

__version__ = "0.1.0"

__all__ = [
    "Attribution", "CEvidence", "CapacityError", "Cond", "ConfigSet",
    "Diagnostic", "DisruptionTree", "Dog", "DogwatchError",
    "EmptyParticipationError", "FormulaL1", "FormulaL2", "FormulaL3",
    "GateKind", "KnowledgeBase", "LAnd", "LAtom", "LConst", "LEvidence",
    "LMrs", "LNot", "Limits", "ModelError", "ModelL1", "MostRisky",
    "ObjectGraph", "ObjectNode", "OptimalConf", "PAnd", "PEvidence", "PNot",
    "PThreshold", "ParseError", "Plan", "Query", "QueryError", "QueryResult",
    "Session", "TotalRisk", "TreeNode", "ValidationReport", "Violation",
    "ambient_model", "apply_evidence", "best_attack_scenario", "can_fire",
    "cond_to_text", "default_config",
    "default_scenario", "effective_participants", "eval_cond", "eval_element",
    "eval_l1", "eval_l2", "full_config_set", "is_module", "l1_to_text",
    "l2_to_text", "l3_to_text", "l_impl", "l_or", "limits_from_env",
    "max_attack_prob", "min_sat_set", "model_from_json", "model_to_json",
    "most_risky", "obj_risk_val", "optimal_conf", "parse_assumptions",
    "parse_model", "parse_query", "participation_set", "preconditions",
    "print_model", "prob_fault_scenario", "prune_to_module", "rho",
    "restrict_configs", "set_transform", "total_risk", "translate",
    "validate", "witness_scenario",
]
