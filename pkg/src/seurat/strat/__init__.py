"""Scripted strategies, necessary-response filters, punishments, heuristics
and the certification verifier."""
from .filters import (
    AnswerPlanner,
    PlanBudgetError,
    ResponseFilter,
    Violation,
    constraint_filter,
    default_rules,
)
from .heuristics import eloise_heuristic
from .punish import punishment_player
from .scripts import TallyMap, build_tally_map, scripted
from .certify import Certificate, VerifyResult, verify

__all__ = [
    "AnswerPlanner",
    "PlanBudgetError",
    "ResponseFilter",
    "Violation",
    "constraint_filter",
    "default_rules",
    "eloise_heuristic",
    "punishment_player",
    "TallyMap",
    "build_tally_map",
    "scripted",
    "Certificate",
    "VerifyResult",
    "verify",
]
