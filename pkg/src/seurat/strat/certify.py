"""Strategy certification: drive a scripted first player against exhaustive,
filtered-exhaustive or heuristic second players and either assemble a
verified win tree or return the surviving playout.

A certificate's leaves all carry triggers.  Under filtered coverage the
unexplored answers are exactly the rule violators; each such frontier is
tagged with the licensing rules and the replay bound of their punishment
scripts, so the soundness chain is auditable.  Heuristic coverage never
certifies; it can only refute or report "not refuted".
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..engine import (
    GameConfig,
    Move,
    PendingPosition,
    Position,
    apply_existential,
    apply_universal,
    initial_position,
    losing_conditions,
)
from .filters import AnswerPlanner, PlanBudgetError, ResponseFilter
from .punish import Round, ScriptExhausted
from .scripts import InapplicableError


@dataclass
class CertNode:
    triggers: list = field(default_factory=list)
    move: Optional[Move] = None
    children: list = field(default_factory=list)  # (answer, CertNode)
    punished: Optional[dict] = None

    @property
    def is_leaf(self) -> bool:
        return self.move is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max((c.depth() for _, c in self.children), default=0)

    def count(self) -> int:
        return 1 + sum(c.count() for _, c in self.children)

    def to_json(self) -> dict:
        if self.is_leaf:
            return {"triggers": [t.to_json() for t in self.triggers]}
        doc: dict = {
            "move": self.move.to_json(),
            "answers": [
                {"answer": a, "node": c.to_json()} for a, c in self.children
            ],
        }
        if self.punished is not None:
            doc["punished"] = self.punished
        return doc


@dataclass
class Certificate:
    root: CertNode
    coverage: str
    rules: list
    depth: int
    node_count: int

    def to_json(self) -> dict:
        return {
            "result": "certificate",
            "coverage": self.coverage,
            "rules": self.rules,
            "depth": self.depth,
            "node_count": self.node_count,
            "tree": self.root.to_json(),
        }

    def replay_triggers(self) -> list:
        out = []

        def walk(node):
            if node.is_leaf:
                out.append(tuple(t.kind for t in node.triggers))
                return
            for _a, c in node.children:
                walk(c)

        walk(self.root)
        return out


@dataclass
class VerifyResult:
    kind: str  # "certificate" | "refuted" | "not_refuted" | "partial"
    certificate: Optional[Certificate] = None
    playout: Optional[list] = None
    reason: Optional[str] = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"result": self.kind, "stats": self.stats}
        if self.certificate is not None:
            doc.update(self.certificate.to_json())
            doc["result"] = "certificate"
        if self.playout is not None:
            doc["playout"] = self.playout
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc


class _Refuted(Exception):
    def __init__(self, history):
        self.history = history


def _playout_json(history: Sequence[Round]) -> list:
    return [{"move": r.move.to_json(), "answer": r.answer} for r in history]


def verify(
    strategy,
    cfg: Optional[GameConfig] = None,
    adversary: str = "exhaustive",
    depth: int = 4,
    filt: Optional[ResponseFilter] = None,
    seeds: Sequence[int] = (0, 1, 2),
    heuristics: Sequence[str] = ("greedy_spectrum", "random_constrained"),
    answer_budget: int = 200_000,
    start: Optional[Position] = None,
    prefix: Sequence[Round] = (),
) -> VerifyResult:
    """Certify a first-player strategy or find the surviving playout.

    ``exhaustive`` explores every answer; ``filtered_exhaustive`` explores
    the filter's admissible answers and tags the violating complement as
    punished; ``heuristic_suite`` plays one line per heuristic and seed.
    """
    cfg = cfg if cfg is not None else strategy.cfg
    t0 = time.monotonic()
    stats = {"nodes": 0}

    if adversary == "heuristic_suite":
        return _heuristic_suite(strategy, cfg, depth, seeds, heuristics, start, prefix, stats, t0)

    planner = None
    if adversary == "filtered_exhaustive":
        if filt is None:
            raise ValueError("filtered_exhaustive needs a filter")
        planner = AnswerPlanner(cfg, filt)
    elif adversary != "exhaustive":
        raise ValueError(f"unknown adversary {adversary!r}")

    def answers_for(pend: PendingPosition) -> tuple[list[int], Optional[dict]]:
        if planner is not None:
            adm = planner.admissible(pend, answer_budget)
            return adm, {
                "rules": sorted(planner.filt.rules),
                "replay_bound": planner.punish_bound,
            }
        graph = cfg.graph(pend.answer_side)
        total = (1 << graph.n) if pend.move.kind == "colour" else graph.n
        if total > answer_budget:
            raise PlanBudgetError("exhaustive answer space exceeds budget")
        return list(range(total)), None

    def explore(pos: Position, history: tuple, d: int) -> CertNode:
        stats["nodes"] += 1
        trigs = losing_conditions(pos, cfg)
        if trigs:
            return CertNode(triggers=trigs)
        if d == 0:
            raise _Refuted(history)
        mv = strategy.move(cfg, history, pos)
        pend = apply_universal(pos, mv, cfg)
        explored, punished = answers_for(pend)
        node = CertNode(move=mv, punished=punished)
        if not explored and punished is None:
            raise _Refuted(history)
        for ans in explored:
            nxt = apply_existential(pend, ans, cfg)
            child = explore(nxt, history + (Round(mv, ans, nxt),), d - 1)
            node.children.append((ans, child))
        return node

    start_pos = start if start is not None else initial_position(cfg)
    try:
        root = explore(start_pos, tuple(prefix), depth)
    except _Refuted as r:
        stats["elapsed"] = time.monotonic() - t0
        return VerifyResult("refuted", playout=_playout_json(r.history), stats=stats)
    except (PlanBudgetError, InapplicableError, ScriptExhausted) as exc:
        stats["elapsed"] = time.monotonic() - t0
        return VerifyResult("partial", reason=str(exc), stats=stats)
    stats["elapsed"] = time.monotonic() - t0
    coverage = (
        "exhaustive" if planner is None else f"filtered({','.join(sorted(planner.filt.rules))})"
    )
    cert = Certificate(
        root=root,
        coverage=coverage,
        rules=sorted(planner.filt.rules) if planner else [],
        depth=root.depth(),
        node_count=root.count(),
    )
    return VerifyResult("certificate", certificate=cert, stats=stats)


def _heuristic_suite(strategy, cfg, depth, seeds, heuristics, start, prefix, stats, t0):
    from .heuristics import eloise_heuristic

    playouts = 0
    for name in heuristics:
        for seed in seeds:
            try:
                player = eloise_heuristic(name, cfg, seed=seed)
            except ValueError:
                continue
            pos = start if start is not None else initial_position(cfg)
            history = tuple(prefix)
            survived = True
            for _ in range(depth):
                if losing_conditions(pos, cfg):
                    survived = False
                    break
                try:
                    mv = strategy.move(cfg, history, pos)
                except (InapplicableError, ScriptExhausted) as exc:
                    stats["elapsed"] = time.monotonic() - t0
                    return VerifyResult("partial", reason=str(exc), stats=stats)
                pend = apply_universal(pos, mv, cfg)
                ans = player.answer(cfg, pend, history)
                pos = apply_existential(pend, ans, cfg)
                history = history + (Round(mv, ans, pos),)
            if survived and not losing_conditions(pos, cfg):
                stats["elapsed"] = time.monotonic() - t0
                return VerifyResult(
                    "refuted", playout=_playout_json(history), stats=stats
                )
            playouts += 1
    stats["playouts"] = playouts
    stats["elapsed"] = time.monotonic() - t0
    return VerifyResult("not_refuted", stats=stats)
