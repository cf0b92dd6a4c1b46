"""Second-player heuristics: perfect mirroring through an isomorphism,
greedy trigger avoidance over admissible answers, and seeded random
constrained play.  All are deterministic given their construction arguments.
"""
from __future__ import annotations

import random
from typing import Optional

from ..engine import (
    SIDE_G,
    GameConfig,
    PendingPosition,
    apply_existential,
    losing_conditions,
)
from ..graphs import VertexMap, bits, find_isomorphism, mask_of
from .filters import AnswerPlanner, PlanBudgetError, ResponseFilter, default_rules


class MirrorPlayer:
    """Copy every move through a fixed isomorphism g -> h."""

    def __init__(self, cfg: GameConfig, iso: VertexMap):
        self.cfg = cfg
        self.fwd = iso.as_dict
        self.rev = {b: a for a, b in iso.pairs}

    def answer(self, cfg: GameConfig, pending: PendingPosition, history) -> int:
        table = self.fwd if pending.move.side == SIDE_G else self.rev
        if pending.move.kind == "pebble":
            return table[pending.move.vertex]
        return mask_of(table[v] for v in bits(pending.move.vertices or 0))


class GreedySpectrumPlayer:
    """Pick the admissible answer with the fewest immediate triggers,
    breaking ties lexicographically."""

    def __init__(self, cfg: GameConfig, rules: Optional[frozenset] = None, budget: int = 1 << 14):
        self.cfg = cfg
        self.budget = budget
        use = rules if rules is not None else default_rules(cfg.colours)
        self.planner = AnswerPlanner(cfg, ResponseFilter(use)) if use else None

    def _candidates(self, cfg, pending) -> list[int]:
        if pending.move.kind == "pebble":
            return list(range(cfg.graph(pending.answer_side).n))
        if self.planner is not None:
            try:
                cands = self.planner.admissible(pending, self.budget)
                if cands:
                    return cands
            except PlanBudgetError:
                pass
        n = cfg.graph(pending.answer_side).n
        if 1 << n > self.budget:
            raise PlanBudgetError("answer space too large for greedy play")
        return list(range(1 << n))

    def answer(self, cfg: GameConfig, pending: PendingPosition, history) -> int:
        best = None
        for ans in self._candidates(cfg, pending):
            committed = apply_existential(pending, ans, cfg)
            score = (len(losing_conditions(committed, cfg)), ans)
            if best is None or score < best[0]:
                best = (score, ans)
        assert best is not None
        return best[1]


class RandomConstrainedPlayer:
    """Uniform choice among admissible answers, reproducible from the seed."""

    def __init__(self, cfg: GameConfig, seed: int, rules: Optional[frozenset] = None, budget: int = 1 << 14):
        self.cfg = cfg
        self.seed = seed
        self.greedy = GreedySpectrumPlayer(cfg, rules, budget)

    def answer(self, cfg: GameConfig, pending: PendingPosition, history) -> int:
        rng = random.Random(self.seed * 1000003 + len(history))
        cands = self.greedy._candidates(cfg, pending)
        return rng.choice(sorted(cands))


def eloise_heuristic(name: str, cfg: GameConfig, seed: Optional[int] = None):
    """Build a second-player heuristic by name: ``mirror`` (isomorphic pairs
    only), ``greedy_spectrum``, or ``random_constrained``."""
    if name == "mirror":
        iso = find_isomorphism(cfg.g, cfg.h)
        if iso is None:
            raise ValueError("mirror play needs an isomorphism")
        return MirrorPlayer(cfg, iso)
    if name == "greedy_spectrum":
        return GreedySpectrumPlayer(cfg)
    if name == "random_constrained":
        return RandomConstrainedPlayer(cfg, seed if seed is not None else 0)
    raise ValueError(f"unknown heuristic {name!r}")
