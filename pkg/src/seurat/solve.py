"""Exact and bounded game solving.

A committed position is one vertex-mask per colour per side, so the full
position space factorizes as a (2^n)^k-per-side grid.  Win conditions depend
on the two sides only through per-side palette signatures, which lets the
backward attractor run as vectorized numpy reductions: the first player can
force entry to the won region via colour c on his side iff some replacement
mask forces every answer mask into it, an any-over-all reduction along the
two colour-c axes.

Above the state budget a depth-limited memoized alternating search takes
over, optionally with symmetry reduction (product automorphism action) and
sound pruning by proven-necessary answer constraints.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .engine import (
    MSO,
    SIDE_G,
    STRONG,
    GameConfig,
    Move,
    PendingPosition,
    Position,
    apply_existential,
    apply_universal,
    initial_position,
    losing_conditions,
    position_key,
)
from .graphs import Digraph, automorphisms, bits

SATURATED = 1 << 62


@dataclass(frozen=True)
class SolveLimits:
    max_rounds: Optional[int] = None
    state_budget: int = 1 << 25
    time_budget: Optional[float] = None
    symmetry_reduction: bool = False
    pruning_level: str = "none"  # "none" | "necessary_constraints"
    group_cap: int = 20_000
    mode: Optional[str] = None  # force "attractor" or "search"; default auto

    def __post_init__(self) -> None:
        if self.state_budget <= 0:
            raise ValueError("state budget must be positive")
        if self.pruning_level not in ("none", "necessary_constraints"):
            raise ValueError(f"unknown pruning level {self.pruning_level!r}")
        if self.mode not in (None, "attractor", "search"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class Verdict:
    winner: str  # "forall" | "exists" | "unknown"
    round_bound: Optional[int]
    certified: bool
    mode: str
    stats: dict = field(default_factory=dict)
    _ctx: object = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "winner": self.winner,
            "round_bound": self.round_bound,
            "certified": self.certified,
            "stats": dict(self.stats, mode=self.mode),
        }


def estimate_state_space(cfg: GameConfig) -> int:
    """Committed-position count, saturated for JSON safety."""
    per = (1 << cfg.colours) ** (cfg.g.n + cfg.h.n)
    if cfg.variant == MSO:
        per *= (cfg.g.n * cfg.h.n + 1) ** cfg.pebble_pairs
    return min(per, SATURATED)


# ---------------------------------------------------------------------------
# Per-side palette signatures


@lru_cache(maxsize=256)
def _side_tables(g: Digraph, k: int, strong: bool) -> tuple[np.ndarray, np.ndarray]:
    """(signatures, palettes) over all (2^n)^k colour-plane states of a side.

    State index: colour 0 is the most significant base-2^n digit, so that a
    reshape to (2^n,) * k puts colour c on axis c.  The signature packs the
    realized-palette bitset, the palette-pair edge bits, and (strong only)
    the coverage and origin bits; two sides trigger iff signatures differ.
    """
    n = g.n
    B = 1 << n
    S = B**k
    P = 1 << k
    nbits = P + P * P * (3 if strong else 1)
    words = (nbits + 63) // 64
    sig = np.zeros((S, words), dtype=np.uint64)
    pal_table = np.zeros((S, max(n, 1)), dtype=np.uint8)
    weights = [B ** (k - 1 - c) for c in range(k)]
    for s in range(S):
        masks = [(s // weights[c]) % B for c in range(k)]
        ranges = [0] * P
        for v in range(n):
            pal = 0
            for c in range(k):
                if masks[c] >> v & 1:
                    pal |= 1 << c
            ranges[pal] |= 1 << v
            pal_table[s, v] = pal
        acc = 0
        pos = 0
        outreach = [0] * P
        inreach = [0] * P
        for p in range(P):
            if ranges[p]:
                acc |= 1 << pos
                for u in bits(ranges[p]):
                    outreach[p] |= g.rows[u]
                    inreach[p] |= g.cols[u]
            pos += 1
        for p1 in range(P):
            for p2 in range(P):
                if outreach[p1] & ranges[p2]:
                    acc |= 1 << pos
                pos += 1
        if strong:
            for p1 in range(P):
                for p2 in range(P):
                    if ranges[p1] and ranges[p2] and ranges[p2] & ~outreach[p1] == 0:
                        acc |= 1 << pos
                    pos += 1
            for p1 in range(P):
                for p2 in range(P):
                    if ranges[p1] and ranges[p2] and ranges[p1] & ~inreach[p2] == 0:
                        acc |= 1 << pos
                    pos += 1
        for w in range(words):
            sig[s, w] = (acc >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return sig, pal_table


def _side_index(planes: Sequence[int], B: int, k: int) -> int:
    idx = 0
    for c in range(k):
        idx = idx * B + planes[c]
    return idx


# ---------------------------------------------------------------------------
# Attractor contexts


class AttractorContext:
    """Solved position space: won-region array, entry ranks, and strategies."""

    def __init__(self, cfg: GameConfig, won: np.ndarray, rank: np.ndarray):
        self.cfg = cfg
        self.won = won
        self.rank = rank
        self.k = cfg.colours
        self.BG = 1 << cfg.g.n
        self.BH = 1 << cfg.h.n

    def _index(self, pos: Position) -> tuple:
        idx: tuple = tuple(pos.planes_g) + tuple(pos.planes_h)
        if self.cfg.variant == MSO:
            nH = self.cfg.h.n
            for i in range(self.cfg.pebble_pairs):
                u, v = pos.pebbles_g[i], pos.pebbles_h[i]
                if (u is None) != (v is None):
                    raise ValueError("half-placed pair in a committed position")
                idx += (0 if u is None else 1 + u * nH + v,)
        return idx

    def winning(self, pos: Position) -> bool:
        return bool(self.won[self._index(pos)])

    def win_rank(self, pos: Position) -> int:
        return int(self.rank[self._index(pos)])

    def move_outcomes(self, pos: Position, mv: Move) -> tuple[bool, int]:
        """(all answers lose, worst child rank) for one first-player move."""
        idx = list(self._index(pos))
        if mv.kind == "colour":
            axis = (0 if mv.side == SIDE_G else self.k) + mv.colour
            idx[axis] = mv.vertices
            answer_axis = (self.k if mv.side == SIDE_G else 0) + mv.colour
            idx[answer_axis] = slice(None)
            sl_won = self.won[tuple(idx)]
            sl_rank = self.rank[tuple(idx)]
            return bool(sl_won.all()), int(sl_rank.max())
        nH = self.cfg.h.n
        axis = 2 * self.k + mv.pair
        u = mv.vertex
        if mv.side == SIDE_G:
            codes = [1 + u * nH + v for v in range(nH)]
        else:
            codes = [1 + w * nH + u for w in range(self.cfg.g.n)]
        idx[axis] = codes
        sl_won = self.won[tuple(idx)]
        sl_rank = self.rank[tuple(idx)]
        return bool(sl_won.all()), int(sl_rank.max())

    def answer_values(self, pending: PendingPosition) -> list[tuple[int, bool, int]]:
        """(answer, leads to won region, rank) per answer, answer order."""
        mv = pending.move
        pos = pending.base
        idx = list(self._index(pos))
        if mv.kind == "colour":
            axis = (0 if mv.side == SIDE_G else self.k) + mv.colour
            idx[axis] = mv.vertices
            answer_axis = (self.k if mv.side == SIDE_G else 0) + mv.colour
            idx[answer_axis] = slice(None)
            won = self.won[tuple(idx)]
            rank = self.rank[tuple(idx)]
            return [(a, bool(won[a]), int(rank[a])) for a in range(won.shape[0])]
        nH = self.cfg.h.n
        axis = 2 * self.k + mv.pair
        u = mv.vertex
        if mv.side == SIDE_G:
            codes = [1 + u * nH + v for v in range(nH)]
        else:
            codes = [1 + w * nH + u for w in range(self.cfg.g.n)]
        out = []
        for a, code in enumerate(codes):
            idx[axis] = code
            out.append(
                (a, bool(self.won[tuple(idx)]), int(self.rank[tuple(idx)]))
            )
        return out


def _attractor_plain_strong(cfg: GameConfig, limits: SolveLimits) -> Verdict:
    t0 = time.monotonic()
    k = cfg.colours
    strong = cfg.variant == STRONG
    sigG, _ = _side_tables(cfg.g, k, strong)
    sigH, _ = _side_tables(cfg.h, k, strong)
    bad = (sigG[:, None, :] != sigH[None, :, :]).any(axis=-1)
    BG, BH = 1 << cfg.g.n, 1 << cfg.h.n
    shape = (BG,) * k + (BH,) * k
    won = bad.reshape(shape)
    rank = np.where(won, 0, np.iinfo(np.uint32).max).astype(np.uint32)
    rounds = 0
    while True:
        rounds += 1
        forced = np.zeros_like(won)
        for c in range(k):
            forced |= np.any(np.all(won, axis=k + c, keepdims=True), axis=c, keepdims=True)
            forced |= np.any(np.all(won, axis=c, keepdims=True), axis=k + c, keepdims=True)
        grown = forced & ~won
        if not grown.any():
            break
        rank[grown] = rounds
        won |= forced
        if limits.time_budget and time.monotonic() - t0 > limits.time_budget:
            return Verdict("unknown", None, False, "attractor", {"reason": "time budget"})
    ctx = AttractorContext(cfg, won, rank)
    elapsed = time.monotonic() - t0
    stats = {
        "explored_states": int(won.size),
        "iterations": rounds,
        "elapsed": elapsed,
    }
    zero = (0,) * (2 * k)
    if won[zero]:
        return Verdict("forall", int(rank[zero]), True, "attractor", stats, ctx)
    return Verdict("exists", None, True, "attractor", stats, ctx)


def _attractor_mso(cfg: GameConfig, limits: SolveLimits) -> Verdict:
    t0 = time.monotonic()
    k, m = cfg.colours, cfg.pebble_pairs
    nG, nH = cfg.g.n, cfg.h.n
    BG, BH = 1 << nG, 1 << nH
    P = nG * nH + 1
    sigG, palG = _side_tables(cfg.g, k, False)
    sigH, palH = _side_tables(cfg.h, k, False)
    bad_pal = (sigG[:, None, :] != sigH[None, :, :]).any(axis=-1)
    shape = (BG,) * k + (BH,) * k + (P,) * m
    won = np.zeros(shape, dtype=bool)
    flat = won.reshape(BG**k, BH**k, P**m)
    from itertools import product as iproduct

    for cfg_idx, pebs in enumerate(iproduct(range(P), repeat=m)):
        placed = []
        static_bad = False
        for code in pebs:
            if code:
                placed.append(((code - 1) // nH, (code - 1) % nH))
        for i, (u, v) in enumerate(placed):
            for u2, v2 in placed:
                if (u == u2) != (v == v2):
                    static_bad = True
                if cfg.g.has_edge(u, u2) != cfg.h.has_edge(v, v2):
                    static_bad = True
        if static_bad:
            flat[:, :, cfg_idx] = True
            continue
        slab = bad_pal.copy()
        for u, v in placed:
            slab |= palG[:, u][:, None] != palH[:, v][None, :]
        flat[:, :, cfg_idx] = slab
    rank = np.where(won, 0, np.iinfo(np.uint32).max).astype(np.uint32)
    rounds = 0
    while True:
        rounds += 1
        forced = np.zeros_like(won)
        for c in range(k):
            forced |= np.any(np.all(won, axis=k + c, keepdims=True), axis=c, keepdims=True)
            forced |= np.any(np.all(won, axis=c, keepdims=True), axis=k + c, keepdims=True)
        for j in range(m):
            ax = 2 * k + j
            moved = np.moveaxis(won, ax, -1)
            placed_view = moved[..., 1:].reshape(moved.shape[:-1] + (nG, nH))
            f = placed_view.all(axis=-1).any(axis=-1) | placed_view.all(axis=-2).any(axis=-1)
            f_full = np.broadcast_to(f[..., None], moved.shape)
            forced |= np.moveaxis(f_full, -1, ax)
        grown = forced & ~won
        if not grown.any():
            break
        rank[grown] = rounds
        won |= forced
        if limits.time_budget and time.monotonic() - t0 > limits.time_budget:
            return Verdict("unknown", None, False, "attractor", {"reason": "time budget"})
    ctx = AttractorContext(cfg, won, rank)
    stats = {
        "explored_states": int(won.size),
        "iterations": rounds,
        "elapsed": time.monotonic() - t0,
    }
    zero = (0,) * (2 * k) + (0,) * m
    if won[zero]:
        return Verdict("forall", int(rank[zero]), True, "attractor", stats, ctx)
    return Verdict("exists", None, True, "attractor", stats, ctx)


# ---------------------------------------------------------------------------
# Bounded memoized search


class _Budget(Exception):
    pass


class SearchContext:
    def __init__(self, cfg, memo_win, memo_safe, best_move, groups):
        self.cfg = cfg
        self.memo_win = memo_win
        self.memo_safe = memo_safe
        self.best_move = best_move
        self.groups = groups


def _feasible_groups(cfg: GameConfig, limits: SolveLimits):
    if not limits.symmetry_reduction:
        return None
    try:
        ag = automorphisms(cfg.g, limit=limits.group_cap)
        ah = automorphisms(cfg.h, limit=limits.group_cap)
    except ValueError:
        return None
    if len(ag) * len(ah) > limits.group_cap:
        return None
    if len(ag) == 1 and len(ah) == 1:
        return None
    return (ag, ah)


def _sequence_ids(cfg: GameConfig):
    from .refine import all_tally_sequences

    seq_g = all_tally_sequences(cfg.g)
    seq_h = all_tally_sequences(cfg.h)
    ids: dict = {}
    for s in seq_g + seq_h:
        ids.setdefault(s, len(ids))
    return [ids[s] for s in seq_g], [ids[s] for s in seq_h], len(ids)


def _bounded_search(cfg: GameConfig, limits: SolveLimits) -> Verdict:
    t0 = time.monotonic()
    groups = _feasible_groups(cfg, limits)
    ids_g, ids_h, nids = _sequence_ids(cfg)
    counts_g = [0] * nids
    counts_h = [0] * nids
    for i in ids_g:
        counts_g[i] += 1
    for i in ids_h:
        counts_h[i] += 1

    planner = None
    if limits.pruning_level == "necessary_constraints" and cfg.colours >= 2:
        from .strat.filters import AnswerPlanner, ResponseFilter, default_rules

        planner = AnswerPlanner(cfg, ResponseFilter(default_rules(cfg.colours)))
    punish_slack = planner.punish_bound + 2 if planner is not None else 0
    max_rounds = limits.max_rounds or (2 * (cfg.g.n + cfg.h.n) + 8 + punish_slack)

    memo_win: dict = {}
    memo_safe: dict = {}
    best_move: dict = {}
    stats = {"memo_hits": 0, "explored_states": 0}

    def pkey(pos: Position):
        return position_key(pos, cfg, groups is not None, groups, limits.group_cap)

    def deficiency(side: str, mask: int) -> int:
        ids, counts = (ids_g, counts_g) if side == SIDE_G else (ids_h, counts_h)
        other = counts_h if side == SIDE_G else counts_g
        have = [0] * nids
        for v in bits(mask):
            have[ids[v]] += 1
        return sum(max(0, have[i] - other[i]) for i in range(nids))

    def ordered_universal(pos: Position):
        from .engine import enumerate_universal

        policy = "canonical_under_automorphisms" if groups else "all"
        moves = list(enumerate_universal(pos, cfg, policy, groups))
        moves.sort(
            key=lambda mv: (
                -deficiency(mv.side, mv.vertices) if mv.kind == "colour" else 0,
                0 if (mv.kind == "colour" and mv.vertices and mv.vertices.bit_count() == 1) else 1,
                mv.sort_key(),
            )
        )
        return moves

    def all_answers(pending: PendingPosition):
        from .engine import enumerate_existential

        policy = "canonical_under_automorphisms" if groups else "all"
        answers = list(enumerate_existential(pending, cfg, policy, groups))
        if pending.move.kind == "colour":
            want = (pending.move.vertices or 0).bit_count()
            answers.sort(key=lambda a: (abs(a.bit_count() - want), a))
        return answers

    def answer_plan(pending: PendingPosition, depth: int):
        """(answers to explore, punish bound for the unexplored complement).

        Pruning degrades to plain exploration whenever the punishment replay
        would not fit the remaining round budget, so a pruned run can only
        ever shorten proofs, never lose them.
        """
        if planner is not None and pending.move.kind == "colour":
            from .strat.filters import PlanBudgetError

            if planner.punish_bound + 1 <= depth:
                try:
                    return planner.plan(pending)
                except PlanBudgetError:
                    pass
        return all_answers(pending), None

    def check_budgets():
        if len(memo_win) + len(memo_safe) > limits.state_budget:
            raise _Budget("state budget")
        if limits.time_budget and time.monotonic() - t0 > limits.time_budget:
            raise _Budget("time budget")

    def search(pos: Position, depth: int) -> tuple[bool, int]:
        stats["explored_states"] += 1
        check_budgets()
        if losing_conditions(pos, cfg):
            return True, 0
        if depth == 0:
            return False, 0
        key = pkey(pos)
        if key in memo_win:
            stats["memo_hits"] += 1
            return True, memo_win[key]
        if memo_safe.get(key, -1) >= depth:
            stats["memo_hits"] += 1
            return False, depth
        for mv in ordered_universal(pos):
            pend = apply_universal(pos, mv, cfg)
            explored, punish_bound = answer_plan(pend, depth)
            worst = 0
            ok = True
            covered = bool(explored)
            if punish_bound is not None:
                # punished tails count against the round budget too
                worst = 1 + punish_bound
                covered = True
            for ans in explored:
                win, val = search(apply_existential(pend, ans, cfg), depth - 1)
                if not win:
                    ok = False
                    break
                worst = max(worst, val + 1)
            if ok and covered:
                memo_win[key] = worst
                best_move[key] = mv
                return True, worst
        memo_safe[key] = depth
        return False, depth

    start = initial_position(cfg)
    try:
        win, val = search(start, max_rounds)
    except _Budget as exc:
        stats["elapsed"] = time.monotonic() - t0
        return Verdict("unknown", None, False, "search", dict(stats, reason=str(exc)))
    stats["elapsed"] = time.monotonic() - t0
    ctx = SearchContext(cfg, memo_win, memo_safe, best_move, groups)
    if win:
        return Verdict("forall", val, True, "search", stats, ctx)
    return Verdict("exists", max_rounds, False, "search", stats, ctx)


def solve(cfg: GameConfig, limits: SolveLimits = SolveLimits()) -> Verdict:
    """Decide the configured game exactly when the position space fits the
    state budget (attractor fixpoint), else run bounded memoized search."""
    space = estimate_state_space(cfg)
    attractor = space <= limits.state_budget if limits.mode is None else limits.mode == "attractor"
    if attractor:
        if space > limits.state_budget:
            raise ValueError("attractor mode forced above the state budget")
        if cfg.variant == MSO:
            return _attractor_mso(cfg, limits)
        return _attractor_plain_strong(cfg, limits)
    return _bounded_search(cfg, limits)


# ---------------------------------------------------------------------------
# Strategy extraction and hints


class StrategyAutomaton:
    """Positional strategy over an attractor or search context."""

    def __init__(self, verdict: Verdict):
        if verdict.winner == "unknown" or verdict._ctx is None:
            raise ValueError("no strategy available for an unknown verdict")
        self.verdict = verdict
        self.ctx = verdict._ctx
        self.cfg = self.ctx.cfg

    def universal_move(self, pos: Position) -> Move:
        cfg = self.cfg
        if isinstance(self.ctx, AttractorContext):
            best = None
            from .engine import enumerate_universal

            for mv in enumerate_universal(pos, cfg, "all"):
                forced, worst = self.ctx.move_outcomes(pos, mv)
                if forced:
                    key = (worst, mv.sort_key())
                    if best is None or key < best[0]:
                        best = (key, mv)
            if best is None:
                raise ValueError("no winning move from this position")
            return best[1]
        key = position_key(pos, cfg, self.ctx.groups is not None, self.ctx.groups)
        mv = self.ctx.best_move.get(key)
        if mv is None:
            raise ValueError("position outside the analysed region")
        return mv

    def existential_answer(self, pending: PendingPosition) -> int:
        if isinstance(self.ctx, AttractorContext):
            values = self.ctx.answer_values(pending)
            safe = [a for a, won, _ in values if not won]
            if safe:
                return safe[0]
            # hopeless: delay the loss, then mimic the move's shape
            want = 0
            if pending.move.kind == "colour":
                want = (pending.move.vertices or 0).bit_count()
            return min(
                values,
                key=lambda t: (-t[2], abs(t[0].bit_count() - want), t[0]),
            )[0]
        raise ValueError("search contexts provide first-player strategies only")


def extract_strategy(verdict: Verdict) -> StrategyAutomaton:
    return StrategyAutomaton(verdict)


def hint(
    pos: Position,
    cfg: GameConfig,
    limits: SolveLimits = SolveLimits(),
    top: Optional[int] = None,
    move_space_cap: int = 1 << 16,
) -> list[dict]:
    """Deterministically ranked first-player moves with evaluations.

    Sides too large to enumerate produce no hints rather than stalling."""
    from .engine import enumerate_universal

    if 2 * cfg.colours * (2 ** max(cfg.g.n, cfg.h.n)) > move_space_cap:
        return []
    space = estimate_state_space(cfg)
    out = []
    if space <= limits.state_budget:
        verdict = solve(cfg, limits)
        ctx = verdict._ctx
        for mv in enumerate_universal(pos, cfg, "all"):
            forced, worst = ctx.move_outcomes(pos, mv)
            evaluation = {
                "winning": forced,
                "bound": worst if forced else None,
                "certified": True,
            }
            out.append({"move": mv.to_json(), "eval": evaluation, "_key": (0 if forced else 1, worst if forced else 0, mv.sort_key())})
    else:
        depth = limits.max_rounds or 4
        for mv in enumerate_universal(pos, cfg, "all"):
            pend = apply_universal(pos, mv, cfg)
            sub = SolveLimits(
                max_rounds=depth,
                state_budget=limits.state_budget,
                time_budget=limits.time_budget,
                symmetry_reduction=limits.symmetry_reduction,
                pruning_level=limits.pruning_level,
            )
            result = _evaluate_pending(pend, cfg, sub)
            out.append({"move": mv.to_json(), "eval": result, "_key": (0 if result["winning"] else 1, result["bound"] or 0, mv.sort_key())})
    out.sort(key=lambda d: d.pop("_key"))
    return out[:top] if top else out


def _evaluate_pending(pend: PendingPosition, cfg: GameConfig, limits: SolveLimits) -> dict:
    """Worst-case bounded evaluation of one first-player move."""
    from .engine import enumerate_existential

    verdicts = []
    try:
        for ans in enumerate_existential(pend, cfg, "all"):
            nxt = apply_existential(pend, ans, cfg)
            sub_cfg = cfg
            v = _search_from(nxt, sub_cfg, limits)
            verdicts.append(v)
            if v[0] == "exists" or v[0] == "unknown":
                break
    except _Budget:
        return {"winning": False, "bound": None, "certified": False}
    if all(v[0] == "forall" for v in verdicts):
        return {
            "winning": True,
            "bound": 1 + max(v[1] for v in verdicts),
            "certified": False,
        }
    return {"winning": False, "bound": None, "certified": False}


def _search_from(pos: Position, cfg: GameConfig, limits: SolveLimits):
    """Small helper: bounded value of a position (winner, bound)."""
    saved = _bounded_search_from(pos, cfg, limits)
    return saved


def _bounded_search_from(pos: Position, cfg: GameConfig, limits: SolveLimits):
    t0 = time.monotonic()
    memo_win: dict = {}
    memo_safe: dict = {}
    max_rounds = limits.max_rounds or 4

    def search(p: Position, depth: int):
        if losing_conditions(p, cfg):
            return True, 0
        if depth == 0:
            return False, 0
        key = p.key()
        if key in memo_win:
            return True, memo_win[key]
        if memo_safe.get(key, -1) >= depth:
            return False, depth
        if limits.time_budget and time.monotonic() - t0 > limits.time_budget:
            raise _Budget("time budget")
        from .engine import enumerate_existential, enumerate_universal

        for mv in enumerate_universal(p, cfg, "all"):
            pend = apply_universal(p, mv, cfg)
            ok = True
            worst = 0
            for ans in enumerate_existential(pend, cfg, "all"):
                win, val = search(apply_existential(pend, ans, cfg), depth - 1)
                if not win:
                    ok = False
                    break
                worst = max(worst, val + 1)
            if ok:
                memo_win[key] = worst
                return True, worst
        memo_safe[key] = depth
        return False, depth

    win, val = search(pos, max_rounds)
    if win:
        return ("forall", val)
    return ("exists", val)
