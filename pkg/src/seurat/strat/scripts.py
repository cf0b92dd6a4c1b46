"""Scripted first-player strategies: the one-colour cases, the unique-palette
bound, the tally strategy over the six pair families, the worked examples,
the gadget-graph three-move line, and the iterated deck skeleton.

A scripted strategy is a pure function of the game history: while every
answer so far passed the script's compliance rules it plays its main line;
the round after a violation it switches to that violation's punishment
script and stays there.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from ..engine import (
    PLAIN,
    SIDE_G,
    SIDE_H,
    GameConfig,
    Move,
    PendingPosition,
    Position,
    initial_position,
)
from ..graphs import Digraph, bits, connectivity, eta, mask_of
from ..refine import all_tally_sequences, tally_spectrum
from .filters import RULES, AnswerPlanner, ResponseFilter
from .punish import Round, ScriptExhausted, punishment_player


class InapplicableError(RuntimeError):
    """The scripted strategy's preconditions fail on this instance."""


@dataclass(frozen=True)
class TallyMap:
    """Vertex correspondence by unique equal tally-sequence."""

    pairs: tuple[tuple[int, int], ...]
    status: str  # "total_bijection" | "undefined_at" | "ambiguous_at"
    detail: Optional[object] = None

    def __getitem__(self, v: int) -> int:
        return dict(self.pairs)[v]


def build_tally_map(g: Digraph, h: Digraph) -> TallyMap:
    seq_g = all_tally_sequences(g)
    seq_h = all_tally_sequences(h)
    counts_g = Counter(seq_g)
    counts_h = Counter(seq_h)
    pairs = []
    for v, s in enumerate(seq_g):
        if counts_g[s] > 1 or counts_h[s] > 1:
            return TallyMap((), "ambiguous_at", s)
        if counts_h[s] == 0:
            return TallyMap((), "undefined_at", v)
        w = next(i for i, t in enumerate(seq_h) if t == s)
        pairs.append((v, w))
    if len(pairs) != h.n:
        return TallyMap((), "undefined_at", None)
    return TallyMap(tuple(pairs), "total_bijection")


class ScriptedStrategy:
    """Main line plus punishment dispatch; subclasses fill in the line."""

    name = "scripted"
    compliance: Optional[ResponseFilter] = None

    def __init__(self, cfg: GameConfig):
        self.cfg = cfg

    @cached_property
    def _planner(self) -> Optional[AnswerPlanner]:
        if self.compliance is None:
            return None
        return AnswerPlanner(self.cfg, self.compliance)

    def main_move(self, history: Sequence[Round]) -> Optional[Move]:
        raise NotImplementedError

    def move(self, cfg: GameConfig, history: Sequence[Round], pos: Position) -> Move:
        if self._planner is not None:
            prev = initial_position(cfg)
            for i, r in enumerate(history):
                viols = self._planner.violations(PendingPosition(prev, r.move), r.answer)
                if viols:
                    viols.sort(key=lambda v: RULES.index(v.rule))
                    player = punishment_player(cfg, i, PendingPosition(prev, r.move), r.answer, viols[0])
                    return player.move(cfg, history, pos)
                prev = r.position
        mv = self.main_move(history)
        if mv is None:
            raise ScriptExhausted(f"{self.name}: main line exhausted without a trigger")
        return mv


class StaticLineStrategy(ScriptedStrategy):
    def __init__(self, cfg: GameConfig, line: Sequence[Move]):
        super().__init__(cfg)
        self.line = list(line)

    def main_move(self, history: Sequence[Round]) -> Optional[Move]:
        if len(history) < len(self.line):
            return self.line[len(history)]
        return None


# ---------------------------------------------------------------------------
# One-colour cases


class OneColourStrategy(StaticLineStrategy):
    name = "one_colour"
    compliance = None

    def __init__(self, cfg: GameConfig, case: str = "auto"):
        g, h = cfg.g, cfg.h
        if case == "auto":
            case = self._detect(g, h)
        mv = self._opening(cfg, case)
        super().__init__(cfg, [mv])
        self.case = case

    @staticmethod
    def _detect(g: Digraph, h: Digraph) -> str:
        if (g.n == 1) != (h.n == 1):
            return "sizes"
        if (g.full_mask & ~g.loop_mask() != 0) != (h.full_mask & ~h.loop_mask() != 0):
            return "irreflexive"
        cg, ch = connectivity(g), connectivity(h)
        if cg["strongly_connected"] != ch["strongly_connected"]:
            return "strong_connectivity"
        if cg["weakly_connected"] != ch["weakly_connected"]:
            return "weak_connectivity"
        if g.n <= 2 and h.n <= 2:
            return "two_vertex"
        raise InapplicableError("no one-colour case applies")

    @staticmethod
    def _opening(cfg: GameConfig, case: str) -> Move:
        g, h = cfg.g, cfg.h
        if case == "sizes":
            side = SIDE_H if h.n > 1 else SIDE_G
            return Move("colour", side, colour=0, vertices=1)
        if case == "irreflexive":
            side, graph = (SIDE_G, g) if g.full_mask & ~g.loop_mask() else (SIDE_H, h)
            v = next(bits(graph.full_mask & ~graph.loop_mask()))
            return Move("colour", side, colour=0, vertices=1 << v)
        if case in ("strong_connectivity", "weak_connectivity"):
            key = "strongly_connected" if case == "strong_connectivity" else "weakly_connected"
            side, graph = (
                (SIDE_G, g) if not connectivity(g)[key] else (SIDE_H, h)
            )
            dirs_n = graph.n
            for v in range(graph.n):
                if case == "strong_connectivity":
                    closure = eta(graph, 1 << v, ("O",) * dirs_n)
                else:
                    closure = 1 << v
                    for _ in range(dirs_n):
                        closure = eta(graph, closure, ("O",)) | eta(graph, closure, ("I",))
                if closure != graph.full_mask:
                    return Move("colour", side, colour=0, vertices=closure)
            raise InapplicableError(f"{case}: no witness vertex found")
        if case == "two_vertex":
            if g.n != h.n:
                return OneColourStrategy._opening(cfg, "sizes")
            return Move("colour", SIDE_G, colour=0, vertices=1)
        raise InapplicableError(f"unknown one-colour case {case!r}")


# ---------------------------------------------------------------------------
# Unique-palette bound


class LogPaletteStrategy(StaticLineStrategy):
    name = "log_palette"
    compliance = None

    def __init__(self, cfg: GameConfig):
        n = cfg.g.n
        if cfg.h.n != n or n < 2:
            raise InapplicableError("needs equal orders >= 2")
        k = math.ceil(math.log2(n))
        if cfg.colours < k:
            raise InapplicableError(f"needs at least {k} colours")
        line = [
            Move(
                "colour",
                SIDE_G,
                colour=i,
                vertices=mask_of(v for v in range(n) if v >> i & 1),
            )
            for i in range(k)
        ]
        super().__init__(cfg, line)


# ---------------------------------------------------------------------------
# Tally strategy (spectrum mismatch, else the unique-sequence pair trap)


_TALLY_RULES = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))


class TallyStrategy(StaticLineStrategy):
    name = "tally"
    compliance = _TALLY_RULES

    def __init__(self, cfg: GameConfig, pair: Optional[tuple[int, int]] = None):
        g, h = cfg.g, cfg.h
        if cfg.colours < 2:
            raise InapplicableError("tally strategy needs two colours")
        spec_g, spec_h = tally_spectrum(g), tally_spectrum(h)
        if spec_g != spec_h:
            counts_g, counts_h = spec_g.counter(), spec_h.counter()
            witness = next(
                s for s in counts_g.keys() | counts_h.keys() if counts_g[s] != counts_h[s]
            )
            if counts_g[witness] > counts_h[witness]:
                side, graph, seqs = SIDE_G, g, all_tally_sequences(g)
            else:
                side, graph, seqs = SIDE_H, h, all_tally_sequences(h)
            mask = mask_of(v for v in range(graph.n) if seqs[v] == witness)
            super().__init__(cfg, [Move("colour", side, colour=0, vertices=mask)])
            self.branch = "spectrum"
            self.tally_map = None
            return
        tmap = build_tally_map(g, h)
        if tmap.status != "total_bijection":
            raise InapplicableError(f"tally map {tmap.status}: {tmap.detail}")
        self.tally_map = tmap
        if pair is None:
            pair = self._mismatch_pair(g, h, tmap)
        u, v = pair
        super().__init__(
            cfg,
            [
                Move("colour", SIDE_G, colour=0, vertices=1 << u),
                Move("colour", SIDE_G, colour=1, vertices=1 << v),
            ],
        )
        self.branch = "pair"

    @staticmethod
    def _mismatch_pair(g: Digraph, h: Digraph, tmap: TallyMap) -> tuple[int, int]:
        m = dict(tmap.pairs)
        for u in range(g.n):
            for v in range(g.n):
                if u == v:
                    if g.has_edge(u, u) != h.has_edge(m[u], m[u]):
                        # a loop mismatch is already an edge mismatch on the
                        # one-vertex subgraph; pair it with any second vertex
                        w = (u + 1) % g.n
                        return (u, w)
                    continue
                if g.has_edge(u, v) != h.has_edge(m[u], m[v]):
                    return (u, v)
        raise InapplicableError("sequence map preserves all edges; the pair is isomorphic")


# ---------------------------------------------------------------------------
# Worked examples


class StarsStrategy(StaticLineStrategy):
    name = "stars"
    compliance = ResponseFilter(frozenset({"S1", "S4"}))

    def __init__(self, cfg: GameConfig):
        h = cfg.h
        if cfg.colours < 2:
            raise InapplicableError("needs two colours")
        outer = [v for v in range(h.n) if h.rows[v].bit_count() == 3]
        comps: list[list[int]] = []
        seen = 0
        for v in outer:
            if seen >> v & 1:
                continue
            comp = 1 << v
            frontier = comp
            outer_mask = mask_of(outer)
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= h.rows[u] & outer_mask
                frontier = nxt & ~comp
                comp |= nxt
            comps.append(sorted(bits(comp)))
            seen |= comp
        triangles = [c for c in comps if len(c) == 3]
        if len(triangles) != 2:
            raise InapplicableError("second graph does not split into two triangle arms")
        super().__init__(
            cfg,
            [
                Move("colour", SIDE_H, colour=0, vertices=mask_of(triangles[0])),
                Move("colour", SIDE_H, colour=1, vertices=mask_of(triangles[1])),
            ],
        )


class RamachandranStrategy(TallyStrategy):
    name = "ramachandran"

    def __init__(self, cfg: GameConfig):
        if cfg.g.n != 6 or cfg.h.n != 6:
            raise InapplicableError("expects the six-vertex tournament pair")
        super().__init__(cfg, pair=(5, 4))


# ---------------------------------------------------------------------------
# Gadget-graph three-move line


class CfiStrategy(StaticLineStrategy):
    name = "cfi"
    compliance = ResponseFilter(frozenset({"S1", "S4", "S5", "S6", "EtaSpectrum"}))

    def __init__(self, cfg: GameConfig, labels: dict):
        internals_empty = mask_of(
            v for v, lab in labels.items() if lab.kind == "internal" and not lab.subset
        )
        internals = mask_of(v for v, lab in labels.items() if lab.kind == "internal")
        a_nodes = mask_of(
            v for v, lab in labels.items() if lab.kind == "external" and lab.letter == "a"
        )
        super().__init__(
            cfg,
            [
                Move("colour", SIDE_G, colour=0, vertices=internals_empty),
                Move("colour", SIDE_G, colour=1, vertices=a_nodes),
                Move("colour", SIDE_G, colour=0, vertices=internals),
            ],
        )


# ---------------------------------------------------------------------------
# Iterated deck skeleton


class DeckStrategy(ScriptedStrategy):
    """Deck-based descent: while the degree-associated decks of the live
    subgraphs differ, trap one card mismatch per stage; finish small
    remainders with unique palettes.  Aborts with a stage report when the
    decks stop differing (that continuation is exactly the open conjecture).
    """

    name = "deck"
    compliance = ResponseFilter(frozenset({"S1", "S4", "TallySpectrum", "Relativized3"}))

    def __init__(self, cfg: GameConfig):
        if cfg.colours < 3:
            raise InapplicableError("deck strategy needs three colours")
        super().__init__(cfg)

    def stage_zero_applicable(self) -> bool:
        from ..recon import da_deck

        return da_deck(self.cfg.g) != da_deck(self.cfg.h)

    def main_move(self, history: Sequence[Round]) -> Optional[Move]:
        from ..recon import da_deck

        cfg = self.cfg
        gv = list(range(cfg.g.n))
        hv = list(range(cfg.h.n))
        restrict_colour: Optional[int] = None
        i = 0
        hist = list(history)
        while True:
            if len(gv) <= 4:
                return self._finish_move(gv, restrict_colour, hist, i)
            a_col = next(c for c in range(3) if c != restrict_colour)
            b_col = next(c for c in range(3) if c not in (restrict_colour, a_col))
            sub_g, sub_h = cfg.g.induced(gv), cfg.h.induced(hv)
            if sub_g.n < 2 or da_deck(sub_g) == da_deck(sub_h):
                raise InapplicableError(
                    f"stage {i // 2}: degree-associated decks agree on the live subgraphs"
                )
            pick = self._pick_card(sub_g, sub_h)
            (side, members), card_tally, card_form = pick
            live = gv if side == SIDE_G else hv
            mask = mask_of(live[m] for m in members)
            if i == len(hist):
                return Move("colour", side, colour=a_col, vertices=mask)
            answer_round = hist[i]
            i += 1
            other = SIDE_H if side == SIDE_G else SIDE_G
            other_live = hv if side == SIDE_G else gv
            sub_other = cfg.h.induced(hv) if side == SIDE_G else cfg.g.induced(gv)
            u0 = self._defect_vertex(sub_other, other_live, answer_round.answer, card_tally, card_form)
            if u0 is None:
                raise InapplicableError("answer shows no card defect to exploit")
            keep_mask = mask_of(v for v in other_live if v != u0)
            if i == len(hist):
                return Move("colour", other, colour=b_col, vertices=keep_mask)
            second_round = hist[i]
            i += 1
            move_live = live
            kept = [v for v in move_live if second_round.answer >> v & 1]
            dropped = [v for v in move_live if not second_round.answer >> v & 1]
            if len(dropped) != 1:
                raise InapplicableError("opponent's deletion answer has the wrong shape")
            if side == SIDE_G:
                gv = kept
                hv = [v for v in other_live if v != u0]
            else:
                hv = kept
                gv = [v for v in other_live if v != u0]
            restrict_colour = b_col

    def _finish_move(self, gv, restrict_colour, hist, i) -> Optional[Move]:
        cfg = self.cfg
        cols = [c for c in range(3) if c != restrict_colour][:2]
        width = max(1, math.ceil(math.log2(max(len(gv), 2))))
        moves = []
        for bit in range(width):
            mask = mask_of(v for idx, v in enumerate(sorted(gv)) if idx >> bit & 1)
            moves.append(Move("colour", SIDE_G, colour=cols[bit % len(cols)], vertices=mask))
        remaining = len(hist) - i
        if remaining < len(moves):
            return moves[remaining]
        return None

    @staticmethod
    def _pick_card(sub_g: Digraph, sub_h: Digraph):
        from ..graphs import canonical_form, tally as vertex_tally

        def cards(sub):
            out = {}
            for v in range(sub.n):
                key = (vertex_tally(sub, v), canonical_form(sub.delete_vertex(v)))
                out.setdefault(key, []).append(v)
            return out

        cg, ch = cards(sub_g), cards(sub_h)
        best = None
        for key in cg.keys() | ch.keys():
            a, b = len(cg.get(key, ())), len(ch.get(key, ()))
            if a == b:
                continue
            diff = abs(a - b)
            side, members = (SIDE_G, cg.get(key, [])) if a > b else (SIDE_H, ch.get(key, []))
            cand = (diff, side, members, key)
            if best is None or cand[0] > best[0]:
                best = cand
        if best is None:
            raise InapplicableError("no card mismatch")
        _diff, side, members, (card_tally, card_form) = best
        return (side, members), card_tally, card_form

    @staticmethod
    def _defect_vertex(sub_other: Digraph, other_live, answer_mask, card_tally, card_form):
        from ..graphs import canonical_form

        idx_of = {v: i for i, v in enumerate(other_live)}
        for v in other_live:
            if not answer_mask >> v & 1:
                continue
            local = idx_of[v]
            if canonical_form(sub_other.delete_vertex(local)) != card_form:
                return v
        return None


# ---------------------------------------------------------------------------
# Factory


def scripted(name: str, **params):
    """Build a scripted strategy (with its configuration attached)."""
    from ..generators import cfi, complete_graph, named_example, stockmeyer_pair

    if name == "one_colour":
        cfg = GameConfig(params["g"], params["h"], 1, params.get("variant", PLAIN))
        return OneColourStrategy(cfg, params.get("case", "auto"))
    if name == "log_palette":
        g, h = params["g"], params["h"]
        k = max(1, math.ceil(math.log2(g.n)))
        cfg = GameConfig(g, h, params.get("colours", k), PLAIN)
        return LogPaletteStrategy(cfg)
    if name == "tally":
        if "g" in params:
            g, h = params["g"], params["h"]
        else:
            g, h = stockmeyer_pair(params["family"], params["m"], params["n"])
        cfg = GameConfig(g, h, 2, PLAIN)
        return TallyStrategy(cfg)
    if name == "stars":
        g, h = named_example("stars").graphs
        return StarsStrategy(GameConfig(g, h, 2, PLAIN))
    if name == "ramachandran":
        g, h = named_example("ramachandran").graphs
        return RamachandranStrategy(GameConfig(g, h, 2, PLAIN))
    if name == "cfi":
        n = params["n"]
        plain, labels = cfi(complete_graph(n))
        twisted, _ = cfi(complete_graph(n), twist=True)
        cfg = GameConfig(plain, twisted, 2, PLAIN)
        return CfiStrategy(cfg, labels)
    if name == "deck":
        if "g" in params:
            g, h = params["g"], params["h"]
        else:
            g, h = stockmeyer_pair(params["family"], params["m"], params["n"])
        return DeckStrategy(GameConfig(g, h, 3, PLAIN))
    raise ValueError(f"unknown scripted strategy {name!r}")
