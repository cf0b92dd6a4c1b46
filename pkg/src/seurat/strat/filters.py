"""Necessary-response filters: the conditions a second player pursuing a
winning strategy must satisfy, used both to prune search soundly and to
bound the answer sets a certificate has to explore.

Each rule is proven necessary at two colours (three for the relativized
rule); enabling them below that colour count is rejected.  The planner's
``admissible`` enumeration is complete: every answer it omits violates at
least one enabled rule.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Optional

from ..engine import SIDE_G, SIDE_H, GameConfig, PendingPosition
from ..graphs import Digraph, Tally, bits, eta_step, mask_of, sigma, tally
from ..refine import TallySequence, all_tally_sequences

RULES = (
    "S1",
    "S2",
    "S3",
    "S4",
    "S5",
    "S6",
    "TallySpectrum",
    "EtaSpectrum",
    "Relativized3",
)

_MULTISET_RULES = {"S2", "S3", "S4", "TallySpectrum"}


def default_rules(colours: int) -> frozenset[str]:
    """The cheap proven-necessary set used for search pruning."""
    if colours < 2:
        return frozenset()
    rules = {"S1", "S2", "S3", "S4", "TallySpectrum"}
    return frozenset(rules)


@dataclass(frozen=True)
class ResponseFilter:
    rules: frozenset[str]
    eta_depth: Optional[int] = None  # default: vertex count of the larger side

    def __post_init__(self) -> None:
        unknown = set(self.rules) - set(RULES)
        if unknown:
            raise ValueError(f"unknown rules {sorted(unknown)}")


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: dict

    def to_json(self) -> dict:
        return {"rule": self.rule, "witness": self.witness}


class PlanBudgetError(RuntimeError):
    """Admissible-answer enumeration would exceed the configured budget."""


class AnswerPlanner:
    """Violation checking and complete admissible-answer enumeration for
    colour moves, with per-graph refinement data cached."""

    def __init__(self, cfg: GameConfig, filt: ResponseFilter):
        for rule in filt.rules:
            need = 3 if rule == "Relativized3" else 2
            if cfg.colours < need:
                raise ValueError(f"rule {rule} needs >= {need} colours")
        self.cfg = cfg
        self.filt = filt
        self.eta_depth = filt.eta_depth or max(cfg.g.n, cfg.h.n)
        self._tallies = {
            SIDE_G: [tally(cfg.g, v) for v in range(cfg.g.n)],
            SIDE_H: [tally(cfg.h, v) for v in range(cfg.h.n)],
        }
        self._seqs = {
            SIDE_G: all_tally_sequences(cfg.g),
            SIDE_H: all_tally_sequences(cfg.h),
        }
        self._seq_class: dict[str, dict[TallySequence, int]] = {}
        self._tally_class: dict[str, dict[Tally, int]] = {}
        for side in (SIDE_G, SIDE_H):
            sc: dict[TallySequence, int] = {}
            for v, s in enumerate(self._seqs[side]):
                sc[s] = sc.get(s, 0) | (1 << v)
            self._seq_class[side] = sc
            tc: dict[Tally, int] = {}
            for v, t in enumerate(self._tallies[side]):
                tc[t] = tc.get(t, 0) | (1 << v)
            self._tally_class[side] = tc
        # shared small-int ids make multiset comparisons cheap
        seq_ids: dict[TallySequence, int] = {}
        tally_ids: dict[Tally, int] = {}
        self._seq_id = {}
        self._tally_id = {}
        for side in (SIDE_G, SIDE_H):
            self._seq_id[side] = [
                seq_ids.setdefault(s, len(seq_ids)) for s in self._seqs[side]
            ]
            self._tally_id[side] = [
                tally_ids.setdefault(t, len(tally_ids)) for t in self._tallies[side]
            ]
        # spectrum opener + two moves per prefix-descent level + final peel
        self.punish_bound = 2 * self._max_sig_len() + max(cfg.g.n, cfg.h.n) + 4

    def _max_sig_len(self) -> int:
        return max(
            (len(s.significant) for side in self._seqs.values() for s in side),
            default=1,
        )

    # -- violation checks ---------------------------------------------------

    def first_violation(self, pending: PendingPosition, answer: int) -> Optional[Violation]:
        """Cheapest-first short-circuit check; None iff admissible."""
        mv = pending.move
        if mv.kind != "colour":
            return None
        side_a, side_b = mv.side, pending.answer_side
        S, T = mv.vertices or 0, answer
        rules = self.filt.rules
        if "S1" in rules and S.bit_count() != T.bit_count():
            return Violation("S1", {"move_size": S.bit_count(), "answer_size": T.bit_count()})
        tid_a, tid_b = self._tally_id[side_a], self._tally_id[side_b]
        if "S4" in rules or ("S2" in rules and S.bit_count() == 1):
            ca = Counter(tid_a[v] for v in bits(S))
            cb = Counter(tid_b[v] for v in bits(T))
            if ca != cb:
                vs = self.violations(pending, answer)
                return vs[0] if vs else None
        elif "S3" in rules:
            if {tid_a[v] for v in bits(S)} != {tid_b[v] for v in bits(T)}:
                vs = self.violations(pending, answer)
                return vs[0] if vs else None
        if "TallySpectrum" in rules:
            sid_a, sid_b = self._seq_id[side_a], self._seq_id[side_b]
            if Counter(sid_a[v] for v in bits(S)) != Counter(sid_b[v] for v in bits(T)):
                vs = self.violations(pending, answer)
                return vs[0] if vs else None
        slow = rules & {"S5", "S6", "EtaSpectrum", "Relativized3"}
        if slow:
            vs = self.violations(pending, answer)
            return vs[0] if vs else None
        return None

    def violations(self, pending: PendingPosition, answer: int) -> list[Violation]:
        mv = pending.move
        if mv.kind != "colour":
            return []
        side_a, side_b = mv.side, pending.answer_side
        S, T = mv.vertices or 0, answer
        g_a, g_b = self.cfg.graph(side_a), self.cfg.graph(side_b)
        rules = self.filt.rules
        out: list[Violation] = []

        if "S1" in rules and S.bit_count() != T.bit_count():
            out.append(
                Violation("S1", {"move_size": S.bit_count(), "answer_size": T.bit_count()})
            )
        if "S2" in rules and S.bit_count() == 1:
            v = next(bits(S))
            if T.bit_count() != 1:
                out.append(Violation("S2", {"vertex": v, "answer_size": T.bit_count()}))
            else:
                w = next(bits(T))
                if self._tallies[side_a][v] != self._tallies[side_b][w]:
                    out.append(
                        Violation(
                            "S2",
                            {
                                "vertex": v,
                                "answer": w,
                                "move_tally": tuple(self._tallies[side_a][v]),
                                "answer_tally": tuple(self._tallies[side_b][w]),
                            },
                        )
                    )
        tid_a, tid_b = self._tally_id[side_a], self._tally_id[side_b]
        if "S3" in rules:
            sa = {tid_a[v] for v in bits(S)}
            sb = {tid_b[v] for v in bits(T)}
            if sa != sb:
                tallies = {tid_a[v]: self._tallies[side_a][v] for v in bits(S)}
                tallies.update({tid_b[v]: self._tallies[side_b][v] for v in bits(T)})
                wit = tallies[next(iter(sa ^ sb))]
                out.append(Violation("S3", {"tally": tuple(wit)}))
        if "S4" in rules:
            ca = Counter(tid_a[v] for v in bits(S))
            cb = Counter(tid_b[v] for v in bits(T))
            if ca != cb:
                wit_id = next(t for t in ca.keys() | cb.keys() if ca[t] != cb[t])
                tallies = {tid_a[v]: self._tallies[side_a][v] for v in bits(S)}
                tallies.update({tid_b[v]: self._tallies[side_b][v] for v in bits(T)})
                out.append(
                    Violation(
                        "S4",
                        {
                            "tally": tuple(tallies[wit_id]),
                            "move_count": ca[wit_id],
                            "answer_count": cb[wit_id],
                        },
                    )
                )
        if "TallySpectrum" in rules:
            sid_a, sid_b = self._seq_id[side_a], self._seq_id[side_b]
            ca = Counter(sid_a[v] for v in bits(S))
            cb = Counter(sid_b[v] for v in bits(T))
            if ca != cb:
                wit_id = next(s for s in ca.keys() | cb.keys() if ca[s] != cb[s])
                seqs = {sid_a[v]: self._seqs[side_a][v] for v in bits(S)}
                seqs.update({sid_b[v]: self._seqs[side_b][v] for v in bits(T)})
                out.append(
                    Violation(
                        "TallySpectrum",
                        {
                            "sequence": seqs[wit_id].to_json(),
                            "move_count": ca[wit_id],
                            "answer_count": cb[wit_id],
                        },
                    )
                )
        if "S5" in rules:
            req = self._s5_requirements(pending)
            for (colour, direction), required in req.items():
                if T != required:
                    out.append(
                        Violation(
                            "S5",
                            {
                                "colour": colour,
                                "direction": direction,
                                "required": sorted(bits(required)),
                            },
                        )
                    )
        if "S6" in rules or "EtaSpectrum" in rules:
            v6 = self._eta_violation(
                side_a, side_b, S, T, spectra="EtaSpectrum" in rules
            )
            if v6 is not None:
                out.append(v6)
        if "Relativized3" in rules:
            out.extend(self._relativized(pending, answer))
        return out

    def _s5_requirements(self, pending: PendingPosition) -> dict[tuple[int, str], int]:
        """Answers pinned by closure moves: when the move equals a one-step
        closure of a standing other-colour set, the answer must equal the
        same closure on the opposite side."""
        mv = pending.move
        side_a, side_b = mv.side, pending.answer_side
        g_a, g_b = self.cfg.graph(side_a), self.cfg.graph(side_b)
        S = mv.vertices or 0
        req: dict[tuple[int, str], int] = {}
        for colour in range(self.cfg.colours):
            if colour == mv.colour:
                continue
            prev_a = pending.base.planes(side_a)[colour]
            prev_b = pending.base.planes(side_b)[colour]
            if not prev_a:
                continue
            for direction in ("O", "I"):
                if eta_step(g_a, prev_a, direction) == S and S != prev_a:
                    req[(colour, direction)] = eta_step(g_b, prev_b, direction)
        return req

    def _eta_violation(self, side_a, side_b, S, T, spectra: bool) -> Optional[Violation]:
        """Walk closure chains of both sets in lockstep, comparing sizes and
        (optionally) spectra; sets grow monotonically so the walk is short."""
        g_a, g_b = self.cfg.graph(side_a), self.cfg.graph(side_b)
        ids_a, ids_b = self._seq_id[side_a], self._seq_id[side_b]

        def spectrum_of(ids, mask):
            c = Counter()
            for v in bits(mask):
                c[ids[v]] += 1
            return c

        seen: set[tuple[int, int]] = set()
        stack = [(S, T, ())]
        budget = 4096
        while stack:
            cur_s, cur_t, path = stack.pop()
            if (cur_s, cur_t) in seen:
                continue
            seen.add((cur_s, cur_t))
            budget -= 1
            if budget <= 0:
                return None  # conservative: treat as admissible
            if path:
                if cur_s.bit_count() != cur_t.bit_count():
                    return Violation(
                        "S6",
                        {"dirs": "".join(path), "move_size": cur_s.bit_count(), "answer_size": cur_t.bit_count()},
                    )
                if spectra and spectrum_of(ids_a, cur_s) != spectrum_of(ids_b, cur_t):
                    return Violation("EtaSpectrum", {"dirs": "".join(path)})
            if len(path) >= self.eta_depth:
                continue
            for d in ("O", "I"):
                ns, nt = eta_step(g_a, cur_s, d), eta_step(g_b, cur_t, d)
                if ns == cur_s and nt == cur_t:
                    continue
                stack.append((ns, nt, path + (d,)))
        return None

    def _relativized(self, pending: PendingPosition, answer: int) -> list[Violation]:
        mv = pending.move
        side_a, side_b = mv.side, pending.answer_side
        g_a, g_b = self.cfg.graph(side_a), self.cfg.graph(side_b)
        S, T = mv.vertices or 0, answer
        out = []
        for colour in range(self.cfg.colours):
            if colour == mv.colour:
                continue
            X = pending.base.planes(side_a)[colour]
            Y = pending.base.planes(side_b)[colour]
            if not X and not Y:
                continue
            if Counter(sigma(g_a, S, X)) != Counter(sigma(g_b, T, Y)):
                out.append(Violation("Relativized3", {"colour": colour, "relative_to": "standing"}))
            elif Counter(sigma(g_a, X, S)) != Counter(sigma(g_b, Y, T)):
                out.append(Violation("Relativized3", {"colour": colour, "relative_to": "move"}))
        return out

    # -- complete admissible enumeration ------------------------------------

    def admissible(
        self, pending: PendingPosition, candidate_budget: int = 200_000
    ) -> list[int]:
        """Every answer passing all enabled rules, nothing else."""
        mv = pending.move
        side_b = pending.answer_side
        g_b = self.cfg.graph(side_b)
        rules = self.filt.rules

        req = self._s5_requirements(pending) if "S5" in rules else {}
        if req:
            forced = set(req.values())
            if len(forced) > 1:
                return []
            cands: Iterable[int] = [forced.pop()]
        else:
            cands = self._structured_candidates(pending, candidate_budget)
        return [a for a in cands if not self.violations(pending, a)]

    def _structured_candidates(
        self, pending: PendingPosition, candidate_budget: int
    ) -> Iterable[int]:
        mv = pending.move
        side_a, side_b = mv.side, pending.answer_side
        S = mv.vertices or 0
        rules = self.filt.rules
        g_b = self.cfg.graph(side_b)

        if "TallySpectrum" in rules:
            need = Counter(self._seqs[side_a][v] for v in bits(S))
            classes = self._seq_class[side_b]
        elif "S4" in rules or ("S2" in rules and S.bit_count() == 1):
            need = Counter(self._tallies[side_a][v] for v in bits(S))
            classes = self._tally_class[side_b]
        elif rules & {"S1", "S3", "S5", "S6", "EtaSpectrum", "Relativized3"}:
            size = S.bit_count() if "S1" in rules else None
            return self._plain_candidates(g_b, size, candidate_budget)
        else:
            return self._plain_candidates(g_b, None, candidate_budget)

        total = 1
        for key, count in need.items():
            supply = classes.get(key, 0).bit_count()
            if supply < count:
                return []
            total *= comb(supply, count)
            if total > candidate_budget:
                raise PlanBudgetError(
                    f"{total} class-structured candidates exceed budget {candidate_budget}"
                )
        groups = []
        for key, count in sorted(need.items(), key=lambda kv: str(kv[0])):
            members = sorted(bits(classes[key]))
            groups.append([mask_of(c) for c in combinations(members, count)])

        def products(i: int, acc: int):
            if i == len(groups):
                yield acc
                return
            for m in groups[i]:
                yield from products(i + 1, acc | m)

        return list(products(0, 0))

    def _plain_candidates(self, g_b: Digraph, size: Optional[int], budget: int):
        if size is None:
            if 1 << g_b.n > budget:
                raise PlanBudgetError("full answer space exceeds budget")
            return list(range(1 << g_b.n))
        if comb(g_b.n, size) > budget:
            raise PlanBudgetError("size-constrained answer space exceeds budget")
        return [mask_of(c) for c in combinations(range(g_b.n), size)]

    def plan(
        self, pending: PendingPosition, candidate_budget: int = 200_000
    ) -> tuple[list[int], Optional[int]]:
        """(answers to explore, punish bound covering the complement)."""
        adm = self.admissible(pending, candidate_budget)
        bound = self.punish_bound if self.filt.rules else None
        return adm, bound


def constraint_filter(
    pending: PendingPosition, filt: ResponseFilter, cfg: GameConfig
) -> tuple[list[int], dict[int, list[Violation]]]:
    """Partition of all answers into admissible and violating (with the
    violations per answer); explicit, so guarded to small sides."""
    g_b = cfg.graph(pending.answer_side)
    if g_b.n > 16:
        raise ValueError("explicit partition guarded to n <= 16; use AnswerPlanner")
    planner = AnswerPlanner(cfg, filt)
    admissible: list[int] = []
    violating: dict[int, list[Violation]] = {}
    for answer in range(1 << g_b.n):
        v = planner.violations(pending, answer)
        if v:
            violating[answer] = v
        else:
            admissible.append(answer)
    return admissible, violating
