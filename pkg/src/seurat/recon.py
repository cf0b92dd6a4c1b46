"""Deck machinery and the conjecture-support search driver.

Decks are multisets of canonical forms of the point-deleted subgraphs;
degree-associated decks tag each card with the deleted vertex's tally.
The search driver solves every unordered pair of distinct isomorphism
classes of equal order exactly and reports any second-player win, which
would be a headline finding and is re-verified before speaking.
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

from .engine import PLAIN, GameConfig
from .graphs import Digraph, Tally, canonical_form, tally
from .solve import SolveLimits, solve


@dataclass(frozen=True)
class Deck:
    cards: tuple[tuple[bytes, int], ...]  # (canonical form, multiplicity)

    @staticmethod
    def from_counter(c: Counter) -> "Deck":
        return Deck(tuple(sorted(c.items())))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.cards)


@dataclass(frozen=True)
class DaDeck:
    cards: tuple[tuple[tuple[Tally, bytes], int], ...]

    @staticmethod
    def from_counter(c: Counter) -> "DaDeck":
        return DaDeck(tuple(sorted(c.items())))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.cards)

    def project(self) -> Deck:
        c: Counter = Counter()
        for (_t, form), mult in self.cards:
            c[form] += mult
        return Deck.from_counter(c)


def deck(g: Digraph) -> Deck:
    if g.n < 2:
        raise ValueError("decks need at least two vertices")
    c: Counter = Counter()
    for v in range(g.n):
        c[canonical_form(g.delete_vertex(v))] += 1
    return Deck.from_counter(c)


def da_deck(g: Digraph) -> DaDeck:
    if g.n < 2:
        raise ValueError("decks need at least two vertices")
    c: Counter = Counter()
    for v in range(g.n):
        c[(tally(g, v), canonical_form(g.delete_vertex(v)))] += 1
    return DaDeck.from_counter(c)


def enumerate_digraphs(n: int, loops: bool = True, directed: bool = True) -> Iterator[Digraph]:
    """One representative per isomorphism class, canonical-form deduplicated
    against a brute-force sweep of all labelled graphs (guarded to n <= 4)."""
    if n > 4:
        raise ValueError("enumeration guarded to n <= 4")
    cells = []
    for u in range(n):
        for v in range(n):
            if u == v and not loops:
                continue
            if not directed and v < u:
                continue
            cells.append((u, v))
    seen: set[bytes] = set()
    for code in range(1 << len(cells)):
        rows = [0] * n
        for i, (u, v) in enumerate(cells):
            if code >> i & 1:
                rows[u] |= 1 << v
                if not directed:
                    rows[v] |= 1 << u
        g = Digraph(n, directed, tuple(rows))
        form = canonical_form(g)
        if form not in seen:
            seen.add(form)
            yield g


@dataclass
class SearchReport:
    max_n: int
    colours: int
    variant: str
    loops: bool
    directed: bool
    pairs_examined: int
    verdicts: dict
    exists_wins: list
    unknown: int
    elapsed: float

    def to_json(self) -> dict:
        return {
            "scope": {
                "max_n": self.max_n,
                "colours": self.colours,
                "variant": self.variant,
                "loops": self.loops,
                "directed": self.directed,
            },
            "pairs_examined": self.pairs_examined,
            "verdicts": dict(self.verdicts),
            "exists_wins": self.exists_wins,
            "unknown": self.unknown,
            "elapsed": self.elapsed,
        }

    def summary(self) -> str:
        lines = [
            f"searched all pairs of distinct iso classes, order <= {self.max_n} "
            f"(colours={self.colours}, variant={self.variant}, loops={self.loops}, "
            f"directed={self.directed})",
            f"pairs examined: {self.pairs_examined}",
        ]
        for k, v in sorted(self.verdicts.items()):
            lines.append(f"  {k}: {v}")
        if self.exists_wins:
            lines.append(f"SECOND-PLAYER WINS FOUND: {len(self.exists_wins)} (see report)")
        else:
            lines.append("no second-player wins found")
        return "\n".join(lines)


def search(
    max_n: int,
    colours: int,
    variant: str = PLAIN,
    loops: bool = True,
    directed: bool = True,
    limits: Optional[SolveLimits] = None,
) -> SearchReport:
    """Solve every unordered pair of distinct same-order classes exactly.

    A second-player win between non-isomorphic graphs would bear on the
    driving conjecture, so each one found is re-verified with a fresh
    unreduced exact solve before being reported.
    """
    t0 = time.monotonic()
    limits = limits or SolveLimits()
    verdicts: Counter = Counter()
    exists_wins = []
    unknown = 0
    pairs = 0
    for n in range(1, max_n + 1):
        classes = list(enumerate_digraphs(n, loops, directed))
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                pairs += 1
                cfg = GameConfig(classes[i], classes[j], colours, variant)
                verdict = solve(cfg, limits)
                verdicts[verdict.winner] += 1
                if verdict.winner == "unknown":
                    unknown += 1
                if verdict.winner == "exists":
                    recheck = solve(
                        cfg,
                        SolveLimits(state_budget=limits.state_budget, pruning_level="none"),
                    )
                    from .graphs import graph_to_json

                    exists_wins.append(
                        {
                            "order": n,
                            "g": graph_to_json(classes[i]),
                            "h": graph_to_json(classes[j]),
                            "first_verdict": verdict.to_json(),
                            "recheck": recheck.to_json(),
                        }
                    )
    return SearchReport(
        max_n=max_n,
        colours=colours,
        variant=variant,
        loops=loops,
        directed=directed,
        pairs_examined=pairs,
        verdicts=dict(verdicts),
        exists_wins=exists_wins,
        unknown=unknown,
        elapsed=time.monotonic() - t0,
    )
