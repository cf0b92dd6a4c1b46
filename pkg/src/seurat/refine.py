"""Tally-sequence refinement, spectra, class subgraphs and Weisfeiler-Leman.

A tally-sequence iterates relative tallies within shrinking equal-prefix
classes until the class partition stabilizes.  Sequences are stored by their
significant part (the prefix before eternal repetition of the last entry);
equality and hashing use that normal form, so two sequences are equal exactly
when their infinite unrollings are.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .graphs import Digraph, Tally, bits, stable_colours, tally


@dataclass(frozen=True)
class TallySequence:
    """Significant part of an eventually-constant sequence of tallies."""

    significant: tuple[Tally, ...]

    def __post_init__(self) -> None:
        sig = list(self.significant)
        if not sig:
            raise ValueError("a tally-sequence has at least one entry")
        while len(sig) >= 2 and sig[-1] == sig[-2]:
            sig.pop()
        object.__setattr__(self, "significant", tuple(sig))

    def entry(self, k: int) -> Tally:
        """k-th entry of the infinite unrolling."""
        sig = self.significant
        return sig[k] if k < len(sig) else sig[-1]

    def prefix(self, length: int) -> tuple[Tally, ...]:
        return tuple(self.entry(i) for i in range(length))

    def sort_key(self) -> tuple:
        return (len(self.significant), self.significant)

    def to_json(self) -> list[list[int]]:
        return [[t.in_deg, t.out_deg] for t in self.significant]


@dataclass(frozen=True)
class TallySpectrum:
    """Multiset of tally-sequences over a vertex set."""

    entries: tuple[tuple[TallySequence, int], ...]

    @staticmethod
    def from_counter(c: Counter) -> "TallySpectrum":
        items = sorted(c.items(), key=lambda kv: kv[0].sort_key())
        return TallySpectrum(tuple((seq, mult) for seq, mult in items))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def counter(self) -> Counter:
        return Counter(dict(self.entries))

    def to_json(self) -> list[dict]:
        return [{"sig": seq.to_json(), "mult": mult} for seq, mult in self.entries]


def _prefix_table(g: Digraph, X: Optional[int]) -> list[list[Tally]]:
    """Per-vertex tally entries until the class partition of X stabilizes.

    Entry lists cover every vertex of g; relativizing classes are subsets of X.
    """
    x_mask = g.full_mask if X is None else X
    entries: list[list[Tally]] = [[tally(g, v, x_mask)] for v in range(g.n)]
    prev_classes: dict[int, int] = {}
    for _ in range(x_mask.bit_count() + 2):
        groups: dict[tuple, int] = {}
        class_mask: dict[int, int] = {}
        key_of: list[int] = []
        for v in range(g.n):
            key = groups.setdefault(tuple(entries[v]), len(groups))
            key_of.append(key)
            class_mask[key] = class_mask.get(key, 0) | (1 << v)
        masks = {k: m & x_mask for k, m in class_mask.items()}
        classes = {v: masks[key_of[v]] for v in range(g.n)}
        if prev_classes:
            # X^v_{k+1} is nested inside X^v_k
            for v in range(g.n):
                assert classes[v] & ~prev_classes[v] == 0
        if classes == prev_classes:
            break
        for v in range(g.n):
            entries[v].append(tally(g, v, classes[v]))
        prev_classes = classes
    return entries


from functools import lru_cache


@lru_cache(maxsize=512)
def _whole_graph_sequences(g: Digraph) -> tuple[TallySequence, ...]:
    return tuple(TallySequence(tuple(e)) for e in _prefix_table(g, None))


def all_tally_sequences(g: Digraph, X: Optional[int] = None) -> list[TallySequence]:
    """Tally-sequences of every vertex of g relative to X (default: all)."""
    if X is None or X == g.full_mask:
        return list(_whole_graph_sequences(g))
    return [TallySequence(tuple(e)) for e in _prefix_table(g, X)]


def tally_sequence(g: Digraph, v: int, X: Optional[int] = None) -> TallySequence:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    return all_tally_sequences(g, X)[v]


def tally_spectrum(g: Digraph, X: Optional[int] = None) -> TallySpectrum:
    """Multiset of tally-sequences of the vertices in X relative to g."""
    x_mask = g.full_mask if X is None else X
    seqs = all_tally_sequences(g)
    return TallySpectrum.from_counter(Counter(seqs[v] for v in bits(x_mask)))


def tally_class_subgraph(g: Digraph, prefix: Sequence[Tally]) -> Digraph:
    """Induced subgraph on the vertices whose sequence starts with ``prefix``.

    The match is exact-length: a vertex qualifies iff its first ``len(prefix)``
    unrolled entries equal prefix.
    """
    want = tuple(Tally(*p) for p in prefix)
    if not want:
        raise ValueError("prefix must be non-empty")
    seqs = all_tally_sequences(g)
    members = [v for v in range(g.n) if seqs[v].prefix(len(want)) == want]
    return g.induced(members)


def tally_class_vertices(g: Digraph, prefix: Sequence[Tally]) -> list[int]:
    want = tuple(Tally(*p) for p in prefix)
    seqs = all_tally_sequences(g)
    return [v for v in range(g.n) if seqs[v].prefix(len(want)) == want]


# ---------------------------------------------------------------------------
# Weisfeiler-Leman


@dataclass(frozen=True)
class WlColouring:
    k: int
    histogram: tuple[tuple[int, int], ...]
    per_tuple: tuple[tuple[tuple[int, ...], int], ...]

    def histogram_counter(self) -> Counter:
        return Counter(dict(self.histogram))


class MemoryBudgetError(ValueError):
    pass


def _atomic_type(g: Digraph, tup: tuple[int, ...]) -> tuple:
    eq = tuple(tup[i] == tup[j] for i in range(len(tup)) for j in range(len(tup)))
    adj = tuple(
        g.has_edge(tup[i], tup[j]) for i in range(len(tup)) for j in range(len(tup))
    )
    return (eq, adj)


def _k_wl_joint(graphs: Sequence[Digraph], k: int, budget: int) -> list[dict]:
    """Stable k-WL colourings with colour ids shared across the graphs.

    k = 1 is directed colour refinement (loops in the initial colour); k >= 2
    refines tuple colours by the multiset over w of the substituted tuples'
    colours tagged with w's atomic relation to the tuple.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    for g in graphs:
        if g.n**k > budget:
            raise MemoryBudgetError(f"{g.n}^{k} tuples exceed budget {budget}")
    if k == 1:
        cols = stable_colours(list(graphs))
        return [{(v,): c for v, c in enumerate(cc)} for cc in cols]

    tuples = [list(product(range(g.n), repeat=k)) for g in graphs]
    sigs = [{t: _atomic_type(g, t) for t in ts} for g, ts in zip(graphs, tuples)]
    ranks = {s: i for i, s in enumerate(sorted({s for m in sigs for s in m.values()}))}
    cols = [{t: ranks[m[t]] for t in ts} for m, ts in zip(sigs, tuples)]

    while True:
        new_sigs = []
        for g, ts, cc in zip(graphs, tuples, cols):
            m = {}
            for t in ts:
                subs = []
                for w in range(g.n):
                    rel = tuple(
                        (g.has_edge(t[i], w), g.has_edge(w, t[i]), t[i] == w)
                        for i in range(k)
                    )
                    sub_cols = tuple(cc[t[:i] + (w,) + t[i + 1 :]] for i in range(k))
                    subs.append((rel, sub_cols))
                m[t] = (cc[t], tuple(sorted(subs)))
            new_sigs.append(m)
        ranks = {
            s: i for i, s in enumerate(sorted({s for m in new_sigs for s in m.values()}))
        }
        new_cols = [{t: ranks[m[t]] for t in ts} for m, ts in zip(new_sigs, tuples)]
        if new_cols == cols:
            return cols
        cols = new_cols


def _colouring_from(cols: dict, k: int) -> WlColouring:
    hist = Counter(cols.values())
    return WlColouring(
        k=k,
        histogram=tuple(sorted(hist.items())),
        per_tuple=tuple(sorted(cols.items())),
    )


def k_wl(g: Digraph, k: int, budget: int = 1 << 20) -> WlColouring:
    """Stable k-WL colouring of one graph (colour ids canonical by content)."""
    return _colouring_from(_k_wl_joint([g], k, budget)[0], k)


def k_wl_pair(g: Digraph, h: Digraph, k: int, budget: int = 1 << 20) -> tuple[WlColouring, WlColouring]:
    """Stable colourings of both graphs with a shared colour id space."""
    a, b = _k_wl_joint([g, h], k, budget)
    return _colouring_from(a, k), _colouring_from(b, k)


def wl_distinguishes(g: Digraph, h: Digraph, k: int, budget: int = 1 << 20) -> bool:
    """True iff the stable joint histograms differ."""
    a, b = k_wl_pair(g, h, k, budget)
    return a.histogram != b.histogram


# ---------------------------------------------------------------------------
# Spectra JSON (golden-file format)


def spectrum_to_json(spec: TallySpectrum) -> list[dict]:
    return spec.to_json()


def spectrum_from_json(doc: list[dict]) -> TallySpectrum:
    c: Counter = Counter()
    for item in doc:
        seq = TallySequence(tuple(Tally(a, b) for a, b in item["sig"]))
        c[seq] += int(item["mult"])
    return TallySpectrum.from_counter(c)
