"""Immutable bit-matrix digraphs with degree, closure and isomorphism primitives.

Vertices are dense indices 0..n-1.  Adjacency is one integer bitmask per row
(bit v of ``rows[u]`` set iff there is an edge u -> v), so neighbourhood and
tally computations are single mask-and-popcount operations at the sizes this
library targets (n <= ~64).  Loops are allowed and a loop contributes one to
the in-degree and one to the out-degree of its vertex.

All values here are immutable after construction and safe to share between
threads.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

GRAPH_FORMAT = "seurat-graph-v1"

#: Direction steps for neighbourhood closures.
IN = "I"
OUT = "O"

DirectionSeq = tuple  # tuple of "I"/"O" steps


class Tally(NamedTuple):
    """(in-degree, out-degree) of a vertex, optionally relative to a set."""

    in_deg: int
    out_deg: int


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Digraph:
    """Finite digraph on vertices 0..n-1 with bit-matrix adjacency.

    ``directed=False`` graphs store a symmetric matrix and are played by the
    directed rules throughout the library.
    """

    n: int
    directed: bool
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.rows) != self.n:
            raise ValueError("rows length must equal n")
        full = self.full_mask
        for r in self.rows:
            if r & ~full:
                raise ValueError("adjacency bit out of range")
        if not self.directed:
            for u in range(self.n):
                for v in bits(self.rows[u]):
                    if not self.rows[v] >> u & 1:
                        raise ValueError("undirected adjacency must be symmetric")

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def cols(self) -> tuple[int, ...]:
        """Column masks: bit u of cols[v] set iff edge u -> v."""
        cols = [0] * self.n
        for u in range(self.n):
            for v in bits(self.rows[u]):
                cols[v] |= 1 << u
        return tuple(cols)

    @cached_property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def out_mask(self, u: int) -> int:
        return self.rows[u]

    def in_mask(self, v: int) -> int:
        return self.cols[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        """All ordered edges as stored (both orientations for undirected)."""
        for u in range(self.n):
            for v in bits(self.rows[u]):
                yield (u, v)

    def undirected_edges(self) -> Iterator[tuple[int, int]]:
        """Each symmetric edge once (u <= v); requires a symmetric matrix."""
        for u in range(self.n):
            for v in bits(self.rows[u]):
                if u <= v:
                    yield (u, v)

    def loop_mask(self) -> int:
        m = 0
        for v in range(self.n):
            if self.rows[v] >> v & 1:
                m |= 1 << v
        return m

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Relabel vertices; ``perm[old] = new``."""
        rows = [0] * self.n
        for u in range(self.n):
            r = 0
            for v in bits(self.rows[u]):
                r |= 1 << perm[v]
            rows[perm[u]] = r
        return Digraph(self.n, self.directed, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        """Induced subgraph; new vertex i is old ``vertices[i]``."""
        idx = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            r = 0
            for w in bits(self.rows[v]):
                if w in idx:
                    r |= 1 << idx[w]
            rows.append(r)
        return Digraph(len(vertices), self.directed, tuple(rows))

    def delete_vertex(self, v: int) -> "Digraph":
        keep = [u for u in range(self.n) if u != v]
        return self.induced(keep)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, self.directed, self.cols)


def make_digraph(n: int, edges: Iterable[tuple[int, int]], directed: bool = True) -> Digraph:
    """Build a digraph from an edge list; duplicate edges are idempotent."""
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        rows[u] |= 1 << v
        if not directed:
            rows[v] |= 1 << u
    return Digraph(n, directed, tuple(rows))


# ---------------------------------------------------------------------------
# Tallies and neighbourhood closures


def tally(g: Digraph, v: int, Y: Optional[int] = None) -> Tally:
    """Tally of v relative to vertex-set mask Y (default: all vertices).

    A loop at v with v in Y counts once in each component.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    y = g.full_mask if Y is None else Y
    return Tally((g.cols[v] & y).bit_count(), (g.rows[v] & y).bit_count())


def sigma(g: Digraph, X: int, Y: Optional[int] = None) -> Counter:
    """Multiset of tallies of the vertices in mask X (relative to Y)."""
    return Counter(tally(g, v, Y) for v in bits(X))


def sigma_support(g: Digraph, X: int, Y: Optional[int] = None) -> frozenset:
    """The set of tallies occurring in X (support of the multiset)."""
    return frozenset(sigma(g, X, Y))


def eta_step(g: Digraph, S: int, direction: str) -> int:
    """One closure step: S plus its out- (``"O"``) or in- (``"I"``) neighbours."""
    acc = S
    for u in bits(S):
        acc |= g.rows[u] if direction == OUT else g.cols[u]
    return acc


def eta(g: Digraph, S: int, dirs: Sequence[str]) -> int:
    """Fold closure steps left to right; the empty sequence returns S."""
    cur = S
    for d in dirs:
        if d not in (IN, OUT):
            raise ValueError(f"bad direction {d!r}")
        cur = eta_step(g, cur, d)
    return cur


def connectivity(g: Digraph) -> dict:
    """Strong and weak connectivity via bitset reachability."""
    if g.n == 0:
        raise ValueError("connectivity undefined for the empty graph")

    def closure(rows: Sequence[int], start: int) -> int:
        seen = 1 << start
        frontier = seen
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= rows[u]
            frontier = nxt & ~seen
            seen |= nxt
        return seen

    full = g.full_mask
    strong = closure(g.rows, 0) == full and closure(g.cols, 0) == full
    sym = tuple(g.rows[u] | g.cols[u] for u in range(g.n))
    weak = closure(sym, 0) == full
    return {"strongly_connected": strong, "weakly_connected": weak}


# ---------------------------------------------------------------------------
# Colour refinement (shared by isomorphism search, canonical forms and 1-WL)


def stable_colours(
    graphs: Sequence[Digraph],
    initial: Optional[Sequence[Sequence[int]]] = None,
) -> list[list[int]]:
    """Joint directed colour refinement with content-canonical colour ids.

    Initial colours default to the loop bit.  Each round a vertex signature is
    (old colour, sorted out-neighbour colours, sorted in-neighbour colours);
    new ids are ranks of the sorted distinct signatures, so runs over
    isomorphic inputs assign identical ids and ids are comparable across the
    graphs in one call.
    """
    if initial is None:
        cols = [[int(g.rows[v] >> v & 1) for v in range(g.n)] for g in graphs]
    else:
        cols = [list(c) for c in initial]
        # normalize seeds to dense ranks so later renaming is content-driven
        ranks = {c: i for i, c in enumerate(sorted({c for cc in cols for c in cc}))}
        cols = [[ranks[c] for c in cc] for cc in cols]

    def partition_id(cs: list[list[int]]) -> tuple:
        return tuple(tuple(c) for c in cs)

    while True:
        sigs = []
        for g, cc in zip(graphs, cols):
            gs = []
            for v in range(g.n):
                outs = tuple(sorted(cc[w] for w in bits(g.rows[v])))
                ins = tuple(sorted(cc[w] for w in bits(g.cols[v])))
                gs.append((cc[v], outs, ins))
            sigs.append(gs)
        ranks = {s: i for i, s in enumerate(sorted({s for gs in sigs for s in gs}))}
        new = [[ranks[s] for s in gs] for gs in sigs]
        if partition_id(new) == partition_id(cols):
            return cols
        cols = new


# ---------------------------------------------------------------------------
# Isomorphism, automorphisms, canonical forms


@dataclass(frozen=True)
class VertexMap:
    """Injective partial map between vertex sets of two digraphs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        src = [a for a, _ in self.pairs]
        dst = [b for _, b in self.pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise ValueError("vertex map must be injective")

    @cached_property
    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __getitem__(self, v: int) -> int:
        return self.as_dict[v]

    def is_total(self, n: int) -> bool:
        return len(self.pairs) == n

    def to_perm(self, n: int) -> tuple[int, ...]:
        """Total map as a permutation tuple (``perm[src] = dst``)."""
        if not self.is_total(n):
            raise ValueError("map is not total")
        perm = [0] * n
        for a, b in self.pairs:
            perm[a] = b
        return tuple(perm)


def _search_order(g: Digraph, cells: dict[int, list[int]], colours: list[int]) -> list[int]:
    """Vertex order for backtracking: small cells first, then stay adjacent."""
    order: list[int] = []
    placed = set()
    sym = [g.rows[v] | g.cols[v] for v in range(g.n)]

    def cell_size(v: int) -> int:
        return len(cells[colours[v]])

    remaining = set(range(g.n))
    while remaining:
        adjacent = [v for v in remaining if any(sym[v] >> u & 1 for u in placed)]
        pool = adjacent or list(remaining)
        v = min(pool, key=lambda v: (cell_size(v), v))
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def _isomorphisms(g: Digraph, h: Digraph, limit: Optional[int]) -> Iterator[tuple[int, ...]]:
    """Yield edge-preserving bijections g -> h as permutation tuples."""
    if g.n != h.n or g.edge_count != h.edge_count:
        return
    cg, ch = stable_colours([g, h])
    if sorted(Counter(cg).items()) != sorted(Counter(ch).items()):
        return
    cells_g: dict[int, list[int]] = {}
    cells_h: dict[int, list[int]] = {}
    for v, c in enumerate(cg):
        cells_g.setdefault(c, []).append(v)
    for v, c in enumerate(ch):
        cells_h.setdefault(c, []).append(v)
    order = _search_order(g, cells_g, cg)
    n = g.n
    mapping = [-1] * n
    used_mask = 0
    found = 0

    def extend(i: int) -> Iterator[tuple[int, ...]]:
        nonlocal used_mask, found
        if i == n:
            yield tuple(mapping)
            return
        v = order[i]
        for w in cells_h[cg[v]]:
            if used_mask >> w & 1:
                continue
            ok = True
            if (g.rows[v] >> v & 1) != (h.rows[w] >> w & 1):
                continue
            for j in range(i):
                u = order[j]
                mu = mapping[u]
                if (g.rows[v] >> u & 1) != (h.rows[w] >> mu & 1):
                    ok = False
                    break
                if (g.rows[u] >> v & 1) != (h.rows[mu] >> w & 1):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used_mask |= 1 << w
            yield from extend(i + 1)
            mapping[v] = -1
            used_mask &= ~(1 << w)

    for perm in extend(0):
        yield perm
        found += 1
        if limit is not None and found >= limit:
            return


def _brute_isomorphism(g: Digraph, h: Digraph) -> Optional[tuple[int, ...]]:
    from itertools import permutations

    if g.n != h.n:
        return None
    if g.n > 8:
        raise ValueError("brute-force isomorphism is guarded to n <= 8")
    for perm in permutations(range(g.n)):
        if all(
            (g.rows[u] >> v & 1) == (h.rows[perm[u]] >> perm[v] & 1)
            for u in range(g.n)
            for v in range(g.n)
        ):
            return perm
    return None


def find_isomorphism(
    g: Digraph, h: Digraph, mode: str = "refined_backtracking"
) -> Optional[VertexMap]:
    """Full isomorphism g -> h, or None.

    ``brute_force`` tries all permutations (n <= 8) and is the test oracle for
    the refined mode.
    """
    if mode == "brute_force":
        perm = _brute_isomorphism(g, h)
    elif mode == "refined_backtracking":
        perm = next(iter(_isomorphisms(g, h, limit=1)), None)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if perm is None:
        return None
    return VertexMap(tuple((v, perm[v]) for v in range(g.n)))


def automorphisms(g: Digraph, limit: int = 200_000) -> list[tuple[int, ...]]:
    """The full automorphism group as permutation tuples.

    Raises if the group exceeds ``limit`` elements; callers needing only
    symmetry reduction fall back to exact keys in that case.
    """
    out = []
    for perm in _isomorphisms(g, g, limit=limit + 1):
        out.append(perm)
        if len(out) > limit:
            raise ValueError(f"automorphism group larger than limit {limit}")
    return out


def automorphism_maps(g: Digraph, limit: int = 200_000) -> list[VertexMap]:
    return [
        VertexMap(tuple((v, p[v]) for v in range(g.n)))
        for p in automorphisms(g, limit)
    ]


def _encode(g: Digraph, perm: Sequence[int]) -> bytes:
    """Byte encoding of the relabelled adjacency matrix (perm[old] = new)."""
    inv = [0] * g.n
    for old, new in enumerate(perm):
        inv[new] = old
    bitint = 0
    pos = 0
    for i in range(g.n):
        ri = g.rows[inv[i]]
        for j in range(g.n):
            if ri >> inv[j] & 1:
                bitint |= 1 << pos
            pos += 1
    nbytes = (g.n * g.n + 7) // 8
    return (
        g.n.to_bytes(2, "big")
        + (b"\x01" if g.directed else b"\x00")
        + bitint.to_bytes(nbytes, "big")
    )


def canonical_form(g: Digraph) -> bytes:
    """Canonical byte string: equal for exactly the isomorphic digraphs.

    Individualization-refinement search for the lexicographically smallest
    relabelled adjacency encoding, with orbit pruning from automorphisms
    discovered at equal-encoding leaves.  Correctness is anchored to the
    brute-force oracle in the tests, not to any external tool.
    """
    if g.n == 0:
        return _encode(g, ())
    base = stable_colours([g])[0]
    best: list[Optional[bytes]] = [None]
    best_perm: list[Optional[tuple[int, ...]]] = [None]
    autos: list[tuple[int, ...]] = []

    def cells_of(colours: Sequence[int]) -> list[list[int]]:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colours):
            cells.setdefault(c, []).append(v)
        return [cells[c] for c in sorted(cells)]

    def perm_from(colours: Sequence[int]) -> tuple[int, ...]:
        slots = sorted(range(g.n), key=lambda v: (colours[v], v))
        perm = [0] * g.n
        for i, v in enumerate(slots):
            perm[v] = i
        return tuple(perm)

    def individualize(colours: Sequence[int], v: int) -> list[int]:
        seed = [2 * c for c in colours]
        seed[v] -= 1
        return stable_colours([g], [seed])[0]

    def search(colours: list[int], path: tuple[int, ...]) -> None:
        cells = cells_of(colours)
        target = next((c for c in cells if len(c) > 1), None)
        if target is None:
            perm = perm_from(colours)
            enc = _encode(g, perm)
            cur = best[0]
            if cur is None or enc < cur:
                best[0] = enc
                best_perm[0] = perm
            elif enc == cur:
                bp = best_perm[0]
                assert bp is not None
                inv = [0] * g.n
                for old, new in enumerate(bp):
                    inv[new] = old
                autos.append(tuple(inv[perm[v]] for v in range(g.n)))
            return
        done: list[int] = []
        for v in target:
            usable = [a for a in autos if all(a[p] == p for p in path)]
            skip = False
            for a in usable:
                reach = {v}
                frontier = [v]
                while frontier:
                    x = frontier.pop()
                    for b in usable:
                        y = b[x]
                        if y not in reach:
                            reach.add(y)
                            frontier.append(y)
                if reach & set(done):
                    skip = True
                    break
            if skip:
                continue
            done.append(v)
            search(individualize(colours, v), path + (v,))

    search(list(base), ())
    assert best[0] is not None
    return best[0]


# ---------------------------------------------------------------------------
# seurat-graph-v1 JSON


def graph_to_json(g: Digraph, labels: Optional[dict[int, str]] = None) -> dict:
    edges = list(g.undirected_edges()) if not g.directed else list(g.edges())
    doc: dict = {
        "format": GRAPH_FORMAT,
        "directed": g.directed,
        "n": g.n,
        "edges": [[u, v] for u, v in edges],
    }
    if labels:
        doc["labels"] = {str(k): v for k, v in labels.items()}
    return doc


def graph_from_json(doc: dict) -> Digraph:
    if not isinstance(doc, dict) or doc.get("format") != GRAPH_FORMAT:
        raise ValueError(f"not a {GRAPH_FORMAT} document")
    n = doc["n"]
    directed = doc["directed"]
    if not isinstance(n, int) or n < 0:
        raise ValueError("bad vertex count")
    edges = [(int(u), int(v)) for u, v in doc["edges"]]
    return make_digraph(n, edges, directed)


def labels_from_json(doc: dict) -> Optional[dict[int, str]]:
    raw = doc.get("labels")
    if raw is None:
        return None
    return {int(k): str(v) for k, v in raw.items()}


def dump_graph(g: Digraph, labels: Optional[dict[int, str]] = None) -> str:
    return json.dumps(graph_to_json(g, labels), indent=2)


def load_graph(text: str) -> Digraph:
    return graph_from_json(json.loads(text))
