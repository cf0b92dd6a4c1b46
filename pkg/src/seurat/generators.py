"""Graph family constructors: power-of-two tournaments, the six Stockmeyer
pair families, CFI gadget graphs with an optional twist, complete graphs and
the worked figure examples.

Printed sources index vertices from 1; everything here is 0-based, with the
shift recorded in the label tables (vertex i carries label "v<i+1>") so golden
tests can compare against printed matrices verbatim.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Union

from .graphs import Digraph, bits, make_digraph


def odd(z: int) -> int:
    """Divide z by the largest possible power of two (sign preserved)."""
    if z == 0:
        raise ValueError("odd() undefined at 0")
    while z % 2 == 0:
        z //= 2
    return z


def _dominates(i: int, j: int) -> bool:
    """Arc rule on 1-based indices: i -> j iff odd(j - i) == 1 (mod 4)."""
    return i != j and odd(j - i) % 4 == 1


def tournament_T(k: int) -> Digraph:
    """The 2^k-vertex tournament with arcs from the odd() congruence rule."""
    if k < 0:
        raise ValueError("exponent must be >= 0")
    if k > 10:
        raise ValueError("size budget: k <= 10")
    n = 2**k
    rows = []
    for i in range(1, n + 1):
        r = 0
        for j in range(1, n + 1):
            if _dominates(i, j):
                r |= 1 << (j - 1)
        rows.append(r)
    return Digraph(n, True, tuple(rows))


def tournament_labels(k: int) -> dict[int, str]:
    return {i: f"v{i + 1}" for i in range(2**k)}


# ---------------------------------------------------------------------------
# Stockmeyer families


@dataclass(frozen=True)
class StockmeyerParams:
    m: int
    n: int
    w: int
    x: int
    y: int
    z: int

    def __post_init__(self) -> None:
        if not 0 <= self.n < self.m:
            raise ValueError("need 0 <= n < m")
        for b in (self.w, self.x, self.y, self.z):
            if b not in (0, 1):
                raise ValueError("w,x,y,z must be bits")

    @property
    def p(self) -> int:
        return 2**self.m + 2**self.n


#: (w, x, y, z) rows of the six families and their starred partners.
FAMILY_BITS: dict[str, tuple[int, int, int, int]] = {
    "A": (1, 0, 0, 0),
    "A*": (0, 1, 0, 0),
    "B": (0, 0, 1, 0),
    "B*": (0, 0, 0, 1),
    "C": (1, 0, 1, 0),
    "C*": (0, 1, 0, 1),
    "D": (1, 0, 0, 1),
    "D*": (0, 1, 1, 0),
    "E": (1, 1, 1, 0),
    "E*": (1, 1, 0, 1),
    "F": (1, 0, 1, 1),
    "F*": (0, 1, 1, 1),
}


def stockmeyer_matrix(m: int, n: int) -> list[list[str]]:
    """Symbolic p x p matrix with entries in {"0","1","w","x","y","z"}."""
    if not 0 <= n < m:
        raise ValueError("need 0 <= n < m")
    p = 2**m + 2**n
    t = 2**m
    out = []
    for i in range(1, p + 1):
        row = []
        for j in range(1, p + 1):
            if (i <= t) == (j <= t):
                row.append("1" if _dominates(i, j) else "0")
            elif i <= t:
                row.append("w" if (i + j) % 2 == 0 else "x")
            else:
                row.append("y" if (i + j) % 2 == 0 else "z")
        out.append(row)
    return out


def stockmeyer_graph(params: StockmeyerParams) -> Digraph:
    """Concrete digraph from the symbolic matrix with bits substituted."""
    sub = {"0": 0, "1": 1, "w": params.w, "x": params.x, "y": params.y, "z": params.z}
    sym = stockmeyer_matrix(params.m, params.n)
    rows = []
    for row in sym:
        r = 0
        for j, cell in enumerate(row):
            if sub[cell]:
                r |= 1 << j
        rows.append(r)
    return Digraph(params.p, True, tuple(rows))


def stockmeyer_labels(m: int, n: int) -> dict[int, str]:
    return {i: f"v{i + 1}" for i in range(2**m + 2**n)}


def stockmeyer_pair(family: str, m: int, n: int) -> tuple[Digraph, Digraph]:
    """(Z_{m,n}, Z*_{m,n}) for a base family tag in A..F."""
    tag = family.rstrip("*")
    if tag not in ("A", "B", "C", "D", "E", "F"):
        raise ValueError(f"unknown family {family!r}")
    plain = stockmeyer_graph(StockmeyerParams(m, n, *FAMILY_BITS[tag]))
    star = stockmeyer_graph(StockmeyerParams(m, n, *FAMILY_BITS[tag + "*"]))
    return plain, star


# ---------------------------------------------------------------------------
# CFI gadget graphs


@dataclass(frozen=True)
class CfiLabel:
    """Identity of a gadget node: internal (even edge-subset) or external."""

    kind: str  # "internal" | "external"
    base: int
    subset: Optional[tuple[int, ...]] = None  # internal: sorted neighbour ends
    nbr: Optional[int] = None  # external: the edge's other end
    letter: Optional[str] = None  # external: "a" | "b"

    def __str__(self) -> str:
        if self.kind == "internal":
            inner = ",".join(f"({self.base},{w})" for w in self.subset or ())
            return f"i({self.base},{{{inner}}})"
        return f"{self.letter}({self.base},{self.nbr})"


TwistArg = Union[None, bool, tuple[int, int]]


def cfi(base: Digraph, twist: TwistArg = None) -> tuple[Digraph, dict[int, CfiLabel]]:
    """Gadget graph of an undirected base; ``twist`` crosses one linkage.

    twist=None builds the plain graph, twist=True picks the lexicographically
    smallest base edge, and an explicit (u, v) pair twists that edge.  Twist
    location is irrelevant up to isomorphism when all base degrees are >= 2.
    """
    if base.directed:
        raise ValueError("cfi base must be undirected")
    if base.loop_mask():
        raise ValueError("cfi base must be irreflexive")
    degrees = [base.rows[v].bit_count() for v in range(base.n)]
    if base.n and min(degrees) < 1:
        raise ValueError("cfi base must have min degree >= 1")

    und_edges = sorted(base.undirected_edges())
    if twist is True:
        twist_edge = und_edges[0]
    elif twist in (None, False):
        twist_edge = None
    else:
        u, v = twist
        twist_edge = (min(u, v), max(u, v))
        if twist_edge not in und_edges:
            raise ValueError(f"twist edge {twist} not in base")

    labels: dict[int, CfiLabel] = {}
    index: dict[tuple, int] = {}

    def add(label: CfiLabel) -> int:
        i = len(labels)
        labels[i] = label
        key = (
            (label.kind, label.base, label.subset)
            if label.kind == "internal"
            else (label.kind, label.base, label.nbr, label.letter)
        )
        index[key] = i
        return i

    for v in range(base.n):
        incident = sorted(bits(base.rows[v]))
        evens = [
            tuple(sorted(c))
            for size in range(0, len(incident) + 1, 2)
            for c in combinations(incident, size)
        ]
        for subset in sorted(evens, key=lambda s: (len(s), s)):
            add(CfiLabel("internal", v, subset=subset))
        for w in incident:
            add(CfiLabel("external", v, nbr=w, letter="a"))
            add(CfiLabel("external", v, nbr=w, letter="b"))

    edges: list[tuple[int, int]] = []
    for v in range(base.n):
        incident = sorted(bits(base.rows[v]))
        for key, i in list(index.items()):
            if key[0] == "internal" and key[1] == v:
                subset = key[2]
                for w in incident:
                    letter = "a" if w in subset else "b"
                    j = index[("external", v, w, letter)]
                    edges.append((i, j))
    for u, v in und_edges:
        if twist_edge == (u, v):
            edges.append((index[("external", u, v, "a")], index[("external", v, u, "b")]))
            edges.append((index[("external", u, v, "b")], index[("external", v, u, "a")]))
        else:
            edges.append((index[("external", u, v, "a")], index[("external", v, u, "a")]))
            edges.append((index[("external", u, v, "b")], index[("external", v, u, "b")]))

    return make_digraph(len(labels), edges, directed=False), labels


def is_separator(g: Digraph, S: int) -> bool:
    """True iff deleting mask S leaves no component larger than |g|/2."""
    if g.directed:
        raise ValueError("separator check expects an undirected graph")
    keep = [v for v in range(g.n) if not S >> v & 1]
    sub = g.induced(keep)
    seen = 0
    for start in range(sub.n):
        if seen >> start & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for u in bits(frontier):
                nxt |= sub.rows[u]
            frontier = nxt & ~comp
            comp |= nxt
        if 2 * comp.bit_count() > g.n:
            return False
        seen |= comp
    return True


# ---------------------------------------------------------------------------
# Named examples and small helpers


def complete_graph(n: int) -> Digraph:
    return make_digraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)], directed=False)


def cycle_graph(n: int) -> Digraph:
    return make_digraph(n, [(i, (i + 1) % n) for i in range(n)], directed=False)


def _fig1_pair() -> tuple[Digraph, Digraph]:
    g = make_digraph(6, [(0, 1), (1, 2), (3, 4), (4, 5)], directed=True)
    h = make_digraph(8, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 6)], directed=True)
    return g, h


def _star_pair() -> tuple[Digraph, Digraph]:
    spokes = [(0, i) for i in range(1, 7)]
    ring = make_digraph(
        7, spokes + [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)], directed=False
    )
    twin = make_digraph(
        7, spokes + [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)], directed=False
    )
    return ring, twin


_RAMA_G_ROWS = ["011110", "001110", "000111", "000011", "000001", "110000"]
_RAMA_H_ROWS = ["011110", "001110", "000110", "000011", "000001", "111000"]


def _from_matrix(rows: Sequence[str]) -> Digraph:
    n = len(rows)
    edges = [(i, j) for i, r in enumerate(rows) for j, c in enumerate(r) if c == "1"]
    return make_digraph(n, edges, directed=True)


def _rama_pair() -> tuple[Digraph, Digraph]:
    return _from_matrix(_RAMA_G_ROWS), _from_matrix(_RAMA_H_ROWS)


@dataclass(frozen=True)
class NamedExample:
    graphs: tuple[Digraph, ...]
    labels: tuple[dict[int, str], ...]


def named_example(name: str) -> NamedExample:
    """Exact figure graph(s) by name; raises on unknown names.

    Pair names: fig1, stars, ramachandran.  Single names: fig1_g, fig1_h,
    fig4, fig5, fig6, fig7, K<n>, C<n>, T<k>.
    """
    key = name.lower()
    if key == "fig1":
        g, h = _fig1_pair()
        return NamedExample((g, h), ({}, {}))
    if key in ("fig1_g", "fig1_h"):
        g, h = _fig1_pair()
        return NamedExample((g if key.endswith("g") else h,), ({},))
    if key == "stars":
        g, h = _star_pair()
        lab = {0: "centre", **{i: f"o{i}" for i in range(1, 7)}}
        return NamedExample((g, h), (lab, lab))
    if key in ("fig4", "fig5"):
        g, h = _star_pair()
        lab = {0: "centre", **{i: f"o{i}" for i in range(1, 7)}}
        return NamedExample((g if key == "fig4" else h,), (lab,))
    if key == "ramachandran":
        g, h = _rama_pair()
        return NamedExample(
            (g, h),
            ({i: f"v{i}" for i in range(6)}, {i: f"w{i}" for i in range(6)}),
        )
    if key in ("fig6", "ramachandran_g"):
        return NamedExample((_rama_pair()[0],), ({i: f"v{i}" for i in range(6)},))
    if key in ("fig7", "ramachandran_h"):
        return NamedExample((_rama_pair()[1],), ({i: f"w{i}" for i in range(6)},))
    if key.startswith("k") and key[1:].isdigit():
        return NamedExample((complete_graph(int(key[1:])),), ({},))
    if key.startswith("c") and key[1:].isdigit():
        return NamedExample((cycle_graph(int(key[1:])),), ({},))
    if key.startswith("t") and key[1:].isdigit():
        k = int(key[1:])
        return NamedExample((tournament_T(k),), (tournament_labels(k),))
    raise ValueError(f"unknown example {name!r}")
