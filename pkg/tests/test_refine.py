"""Tally-sequence refinement, spectra, class subgraphs and WL colourings."""
from __future__ import annotations

import random
from collections import Counter

import pytest

from seurat.generators import named_example, stockmeyer_pair
from seurat.graphs import Digraph, Tally, find_isomorphism, make_digraph, mask_of, tally
from seurat.refine import (
    TallySequence,
    all_tally_sequences,
    k_wl,
    k_wl_pair,
    spectrum_from_json,
    spectrum_to_json,
    tally_class_subgraph,
    tally_sequence,
    tally_spectrum,
    wl_distinguishes,
)

# Printed significant parts for the two 6-vertex tournaments (by vertex).
FIG8 = [
    [(1, 4), (0, 0)],
    [(2, 3), (0, 1), (0, 0)],
    [(2, 3), (1, 0), (0, 0)],
    [(3, 2), (0, 1), (0, 0)],
    [(4, 1), (0, 0)],
    [(3, 2), (1, 0), (0, 0)],
]
FIG9 = [
    [(1, 4), (0, 0)],
    [(2, 3), (1, 0), (0, 0)],
    [(3, 2), (0, 1), (0, 0)],
    [(3, 2), (1, 0), (0, 0)],
    [(4, 1), (0, 0)],
    [(2, 3), (0, 1), (0, 0)],
]


def oracle_sequence(g: Digraph, v: int, length: int) -> list[Tally]:
    """Literal recursion from the definition, independent of the batch code."""
    memo: dict[tuple[int, int], Tally] = {}

    def t(u: int, k: int) -> Tally:
        if (u, k) in memo:
            return memo[(u, k)]
        if k == 0:
            val = tally(g, u)
        else:
            prefix_u = tuple(t(u, i) for i in range(k))
            X = mask_of(
                w
                for w in range(g.n)
                if tuple(t(w, i) for i in range(k)) == prefix_u
            )
            val = tally(g, u, X)
        memo[(u, k)] = val
        return val

    return [t(v, k) for k in range(length)]


def random_digraph(rng: random.Random, n: int, directed=True, p=0.4) -> Digraph:
    edges = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if (directed or v >= u) and rng.random() < p
    ]
    return make_digraph(n, edges, directed)


class TestTallySequence:
    def test_star_centre(self):
        g = named_example("fig4").graphs[0]
        assert tally_sequence(g, 0).significant == (Tally(6, 6), Tally(0, 0))

    def test_star_outer(self):
        g = named_example("fig4").graphs[0]
        for v in range(1, 7):
            assert tally_sequence(g, v).significant == (Tally(3, 3), Tally(2, 2))

    def test_fig6_vertex0(self):
        g = named_example("fig6").graphs[0]
        assert tally_sequence(g, 0).significant == (Tally(1, 4), Tally(0, 0))

    def test_fig8_fig9_golden(self):
        g, h = named_example("ramachandran").graphs
        for graph, table in ((g, FIG8), (h, FIG9)):
            seqs = all_tally_sequences(graph)
            for v, sig in enumerate(table):
                assert seqs[v].significant == tuple(Tally(*t) for t in sig)

    def test_matches_definitional_oracle(self):
        rng = random.Random(17)
        for _ in range(15):
            g = random_digraph(rng, rng.randint(1, 6))
            seqs = all_tally_sequences(g)
            for v in range(g.n):
                want = oracle_sequence(g, v, g.n + 2)
                assert seqs[v].prefix(g.n + 2) == tuple(want)

    def test_significant_length_bound(self):
        rng = random.Random(23)
        for _ in range(20):
            g = random_digraph(rng, rng.randint(1, 7))
            for v, s in enumerate(all_tally_sequences(g)):
                assert len(s.significant) <= g.n + 1

    def test_isomorphism_invariance(self):
        rng = random.Random(29)
        for _ in range(15):
            n = rng.randint(2, 7)
            g = random_digraph(rng, n)
            perm = list(range(n))
            rng.shuffle(perm)
            h = g.relabel(perm)
            sg, sh = all_tally_sequences(g), all_tally_sequences(h)
            for v in range(n):
                assert sg[v] == sh[perm[v]]

    def test_normal_form_equality(self):
        a = TallySequence((Tally(3, 3), Tally(2, 2), Tally(2, 2)))
        b = TallySequence((Tally(3, 3), Tally(2, 2)))
        assert a == b and hash(a) == hash(b)
        assert a.entry(10) == Tally(2, 2)


class TestSpectrum:
    def test_stars_equal(self):
        g, h = named_example("stars").graphs
        assert tally_spectrum(g) == tally_spectrum(h)

    def test_d10_differs(self):
        d, ds = stockmeyer_pair("D", 1, 0)
        assert tally_spectrum(d) != tally_spectrum(ds)

    def test_empty(self):
        g = named_example("fig4").graphs[0]
        assert tally_spectrum(g, 0).total == 0

    def test_total_is_set_size(self):
        g = named_example("fig6").graphs[0]
        assert tally_spectrum(g, mask_of([0, 2, 4])).total == 3

    def test_json_round_trip_and_sorted(self):
        g = named_example("fig6").graphs[0]
        spec = tally_spectrum(g)
        doc = spectrum_to_json(spec)
        assert spectrum_from_json(doc) == spec
        sigs = [tuple(map(tuple, item["sig"])) for item in doc]
        assert sigs == sorted(sigs, key=lambda s: (len(s), s))


class TestClassSubgraph:
    def test_star_ring_class(self):
        g = named_example("fig4").graphs[0]
        sub = tally_class_subgraph(g, [Tally(3, 3), Tally(2, 2)])
        c6 = make_digraph(6, [(i, (i + 1) % 6) for i in range(6)], directed=False)
        assert find_isomorphism(sub, c6) is not None

    def test_star_twin_class(self):
        h = named_example("fig5").graphs[0]
        sub = tally_class_subgraph(h, [Tally(3, 3), Tally(2, 2)])
        two_triangles = make_digraph(
            6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], directed=False
        )
        assert find_isomorphism(sub, two_triangles) is not None

    def test_unmatched_prefix_empty(self):
        g = named_example("fig4").graphs[0]
        assert tally_class_subgraph(g, [Tally(9, 9)]).n == 0


class TestWl:
    def test_regular_graph_single_class(self):
        c5 = make_digraph(5, [(i, (i + 1) % 5) for i in range(5)], directed=False)
        col = k_wl(c5, 1)
        assert len(col.histogram) == 1

    def test_stars_identical_histograms(self):
        g, h = named_example("stars").graphs
        a, b = k_wl_pair(g, h, 1)
        assert a.histogram == b.histogram
        assert not wl_distinguishes(g, h, 1)

    def test_d10_distinguished(self):
        d, ds = stockmeyer_pair("D", 1, 0)
        assert wl_distinguishes(d, ds, 1)

    def test_self_never_distinguished(self):
        rng = random.Random(31)
        for k in (1, 2):
            for _ in range(6):
                n = rng.randint(2, 4)
                g = random_digraph(rng, n)
                perm = list(range(n))
                rng.shuffle(perm)
                assert not wl_distinguishes(g, g.relabel(perm), k)

    def test_budget_guard(self):
        g = make_digraph(40, [])
        with pytest.raises(ValueError):
            k_wl(g, 2, budget=100)

    def test_undirected_cr_refines_tally_sequences(self):
        # same 1-WL colour implies same tally-sequence (undirected, n <= 6
        # here sampled; the exhaustive sweep lives in the acceptance suite)
        rng = random.Random(37)
        for _ in range(25):
            g = random_digraph(rng, rng.randint(2, 6), directed=False, p=0.5)
            colours = dict(k_wl(g, 1).per_tuple)
            seqs = all_tally_sequences(g)
            by_colour: dict[int, set] = {}
            for v in range(g.n):
                by_colour.setdefault(colours[(v,)], set()).add(seqs[v])
            assert all(len(s) == 1 for s in by_colour.values())

    def test_converse_failure_witness(self):
        # a graph with two vertices of equal tally-sequence but different
        # 1-WL colour: two degree-2 vertices whose neighbour degrees differ
        g = make_digraph(
            7,
            [(0, 1), (0, 2), (3, 5), (3, 6), (5, 6), (5, 4), (6, 4)],
            directed=False,
        )
        seqs = all_tally_sequences(g)
        colours = dict(k_wl(g, 1).per_tuple)
        assert seqs[0] == seqs[3] == seqs[4]
        assert colours[(0,)] != colours[(3,)]
