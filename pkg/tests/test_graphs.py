"""Core digraph primitives: tallies, closures, isomorphism, canonical forms."""
from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seurat.graphs import (
    Digraph,
    Tally,
    VertexMap,
    automorphisms,
    bits,
    canonical_form,
    connectivity,
    dump_graph,
    eta,
    find_isomorphism,
    graph_from_json,
    graph_to_json,
    load_graph,
    make_digraph,
    mask_of,
    sigma,
    tally,
)

# T_2 edge list derived by hand from the odd() arc rule (1-based i -> j
# becomes 0-based below): 1->2, 1->3, 2->3, 2->4, 3->4, 4->1.
T2_EDGES = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)]


def t2() -> Digraph:
    return make_digraph(4, T2_EDGES, directed=True)


def random_digraph(rng: random.Random, n: int, directed: bool = True, p: float = 0.4) -> Digraph:
    edges = []
    for u in range(n):
        for v in range(n):
            if not directed and v < u:
                continue
            if rng.random() < p:
                edges.append((u, v))
    return make_digraph(n, edges, directed)


class TestConstruction:
    def test_single_edge(self):
        g = make_digraph(2, [(0, 1)], directed=True)
        assert g.has_edge(0, 1) and not g.has_edge(1, 0)

    def test_reflexive_single_vertex(self):
        g = make_digraph(1, [(0, 0)], directed=True)
        assert g.has_edge(0, 0)

    def test_undirected_symmetrizes(self):
        g = make_digraph(3, [(0, 1), (1, 2)], directed=False)
        assert g.has_edge(1, 0) and g.has_edge(2, 1)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            make_digraph(2, [(0, 2)])

    def test_duplicate_edges_idempotent(self):
        g = make_digraph(2, [(0, 1), (0, 1)])
        assert g.edge_count == 1

    def test_asymmetric_undirected_rejected(self):
        with pytest.raises(ValueError):
            Digraph(2, False, (0b10, 0b00))


class TestTally:
    def test_t2_vertex0(self):
        assert tally(t2(), 0) == Tally(1, 2)

    def test_t2_vertex3(self):
        assert tally(t2(), 3) == Tally(2, 1)

    def test_edgeless(self):
        g = make_digraph(3, [])
        assert all(tally(g, v) == Tally(0, 0) for v in range(3))

    def test_loop_counts_once_each_side(self):
        g = make_digraph(1, [(0, 0)])
        assert tally(g, 0) == Tally(1, 1)

    def test_relative(self):
        g = t2()
        assert tally(g, 0, mask_of([1, 2])) == Tally(0, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            tally(t2(), 4)

    def test_sigma_t2(self):
        s = sigma(t2(), t2().full_mask)
        assert s == {Tally(1, 2): 2, Tally(2, 1): 2}

    def test_sigma_empty(self):
        assert sigma(t2(), 0) == {}

    def test_degree_sums(self):
        rng = random.Random(0)
        for _ in range(20):
            g = random_digraph(rng, 6)
            tallies = [tally(g, v) for v in range(g.n)]
            assert sum(t.in_deg for t in tallies) == g.edge_count
            assert sum(t.out_deg for t in tallies) == g.edge_count


class TestEta:
    def chain(self) -> Digraph:
        return make_digraph(3, [(0, 1), (1, 2)])

    def test_out_step(self):
        assert eta(self.chain(), mask_of([0]), ("O",)) == mask_of([0, 1])

    def test_empty_sequence_is_identity(self):
        g = self.chain()
        assert eta(g, mask_of([2]), ()) == mask_of([2])

    def test_two_in_steps(self):
        assert eta(self.chain(), mask_of([2]), ("I", "I")) == mask_of([0, 1, 2])

    @given(st.integers(0, 2**6 - 1), st.integers(0, 2**6 - 1), st.data())
    @settings(max_examples=60, deadline=None)
    def test_monotone_inflationary(self, s, extra, data):
        rng = random.Random(7)
        g = random_digraph(rng, 6)
        dirs = tuple(data.draw(st.sampled_from(["I", "O"])) for _ in range(3))
        big = s | extra
        assert eta(g, s, dirs) & s == s
        assert eta(g, s, dirs) & ~eta(g, big, dirs) == 0


class TestConnectivity:
    def test_two_cycle(self):
        g = make_digraph(2, [(0, 1), (1, 0)])
        assert connectivity(g) == {"strongly_connected": True, "weakly_connected": True}

    def test_single_arc(self):
        g = make_digraph(2, [(0, 1)])
        assert connectivity(g) == {"strongly_connected": False, "weakly_connected": True}

    def test_disconnected(self):
        g = make_digraph(2, [])
        assert connectivity(g) == {"strongly_connected": False, "weakly_connected": False}


class TestIsomorphism:
    def test_identity_exists(self):
        g = t2()
        m = find_isomorphism(g, g)
        assert m is not None and m.is_total(4)

    def test_modes_agree_exhaustive_n3(self):
        # every pair of 3-vertex digraphs with loops, both modes agree
        graphs = []
        for code in range(2**9):
            rows = tuple((code >> (3 * u)) & 0b111 for u in range(3))
            graphs.append(Digraph(3, True, rows))
        rng = random.Random(1)
        sample = rng.sample(graphs, 40)
        for g in sample:
            for h in rng.sample(graphs, 6):
                refined = find_isomorphism(g, h, "refined_backtracking")
                brute = find_isomorphism(g, h, "brute_force")
                assert (refined is None) == (brute is None)

    def test_modes_agree_random_n8(self):
        rng = random.Random(42)
        for _ in range(60):
            n = rng.randint(2, 6)
            g = random_digraph(rng, n)
            if rng.random() < 0.5:
                perm = list(range(n))
                rng.shuffle(perm)
                h = g.relabel(perm)
            else:
                h = random_digraph(rng, n)
            refined = find_isomorphism(g, h)
            brute = find_isomorphism(g, h, "brute_force")
            assert (refined is None) == (brute is None)
            if refined is not None:
                perm = refined.to_perm(n)
                for u in range(n):
                    for v in range(n):
                        assert g.has_edge(u, v) == h.has_edge(perm[u], perm[v])

    def test_isomorphism_preserves_tallies(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(2, 7)
            g = random_digraph(rng, n)
            perm = list(range(n))
            rng.shuffle(perm)
            h = g.relabel(perm)
            m = find_isomorphism(g, h)
            assert m is not None
            for v in range(n):
                assert tally(g, v) == tally(h, m[v])

    def test_brute_guard(self):
        g = make_digraph(9, [])
        with pytest.raises(ValueError):
            find_isomorphism(g, g, "brute_force")


class TestAutomorphisms:
    def test_edgeless_two_vertices(self):
        assert len(automorphisms(make_digraph(2, []))) == 2

    def test_identity_always_present(self):
        g = t2()
        assert tuple(range(4)) in automorphisms(g)

    def test_star_h_group_order_matches_brute_force(self):
        # two triangles joined to a centre; oracle = permutation filter
        edges = [(0, i) for i in range(1, 7)]
        edges += [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]
        g = make_digraph(7, edges, directed=False)
        brute = 0
        for perm in itertools.permutations(range(7)):
            if all(
                g.has_edge(u, v) == g.has_edge(perm[u], perm[v])
                for u in range(7)
                for v in range(u, 7)
            ):
                brute += 1
        assert brute == 72  # 3! * 3! * 2
        assert len(automorphisms(g)) == brute


class TestCanonicalForm:
    def test_relabel_invariance(self):
        rng = random.Random(5)
        for _ in range(30):
            n = rng.randint(1, 7)
            g = random_digraph(rng, n)
            perm = list(range(n))
            rng.shuffle(perm)
            assert canonical_form(g) == canonical_form(g.relabel(perm))

    def test_loop_vs_no_loop(self):
        a = make_digraph(1, [(0, 0)])
        b = make_digraph(1, [])
        assert canonical_form(a) != canonical_form(b)

    def test_matches_brute_force_exhaustive_n3(self):
        graphs = []
        for code in range(2**9):
            rows = tuple((code >> (3 * u)) & 0b111 for u in range(3))
            graphs.append(Digraph(3, True, rows))
        rng = random.Random(9)
        sample = rng.sample(graphs, 30)
        for g in sample:
            for h in rng.sample(graphs, 5):
                same = canonical_form(g) == canonical_form(h)
                iso = find_isomorphism(g, h, "brute_force") is not None
                assert same == iso

    def test_matches_brute_force_n_up_to_6(self):
        rng = random.Random(11)
        for _ in range(40):
            n = rng.randint(2, 6)
            g = random_digraph(rng, n)
            if rng.random() < 0.5:
                perm = list(range(n))
                rng.shuffle(perm)
                h = g.relabel(perm)
            else:
                h = random_digraph(rng, n)
            same = canonical_form(g) == canonical_form(h)
            iso = find_isomorphism(g, h, "brute_force") is not None
            assert same == iso


class TestJson:
    def test_round_trip_directed(self):
        g = t2()
        assert graph_from_json(graph_to_json(g)) == g

    def test_round_trip_undirected(self):
        g = make_digraph(4, [(0, 1), (1, 2), (2, 2)], directed=False)
        doc = graph_to_json(g)
        # undirected files list each edge once
        assert sorted(doc["edges"]) == [[0, 1], [1, 2], [2, 2]]
        assert graph_from_json(doc) == g

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            graph_from_json({"format": "other", "n": 1, "directed": True, "edges": []})

    def test_text_round_trip(self):
        g = t2()
        assert load_graph(dump_graph(g)) == g


class TestVertexMap:
    def test_injectivity_enforced(self):
        with pytest.raises(ValueError):
            VertexMap(((0, 1), (1, 1)))

    def test_total(self):
        m = VertexMap(((0, 1), (1, 0)))
        assert m.is_total(2) and m.to_perm(2) == (1, 0)


def test_bits_iterates_ascending():
    assert list(bits(0b101001)) == [0, 3, 5]
