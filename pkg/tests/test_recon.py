"""Decks, degree-associated decks, enumeration, and the search driver."""
from __future__ import annotations

import random
from itertools import permutations

import pytest

from seurat.generators import named_example, stockmeyer_pair
from seurat.graphs import Tally, canonical_form, make_digraph
from seurat.recon import DaDeck, Deck, da_deck, deck, enumerate_digraphs, search


class TestDeck:
    def test_single_arc(self):
        g = make_digraph(2, [(0, 1)])
        d = deck(g)
        assert d.total == 2
        point = canonical_form(make_digraph(1, []))
        assert d.cards == ((point, 2),)
        da = da_deck(g)
        assert {t for (t, _f), _m in da.cards} == {Tally(0, 1), Tally(1, 0)}

    def test_guard(self):
        with pytest.raises(ValueError):
            deck(make_digraph(1, []))

    def test_isomorphism_invariance(self):
        rng = random.Random(1)
        for _ in range(10):
            n = rng.randint(2, 5)
            g = make_digraph(
                n, [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.4]
            )
            perm = list(range(n))
            rng.shuffle(perm)
            assert deck(g) == deck(g.relabel(perm))
            assert da_deck(g) == da_deck(g.relabel(perm))

    def test_da_projects_to_deck(self):
        rng = random.Random(2)
        for _ in range(10):
            n = rng.randint(2, 5)
            g = make_digraph(
                n, [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.4]
            )
            assert da_deck(g).project() == deck(g)

    def test_stockmeyer_decks_equal_da_differ(self):
        for fam in "ABCDEF":
            for m, n in ((1, 0), (2, 0)):
                z, zs = stockmeyer_pair(fam, m, n)
                assert deck(z) == deck(zs), (fam, m, n)
                assert da_deck(z) != da_deck(zs), (fam, m, n)

    def test_ramachandran_decks_equal(self):
        g, h = named_example("ramachandran").graphs
        assert deck(g) == deck(h)
        assert da_deck(g) != da_deck(h)


class TestEnumerate:
    def test_n1_loops(self):
        assert len(list(enumerate_digraphs(1, loops=True))) == 2

    def test_n2_no_loops(self):
        assert len(list(enumerate_digraphs(2, loops=False))) == 3

    def test_n2_loops_matches_brute_force(self):
        # oracle: orbit count of the swap action on all 16 labelled digraphs
        reps = set()
        for code in range(16):
            rows = (code & 0b11, code >> 2)
            g = make_digraph(2, [], True)
            g = type(g)(2, True, rows)
            best = None
            for perm in permutations(range(2)):
                enc = tuple(g.relabel(list(perm)).rows)
                best = enc if best is None or enc < best else best
            reps.add(best)
        assert len(reps) == 10
        assert len(list(enumerate_digraphs(2, loops=True))) == 10

    def test_guard(self):
        with pytest.raises(ValueError):
            list(enumerate_digraphs(5))


class TestSearch:
    def test_max_n2_k2_all_forall(self):
        report = search(max_n=2, colours=2)
        classes_1 = 2
        classes_2 = 10
        want_pairs = classes_1 * (classes_1 - 1) // 2 + classes_2 * (classes_2 - 1) // 2
        assert report.pairs_examined == want_pairs
        assert report.verdicts.get("forall", 0) == want_pairs
        assert report.exists_wins == []
        assert "no second-player wins" in report.summary()

    def test_k1_two_vertex_pairs_all_forall(self):
        # non-isomorphic pairs on at most two vertices fall to one colour
        report = search(max_n=2, colours=1)
        assert report.verdicts == {"forall": report.pairs_examined}

    def test_k1_has_exists_wins_at_n3(self):
        report = search(max_n=3, colours=1)
        assert report.verdicts.get("exists", 0) > 0
        assert len(report.exists_wins) == report.verdicts["exists"]
        for item in report.exists_wins:
            assert item["recheck"]["winner"] == "exists"

    def test_undirected_mode(self):
        report = search(max_n=3, colours=2, directed=False, loops=False)
        assert report.pairs_examined > 0
        assert report.verdicts.get("exists", 0) == 0

    def test_json_round_trip_fields(self):
        report = search(max_n=2, colours=2)
        doc = report.to_json()
        assert doc["scope"]["max_n"] == 2 and "verdicts" in doc
