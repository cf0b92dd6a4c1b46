"""Response filters, punishment scripts, heuristics, scripted strategies."""
from __future__ import annotations

import itertools
import random

import pytest

from seurat.engine import (
    PLAIN,
    SIDE_G,
    SIDE_H,
    GameConfig,
    Move,
    PendingPosition,
    Position,
    apply_existential,
    apply_universal,
    initial_position,
    losing_conditions,
)
from seurat.generators import named_example, stockmeyer_pair
from seurat.graphs import make_digraph, mask_of
from seurat.refine import all_tally_sequences
from seurat.solve import SolveLimits, solve
from seurat.strat import (
    AnswerPlanner,
    ResponseFilter,
    build_tally_map,
    constraint_filter,
    eloise_heuristic,
    scripted,
    verify,
)
from seurat.strat.punish import Round, punishment_player
from seurat.strat.scripts import InapplicableError


def rama_cfg() -> GameConfig:
    g, h = named_example("ramachandran").graphs
    return GameConfig(g, h, 2, PLAIN)


class TestFilters:
    def test_singleton_forces_matching_tally(self):
        cfg = rama_cfg()
        pend = apply_universal(
            initial_position(cfg), Move("colour", SIDE_G, colour=0, vertices=mask_of([0])), cfg
        )
        filt = ResponseFilter(frozenset({"S1", "S2"}))
        admissible, violating = constraint_filter(pend, filt, cfg)
        # v0 has tally (1,4); only w0 matches
        assert admissible == [mask_of([0])]
        assert len(violating) == 63

    def test_prefix_matching_sets(self):
        # a set whose members share a full sequence forces sequence-matched
        # answers of the same size
        cfg = rama_cfg()
        seqs_g = all_tally_sequences(cfg.g)
        seqs_h = all_tally_sequences(cfg.h)
        s = seqs_g[3]
        members = mask_of(v for v in range(6) if seqs_g[v] == s)
        pend = apply_universal(
            initial_position(cfg), Move("colour", SIDE_G, colour=0, vertices=members), cfg
        )
        planner = AnswerPlanner(cfg, ResponseFilter(frozenset({"S1", "TallySpectrum"})))
        admissible = planner.admissible(pend)
        want = mask_of(v for v in range(6) if seqs_h[v] == s)
        assert admissible == [want]

    def test_relativized_three_colours(self):
        g, h = stockmeyer_pair("A", 2, 0)
        cfg = GameConfig(g, h, 3, PLAIN)
        pos = initial_position(cfg)
        pos = apply_existential(
            apply_universal(pos, Move("colour", SIDE_G, colour=2, vertices=mask_of([0, 1])), cfg),
            mask_of([0, 1]),
            cfg,
        )
        pend = apply_universal(pos, Move("colour", SIDE_G, colour=0, vertices=mask_of([2])), cfg)
        planner = AnswerPlanner(cfg, ResponseFilter(frozenset({"Relativized3"})))
        ok = [a for a in range(32) if not planner.violations(pend, a)]
        for a in ok:
            from seurat.graphs import tally

            rel = mask_of([0, 1])
            want = tally(cfg.g, 2, rel)
            assert all(tally(cfg.h, w, rel) == want for w in range(5) if a >> w & 1)

    def test_mirror_passes_all_rules(self):
        g = named_example("fig6").graphs[0]
        cfg = GameConfig(g, g, 2, PLAIN)
        mirror = eloise_heuristic("mirror", cfg)
        planner = AnswerPlanner(
            cfg,
            ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "S5", "S6", "TallySpectrum", "EtaSpectrum"})),
        )
        rng = random.Random(1)
        pos = initial_position(cfg)
        for _ in range(25):
            mv = Move("colour", rng.choice([SIDE_G, SIDE_H]), colour=rng.randrange(2), vertices=rng.randrange(64))
            pend = apply_universal(pos, mv, cfg)
            ans = mirror.answer(cfg, pend, ())
            assert planner.violations(pend, ans) == []
            pos = apply_existential(pend, ans, cfg)

    def test_partition_is_exhaustive(self):
        cfg = rama_cfg()
        pend = apply_universal(
            initial_position(cfg), Move("colour", SIDE_G, colour=0, vertices=mask_of([1, 2])), cfg
        )
        filt = ResponseFilter(frozenset({"S1", "S4"}))
        admissible, violating = constraint_filter(pend, filt, cfg)
        assert len(admissible) + len(violating) == 64
        planner = AnswerPlanner(cfg, filt)
        assert sorted(planner.admissible(pend)) == sorted(admissible)

    def test_rules_need_enough_colours(self):
        g = make_digraph(2, [])
        with pytest.raises(ValueError):
            AnswerPlanner(GameConfig(g, g, 1), ResponseFilter(frozenset({"S1"})))
        with pytest.raises(ValueError):
            AnswerPlanner(GameConfig(g, g, 2), ResponseFilter(frozenset({"Relativized3"})))


def _all_positions_k2_n2(g, h):
    for pg0 in range(4):
        for pg1 in range(4):
            for ph0 in range(4):
                for ph1 in range(4):
                    yield Position((pg0, pg1), (ph0, ph1))


class TestFilterSoundness:
    """Violating answers from safe positions land in the won region."""

    def test_exhaustive_n2_cheap_rules(self):
        from seurat.recon import enumerate_digraphs

        classes = list(enumerate_digraphs(2, loops=True))
        rng = random.Random(3)
        pairs = [(a, b) for a in classes for b in classes if a is not b]
        filt = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))
        for g, h in rng.sample(pairs, 8):
            cfg = GameConfig(g, h, 2, PLAIN)
            ctx = solve(cfg)._ctx
            planner = AnswerPlanner(cfg, filt)
            for pos in _all_positions_k2_n2(g, h):
                if ctx.winning(pos):
                    continue
                for side in (SIDE_G, SIDE_H):
                    for colour in range(2):
                        for mask in range(4):
                            mv = Move("colour", side, colour=colour, vertices=mask)
                            pend = apply_universal(pos, mv, cfg)
                            for ans in range(4):
                                if planner.first_violation(pend, ans) is not None:
                                    nxt = apply_existential(pend, ans, cfg)
                                    assert ctx.winning(nxt), (g.rows, h.rows, pos, mv, ans)

    def test_sampled_n3_eta_rules(self):
        from seurat.recon import enumerate_digraphs

        rng = random.Random(7)
        classes = list(enumerate_digraphs(3, loops=True))
        filt = ResponseFilter(frozenset({"S1", "S5", "S6", "EtaSpectrum"}))
        for _ in range(6):
            g, h = rng.sample(classes, 2)
            cfg = GameConfig(g, h, 2, PLAIN)
            ctx = solve(cfg)._ctx
            planner = AnswerPlanner(cfg, filt)
            checked = 0
            for _ in range(1500):
                if checked >= 300:
                    break
                pos = Position(
                    (rng.randrange(8), rng.randrange(8)),
                    (rng.randrange(8), rng.randrange(8)),
                )
                if ctx.winning(pos):
                    continue
                mv = Move(
                    "colour",
                    rng.choice([SIDE_G, SIDE_H]),
                    colour=rng.randrange(2),
                    vertices=rng.randrange(8),
                )
                pend = apply_universal(pos, mv, cfg)
                ans = rng.randrange(8)
                checked += 1
                if planner.first_violation(pend, ans) is not None:
                    nxt = apply_existential(pend, ans, cfg)
                    assert ctx.winning(nxt)

    def test_sampled_k3_relativized(self):
        from seurat.recon import enumerate_digraphs

        rng = random.Random(11)
        classes = list(enumerate_digraphs(3, loops=True))
        filt = ResponseFilter(frozenset({"Relativized3"}))
        for _ in range(4):
            g, h = rng.sample(classes, 2)
            cfg = GameConfig(g, h, 3, PLAIN)
            ctx = solve(cfg)._ctx
            planner = AnswerPlanner(cfg, filt)
            checked = 0
            for _ in range(1000):
                if checked >= 200:
                    break
                pos = Position(
                    tuple(rng.randrange(8) for _ in range(3)),
                    tuple(rng.randrange(8) for _ in range(3)),
                )
                if ctx.winning(pos):
                    continue
                mv = Move(
                    "colour",
                    rng.choice([SIDE_G, SIDE_H]),
                    colour=rng.randrange(3),
                    vertices=rng.randrange(8),
                )
                pend = apply_universal(pos, mv, cfg)
                ans = rng.randrange(8)
                checked += 1
                if planner.first_violation(pend, ans) is not None:
                    nxt = apply_existential(pend, ans, cfg)
                    assert ctx.winning(nxt)


class _PunishWrapper:
    """First-player strategy that just runs one punishment script."""

    def __init__(self, cfg, player):
        self.cfg = cfg
        self.player = player

    def move(self, cfg, history, pos):
        return self.player.move(cfg, history, pos)


class TestPunishmentReplay:
    """Punishment scripts beat an exhaustive second player, including from
    dirty mid-game positions with colours already in use."""

    def _replay(self, cfg, pos, mv, ans, planner, depth=9):
        pend = apply_universal(pos, mv, cfg)
        viols = planner.violations(pend, ans)
        if not viols:
            return None
        nxt = apply_existential(pend, ans, cfg)
        if losing_conditions(nxt, cfg):
            return True  # already dead, nothing to replay
        player = punishment_player(cfg, 0, pend, ans, viols[0])
        wrapper = _PunishWrapper(cfg, player)
        res = verify(
            wrapper,
            cfg,
            adversary="exhaustive",
            depth=depth,
            start=nxt,
            prefix=(Round(mv, ans, nxt),),
        )
        return res.kind == "certificate"

    def test_clean_openings_n3(self):
        from seurat.recon import enumerate_digraphs

        rng = random.Random(13)
        classes = list(enumerate_digraphs(3, loops=True))
        planner_rules = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))
        replays = 0
        for _ in range(400):
            if replays >= 40:
                break
            g, h = rng.sample(classes, 2)
            cfg = GameConfig(g, h, 2, PLAIN)
            planner = AnswerPlanner(cfg, planner_rules)
            pos = initial_position(cfg)
            mv = Move("colour", SIDE_G, colour=0, vertices=rng.randrange(1, 8))
            ans = rng.randrange(8)
            out = self._replay(cfg, pos, mv, ans, planner)
            if out is None:
                continue
            assert out, (g.rows, h.rows, mv, ans)
            replays += 1

    def test_dirty_midgame_positions(self):
        from seurat.recon import enumerate_digraphs

        rng = random.Random(17)
        classes = list(enumerate_digraphs(3, loops=True))
        planner_rules = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))
        replays = 0
        for _ in range(400):
            if replays >= 40:
                break
            g, h = rng.sample(classes, 2)
            cfg = GameConfig(g, h, 2, PLAIN)
            ctx = solve(cfg)._ctx
            planner = AnswerPlanner(cfg, planner_rules)
            pos = Position(
                (rng.randrange(8), rng.randrange(8)),
                (rng.randrange(8), rng.randrange(8)),
            )
            if losing_conditions(pos, cfg):
                continue
            mv = Move(
                "colour",
                rng.choice([SIDE_G, SIDE_H]),
                colour=rng.randrange(2),
                vertices=rng.randrange(8),
            )
            ans = rng.randrange(8)
            out = self._replay(cfg, pos, mv, ans, planner)
            if out is None:
                continue
            assert out, (g.rows, h.rows, pos, mv, ans)
            replays += 1

    def test_eta_chain_punishment(self):
        # a closure-chain violation on the two-chains pair
        g, h = named_example("fig1").graphs
        cfg = GameConfig(g, h, 2, PLAIN)
        planner = AnswerPlanner(cfg, ResponseFilter(frozenset({"S1", "S6"})))
        pos = initial_position(cfg)
        mv = Move("colour", SIDE_G, colour=0, vertices=mask_of([0]))
        # the chain closure stalls at size 2 on the cycle but reaches 3 in G
        ans = mask_of([6])
        out = self._replay(cfg, pos, mv, ans, planner)
        assert out is True


class TestHeuristics:
    def test_mirror_survives(self):
        g = named_example("fig1").graphs[0]
        cfg = GameConfig(g, g, 2, PLAIN)
        mirror = eloise_heuristic("mirror", cfg)
        rng = random.Random(19)
        pos = initial_position(cfg)
        for _ in range(50):
            mv = Move("colour", rng.choice([SIDE_G, SIDE_H]), colour=rng.randrange(2), vertices=rng.randrange(64))
            pend = apply_universal(pos, mv, cfg)
            pos = apply_existential(pend, mirror.answer(cfg, pend, ()), cfg)
            assert losing_conditions(pos, cfg) == []

    def test_mirror_requires_isomorphism(self):
        g, h = named_example("fig1").graphs
        with pytest.raises(ValueError):
            eloise_heuristic("mirror", GameConfig(g, h, 1, PLAIN))

    def test_greedy_survives_fig1_plain(self):
        g, h = named_example("fig1").graphs
        cfg = GameConfig(g, h, 1, PLAIN)
        greedy = eloise_heuristic("greedy_spectrum", cfg)
        rng = random.Random(23)
        pos = initial_position(cfg)
        history = ()
        for _ in range(50):
            side = rng.choice([SIDE_G, SIDE_H])
            graph = cfg.graph(side)
            mv = Move("colour", side, colour=0, vertices=rng.randrange(1 << graph.n))
            pend = apply_universal(pos, mv, cfg)
            ans = greedy.answer(cfg, pend, history)
            pos = apply_existential(pend, ans, cfg)
            assert losing_conditions(pos, cfg) == [], mv
            history += ((mv, ans),)

    def test_random_constrained_reproducible(self):
        cfg = rama_cfg()
        a = eloise_heuristic("random_constrained", cfg, seed=7)
        b = eloise_heuristic("random_constrained", cfg, seed=7)
        pend = apply_universal(
            initial_position(cfg), Move("colour", SIDE_G, colour=0, vertices=mask_of([1, 2])), cfg
        )
        assert a.answer(cfg, pend, ()) == b.answer(cfg, pend, ())


class TestTallyMap:
    def test_total_on_a21(self):
        g, h = stockmeyer_pair("A", 2, 1)
        m = build_tally_map(g, h)
        assert m.status == "total_bijection"
        seq_g, seq_h = all_tally_sequences(g), all_tally_sequences(h)
        for v, w in m.pairs:
            assert seq_g[v] == seq_h[w]

    def test_ambiguous_on_regular(self):
        c3 = make_digraph(3, [(0, 1), (1, 2), (2, 0)])
        assert build_tally_map(c3, c3).status == "ambiguous_at"


class TestScripts:
    def test_one_colour_cases(self):
        cases = [
            ("sizes", make_digraph(1, []), make_digraph(2, [])),
            (
                "strong_connectivity",
                make_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
                make_digraph(4, [(0, 1), (1, 2), (2, 3)]),
            ),
            (
                "weak_connectivity",
                make_digraph(2, [(0, 1)]),
                make_digraph(2, []),
            ),
            ("irreflexive", make_digraph(1, [(0, 0)]), make_digraph(1, [])),
            ("two_vertex", make_digraph(2, []), make_digraph(2, [(0, 1)])),
        ]
        for case, g, h in cases:
            strat = scripted("one_colour", g=g, h=h, case=case)
            res = verify(strat, adversary="exhaustive", depth=2)
            assert res.kind == "certificate", (case, res.reason)
            assert solve(strat.cfg).winner == "forall", case

    def test_one_colour_strong_case_depth1(self):
        g = make_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
        h = make_digraph(4, [(0, 1), (1, 2), (2, 3)])
        strat = scripted("one_colour", g=g, h=h, case="strong_connectivity")
        res = verify(strat, adversary="exhaustive", depth=1)
        assert res.kind == "certificate" and res.certificate.depth == 1

    def test_log_palette(self):
        g = make_digraph(4, [(0, 1), (1, 2)])
        h = make_digraph(4, [(0, 1), (2, 1)])
        strat = scripted("log_palette", g=g, h=h)
        res = verify(strat, adversary="exhaustive", depth=3)
        assert res.kind == "certificate"

    def test_tally_pair_branch_a21(self):
        strat = scripted("tally", family="A", m=2, n=1)
        assert strat.branch == "pair"
        assert len(strat.line) == 2
        filt = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))
        res = verify(strat, adversary="filtered_exhaustive", filt=filt, depth=4)
        assert res.kind == "certificate" and res.certificate.depth <= 2

    def test_tally_spectrum_branch_d21(self):
        strat = scripted("tally", family="D", m=2, n=1)
        assert strat.branch == "spectrum"
        filt = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))
        res = verify(strat, adversary="filtered_exhaustive", filt=filt, depth=4)
        assert res.kind == "certificate"

    def test_tally_punishments_win_small_family(self):
        # exhaustively check the scripted strategy incl punishments at (1,0)
        strat = scripted("tally", family="C", m=1, n=0)
        res = verify(strat, adversary="exhaustive", depth=10)
        assert res.kind == "certificate"

    def test_stars_certificate(self):
        strat = scripted("stars")
        res = verify(
            strat,
            adversary="filtered_exhaustive",
            filt=ResponseFilter(frozenset({"S1", "S4"})),
            depth=3,
        )
        assert res.kind == "certificate" and res.certificate.depth <= 3

    def test_ramachandran_exhaustive(self):
        strat = scripted("ramachandran")
        res = verify(strat, adversary="exhaustive", depth=8)
        assert res.kind == "certificate"
        assert [m.to_json()["vertices"] for m in strat.line] == [[5], [4]]

    def test_certificate_replay_deterministic(self):
        strat = scripted("stars")
        filt = ResponseFilter(frozenset({"S1", "S4"}))
        a = verify(strat, adversary="filtered_exhaustive", filt=filt, depth=3)
        b = verify(strat, adversary="filtered_exhaustive", filt=filt, depth=3)
        assert a.certificate.to_json() == b.certificate.to_json()
        assert a.certificate.replay_triggers() == b.certificate.replay_triggers()

    def test_wrong_script_refuted(self):
        class Donothing:
            def __init__(self, cfg):
                self.cfg = cfg

            def move(self, cfg, history, pos):
                return Move("colour", SIDE_G, colour=0, vertices=0)

        g, h = named_example("ramachandran").graphs
        cfg = GameConfig(g, h, 2, PLAIN)
        res = verify(Donothing(cfg), adversary="heuristic_suite", depth=6, seeds=(0,))
        assert res.kind == "refuted" and res.playout is not None

    def test_heuristic_suite_not_refuted(self):
        strat = scripted("ramachandran")
        res = verify(strat, adversary="heuristic_suite", depth=6, seeds=(0, 1))
        assert res.kind == "not_refuted"

    def test_cfi_main_line_shape(self):
        strat = scripted("cfi", n=4)
        assert strat.cfg.g.n == 40
        r, b, ints = strat.line
        assert r.vertices.bit_count() == 4
        assert b.vertices.bit_count() == 12
        assert ints.vertices.bit_count() == 16 and ints.colour == r.colour

    def test_deck_stage0_applicable_on_stockmeyer(self):
        for fam in "ABCDEF":
            for m, n in ((1, 0), (2, 0), (2, 1)):
                strat = scripted("deck", family=fam, m=m, n=n)
                assert strat.stage_zero_applicable(), (fam, m, n)

    def test_deck_strategy_small_pair(self):
        strat = scripted("deck", family="A", m=1, n=0)
        res = verify(strat, adversary="exhaustive", depth=6)
        assert res.kind == "certificate"

    def test_deck_strategy_with_deck_stage(self):
        # one full deck stage plus the unique-palette finish, exhaustively
        strat = scripted("deck", family="D", m=2, n=0)
        res = verify(strat, adversary="exhaustive", depth=9)
        assert res.kind == "certificate"

    def test_deck_strategy_survives_heuristics_at_21(self):
        strat = scripted("deck", family="B", m=2, n=1)
        res = verify(strat, adversary="heuristic_suite", depth=12, seeds=(0, 1, 2))
        assert res.kind == "not_refuted"

    def test_tally_inapplicable_reports(self):
        c3 = make_digraph(3, [(0, 1), (1, 2), (2, 0)])
        c3b = make_digraph(3, [(0, 2), (2, 1), (1, 0)])
        with pytest.raises(InapplicableError):
            scripted("tally", g=c3, h=c3b)
