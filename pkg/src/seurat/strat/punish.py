"""Punishment subroutines: finite forcing scripts the first player runs after
the second player breaks a necessary response condition.

Scripts are generators that yield moves and receive (answer, committed
position) pairs; they are replayed from their start on every call, which
keeps strategies pure functions of the history.  A script only schedules
moves; actual triggers are detected by the caller on committed positions, so
a script returning silently means "the trigger fires on its own from here".

Colour discipline: scripts freely overwrite colours in use (reuse erases),
mirroring the proofs; termination rests on two shrinking measures, the peeled
set size and the divergence index of the punished tally-sequence.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Generator, Optional, Sequence

from ..engine import GameConfig, Move, PendingPosition, Position, other_side
from ..graphs import bits
from ..refine import TallySequence, all_tally_sequences
from .filters import Violation


@dataclass(frozen=True)
class Round:
    move: Move
    answer: int
    position: Position


class ScriptExhausted(RuntimeError):
    """A punishment script ran out of moves without the promised trigger."""


Script = Generator[Move, tuple[int, Position], None]


def _drive(gen: Script, rounds: Sequence[Round]) -> Move:
    try:
        mv = next(gen)
        for r in rounds:
            mv = gen.send((r.answer, r.position))
        return mv
    except StopIteration:
        raise ScriptExhausted("script ended before a trigger appeared")


class GeneratorPlayer:
    """First-player strategy backed by a freshly replayed script."""

    def __init__(self, factory, offset: int, rule: str, bound: int):
        self.factory = factory
        self.offset = offset
        self.rule = rule
        self.bound = bound

    def move(self, cfg: GameConfig, history: Sequence[Round], pos: Position) -> Move:
        return _drive(self.factory(), list(history)[self.offset :])


def _alt_colour(colour: int, colours: int) -> int:
    return next(c for c in range(colours) if c != colour)


def _seqs(cfg: GameConfig) -> dict:
    return {"G": all_tally_sequences(cfg.g), "H": all_tally_sequences(cfg.h)}


def _divergence(seq: TallySequence, ref: TallySequence) -> int:
    i = 0
    horizon = max(len(seq.significant), len(ref.significant))
    while i < horizon:
        if seq.entry(i) != ref.entry(i):
            return i
        i += 1
    raise ValueError("sequences do not diverge")


def s1_peel(cfg: GameConfig, big_side: str, big_mask: int, c_last: int, c_other: int) -> Script:
    """Shrink the oversized set one vertex per round, alternating colours;
    the opposing chain starves first and the palette comparison fires."""
    cur = big_mask
    use = c_other
    while cur:
        nxt = cur & (cur - 1)
        _ans, _pos = yield Move("colour", big_side, colour=use, vertices=nxt)
        cur = nxt
        use = c_last if use == c_other else c_other


def prefix_punish(
    cfg: GameConfig,
    side_bad: str,
    u_bad: int,
    d: int,
    c_mark: int,
    c_work: int,
) -> Script:
    """Mark a vertex whose tally-sequence diverges at entry d from the class
    its colour-mates match; the forced partner exposes a relative-tally
    mismatch one level down.

    Pre: u_bad lies in the c_work set of its side, and the opposite side's
    c_work set members all agree with the reference sequence through entry d.
    """
    ans, _pos = yield Move("colour", side_bad, colour=c_mark, vertices=1 << u_bad)
    side_w = other_side(side_bad)
    if ans.bit_count() != 1:
        if ans:
            yield from s1_peel(cfg, side_w, ans, c_mark, c_work)
        return  # empty answer: the marked palette is unmatched, C1 fires
    w = next(bits(ans))
    yield from prefix_core(cfg, side_w, w, side_bad, u_bad, d, c_mark, c_work)


def prefix_core(
    cfg: GameConfig,
    side_w: str,
    w: int,
    side_u: str,
    u: int,
    d: int,
    c_mark: int,
    c_work: int,
) -> Script:
    """Exploit a tally-sequence divergence at entry d between two marked
    vertices: either the prefix classes have different sizes (force an
    impossible class move) or relative degrees differ (force the classic
    non-neighbour move whose pigeonhole closes the trap)."""
    seqs = _seqs(cfg)
    ref = seqs[side_w][w]
    pref = ref.prefix(d)

    def class_mask(side: str) -> int:
        return sum(
            1 << x
            for x, s in enumerate(seqs[side])
            if s.prefix(d) == pref
        )

    g1 = class_mask(side_w)
    h1 = class_mask(side_u)

    def bad_member(ans_side: str, ans: int) -> Optional[int]:
        for x in bits(ans):
            if seqs[ans_side][x].prefix(d) != pref:
                return x
        return None

    if g1.bit_count() != h1.bit_count():
        rich_side, rich = (side_w, g1) if g1.bit_count() > h1.bit_count() else (side_u, h1)
        ans, _pos = yield Move("colour", rich_side, colour=c_work, vertices=rich)
        ans_side = other_side(rich_side)
        if ans.bit_count() != rich.bit_count():
            big_side, big = (
                (rich_side, rich)
                if rich.bit_count() > ans.bit_count()
                else (ans_side, ans)
            )
            yield from s1_peel(cfg, big_side, big, c_work, c_mark)
            return
        bad = bad_member(ans_side, ans)
        if bad is None:
            return  # supply was short, so some member must have diverged
        d2 = _divergence(seqs[ans_side][bad], ref)
        yield from prefix_punish(cfg, ans_side, bad, d2, c_mark, c_work)
        return

    a_t = seqs[side_w][w].entry(d)
    b_t = seqs[side_u][u].entry(d)
    if a_t.in_deg != b_t.in_deg:
        component = "in"
        small_side, marked = (side_w, w) if a_t.in_deg < b_t.in_deg else (side_u, u)
    else:
        component = "out"
        small_side, marked = (side_w, w) if a_t.out_deg < b_t.out_deg else (side_u, u)
    graph = cfg.graph(small_side)
    cls = g1 if small_side == side_w else h1
    block = graph.cols[marked] if component == "in" else graph.rows[marked]
    d_mask = cls & ~block
    ans, _pos = yield Move("colour", small_side, colour=c_work, vertices=d_mask)
    ans_side = other_side(small_side)
    if ans.bit_count() != d_mask.bit_count():
        big_side, big = (
            (small_side, d_mask)
            if d_mask.bit_count() > ans.bit_count()
            else (ans_side, ans)
        )
        yield from s1_peel(cfg, big_side, big, c_work, c_mark)
        return
    bad = bad_member(ans_side, ans)
    if bad is not None:
        d2 = _divergence(seqs[ans_side][bad], ref)
        yield from prefix_punish(cfg, ans_side, bad, d2, c_mark, c_work)
    # compliant reply: too few non-neighbours exist, an edge into the marked
    # vertex is unavoidable and the palette-pair comparison fires


def spectrum_punish(
    cfg: GameConfig, side_a: str, S: int, T: int, c: int, c2: int
) -> Script:
    """Tally-spectrum mismatch between same-coloured sets: colour the
    over-represented sequence class and chase the forced defect."""
    seqs = _seqs(cfg)
    side_b = other_side(side_a)
    counts_a = Counter(seqs[side_a][x] for x in bits(S))
    counts_b = Counter(seqs[side_b][x] for x in bits(T))
    witness = None
    for s in counts_a.keys() | counts_b.keys():
        if counts_a[s] != counts_b[s]:
            witness = s
            break
    if witness is None:
        return
    if counts_a[witness] > counts_b[witness]:
        rich_side, rich_set = side_a, S
    else:
        rich_side, rich_set = side_b, T
    m_mask = sum(
        1 << x for x in bits(rich_set) if seqs[rich_side][x] == witness
    )
    ans, _pos = yield Move("colour", rich_side, colour=c2, vertices=m_mask)
    ans_side = other_side(rich_side)
    if ans.bit_count() != m_mask.bit_count():
        big_side, big = (
            (rich_side, m_mask)
            if m_mask.bit_count() > ans.bit_count()
            else (ans_side, ans)
        )
        yield from s1_peel(cfg, big_side, big, c2, c)
        return
    bad = None
    for x in bits(ans):
        if seqs[ans_side][x] != witness:
            bad = x
            break
    if bad is None:
        return  # she stayed inside a class that is too small; C1 fired earlier
    d = _divergence(seqs[ans_side][bad], witness)
    yield from prefix_punish(cfg, ans_side, bad, d, c, c2)


def eta_chain_punish(
    cfg: GameConfig,
    side_a: str,
    S: int,
    T: int,
    dirs: Sequence[str],
    c: int,
    c2: int,
) -> Script:
    """Walk the closure chain; the opponent must mirror it exactly, so a size
    defect becomes a peel and a spectrum defect becomes a spectrum chase."""
    from ..graphs import eta_step

    g_a = cfg.graph(side_a)
    g_b = cfg.graph(other_side(side_a))
    cur_s, cur_t = S, T
    use = c2
    last_ans = T
    for step in dirs:
        cur_s = eta_step(g_a, cur_s, step)
        cur_t = eta_step(g_b, cur_t, step)
        ans, _pos = yield Move("colour", side_a, colour=use, vertices=cur_s)
        if ans.bit_count() != cur_s.bit_count():
            big_side, big = (
                (side_a, cur_s)
                if cur_s.bit_count() > ans.bit_count()
                else (other_side(side_a), ans)
            )
            yield from s1_peel(cfg, big_side, big, use, c if use == c2 else c2)
            return
        last_ans = ans
        use = c if use == c2 else c2
    # sizes matched all along: the defect is in the final spectra
    final_colour = c2 if use == c else c
    yield from spectrum_punish(cfg, side_a, cur_s, last_ans, final_colour, use)


def punishment_player(
    cfg: GameConfig,
    round_index: int,
    pending: PendingPosition,
    answer: int,
    violation: Violation,
) -> GeneratorPlayer:
    """Script for one detected violation, replayable from round_index + 1."""
    mv = pending.move
    side_a = mv.side
    side_b = other_side(side_a)
    S = mv.vertices or 0
    T = answer
    c = mv.colour or 0
    c2 = _alt_colour(c, cfg.colours)
    bound = cfg.g.n + cfg.h.n + 8
    rule = violation.rule

    if rule == "S1":
        if S.bit_count() > T.bit_count():
            big_side, big = side_a, S
        else:
            big_side, big = side_b, T

        def factory():
            return s1_peel(cfg, big_side, big, c, c2)

    elif rule in ("S2", "S3", "S4", "TallySpectrum"):

        def factory():
            return spectrum_punish(cfg, side_a, S, T, c, c2)

    elif rule in ("S5", "S6", "EtaSpectrum"):
        dirs = tuple(violation.witness.get("dirs", violation.witness.get("direction", "O")))

        def factory():
            return eta_chain_punish(cfg, side_a, S, T, dirs, c, c2)

    elif rule == "Relativized3":
        colour2 = violation.witness["colour"]
        rel_to = violation.witness["relative_to"]
        X = pending.base.planes(side_a)[colour2]
        Y = pending.base.planes(side_b)[colour2]

        def factory():
            return _relativized_script(cfg, side_a, S, T, X, Y, c, colour2, rel_to)

    else:
        raise ValueError(f"no punishment script for rule {rule!r}")

    return GeneratorPlayer(factory, round_index + 1, rule, bound)


def _relativized_script(cfg, side_a, S, T, X, Y, c, c2, relative_to) -> Script:
    from ..graphs import tally as _tally

    side_b = other_side(side_a)
    g_a, g_b = cfg.graph(side_a), cfg.graph(side_b)
    c3 = next(i for i in range(cfg.colours) if i not in (c, c2))
    if relative_to == "standing":
        members_a, rel_a, members_b, rel_b = S, X, T, Y
    else:
        members_a, rel_a, members_b, rel_b = X, S, Y, T
    ca = Counter(_tally(g_a, x, rel_a) for x in bits(members_a))
    cb = Counter(_tally(g_b, x, rel_b) for x in bits(members_b))
    choice = None
    for t in ca.keys() | cb.keys():
        if ca[t] != cb[t]:
            if ca[t] > cb[t]:
                choice = (
                    side_a,
                    sum(1 << x for x in bits(members_a) if _tally(g_a, x, rel_a) == t),
                )
            else:
                choice = (
                    side_b,
                    sum(1 << x for x in bits(members_b) if _tally(g_b, x, rel_b) == t),
                )
            break
    if choice is None:
        return
    rich_side, mask = choice
    ans, _pos = yield Move("colour", rich_side, colour=c3, vertices=mask)
    if ans.bit_count() != mask.bit_count():
        big_side, big = (
            (rich_side, mask)
            if mask.bit_count() > ans.bit_count()
            else (other_side(rich_side), ans)
        )
        yield from s1_peel(cfg, big_side, big, c3, c)
    # matched sizes force the counted edge mismatch; the trigger fires
