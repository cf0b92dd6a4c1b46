"""Game state and rules: the plain colouring game, the strong variant with
coverage conditions, and the pebble variant with monadic predicates.

A committed position is one bitmask per colour per side (plus pebble
placements in the pebble variant); vertex palettes are derived.  Win
conditions are evaluated only on committed positions, i.e. after the second
player's answer closes a round.  All values are immutable snapshots; move
application returns new values.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Optional, Sequence

from .graphs import Digraph, bits, mask_of

PLAIN = "plain"
STRONG = "strong"
MSO = "mso"

SIDE_G = "G"
SIDE_H = "H"


class RuleError(ValueError):
    """A move or answer that the rules reject outright."""


@dataclass(frozen=True)
class GameConfig:
    g: Digraph
    h: Digraph
    colours: int
    variant: str = PLAIN
    pebble_pairs: int = 0

    def __post_init__(self) -> None:
        if self.colours < 1:
            raise RuleError("at least one colour is required")
        if self.variant not in (PLAIN, STRONG, MSO):
            raise RuleError(f"unknown variant {self.variant!r}")
        if self.variant != MSO and self.pebble_pairs:
            raise RuleError("pebble pairs only exist in the mso variant")
        if self.variant == MSO and self.pebble_pairs < 0:
            raise RuleError("pebble pair count must be >= 0")

    def graph(self, side: str) -> Digraph:
        return self.g if side == SIDE_G else self.h


def other_side(side: str) -> str:
    return SIDE_H if side == SIDE_G else SIDE_G


@dataclass(frozen=True)
class Position:
    """Planes of each colour on both sides, plus optional pebble placements."""

    planes_g: tuple[int, ...]
    planes_h: tuple[int, ...]
    pebbles_g: tuple[Optional[int], ...] = ()
    pebbles_h: tuple[Optional[int], ...] = ()

    def planes(self, side: str) -> tuple[int, ...]:
        return self.planes_g if side == SIDE_G else self.planes_h

    def pebbles(self, side: str) -> tuple[Optional[int], ...]:
        return self.pebbles_g if side == SIDE_G else self.pebbles_h

    def palette(self, side: str, v: int) -> int:
        pal = 0
        for c, plane in enumerate(self.planes(side)):
            if plane >> v & 1:
                pal |= 1 << c
        return pal

    def key(self) -> tuple:
        return (self.planes_g, self.planes_h, self.pebbles_g, self.pebbles_h)


@dataclass(frozen=True)
class Move:
    """A first-player action: repaint one colour, or place one pebble."""

    kind: str  # "colour" | "pebble"
    side: str
    colour: Optional[int] = None
    vertices: Optional[int] = None  # bitmask, colour moves
    pair: Optional[int] = None
    vertex: Optional[int] = None  # pebble moves

    def sort_key(self) -> tuple:
        return (
            self.kind,
            self.side,
            -1 if self.colour is None else self.colour,
            -1 if self.vertices is None else (self.vertices.bit_count(), self.vertices),
            -1 if self.pair is None else self.pair,
            -1 if self.vertex is None else self.vertex,
        )

    def to_json(self) -> dict:
        if self.kind == "colour":
            return {
                "type": "colour",
                "colour": self.colour,
                "side": self.side,
                "vertices": sorted(bits(self.vertices or 0)),
            }
        return {
            "type": "pebble",
            "pair": self.pair,
            "side": self.side,
            "vertex": self.vertex,
        }

    @staticmethod
    def from_json(doc: dict) -> "Move":
        if doc.get("type") == "colour":
            return Move(
                "colour",
                doc["side"],
                colour=int(doc["colour"]),
                vertices=mask_of(int(v) for v in doc["vertices"]),
            )
        if doc.get("type") == "pebble":
            return Move("pebble", doc["side"], pair=int(doc["pair"]), vertex=int(doc["vertex"]))
        raise RuleError(f"unknown move type {doc.get('type')!r}")


@dataclass(frozen=True)
class PendingPosition:
    """A half-round: the first player's uncommitted move over a base position."""

    base: Position
    move: Move

    @property
    def answer_side(self) -> str:
        return other_side(self.move.side)


@dataclass(frozen=True)
class Trigger:
    kind: str  # "C1".."C4" | "PEBBLE"
    witness: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": self.witness}


def initial_position(cfg: GameConfig) -> Position:
    return Position(
        planes_g=(0,) * cfg.colours,
        planes_h=(0,) * cfg.colours,
        pebbles_g=(None,) * cfg.pebble_pairs,
        pebbles_h=(None,) * cfg.pebble_pairs,
    )


def _validate_move(pos: Position, mv: Move, cfg: GameConfig) -> None:
    if mv.side not in (SIDE_G, SIDE_H):
        raise RuleError(f"bad side {mv.side!r}")
    graph = cfg.graph(mv.side)
    if mv.kind == "colour":
        if mv.colour is None or not 0 <= mv.colour < cfg.colours:
            raise RuleError("colour out of range")
        if mv.vertices is None or mv.vertices & ~graph.full_mask:
            raise RuleError("vertex set out of range")
    elif mv.kind == "pebble":
        if cfg.variant != MSO:
            raise RuleError("pebble moves only exist in the mso variant")
        if mv.pair is None or not 0 <= mv.pair < cfg.pebble_pairs:
            raise RuleError("pebble pair out of range")
        if mv.vertex is None or not 0 <= mv.vertex < graph.n:
            raise RuleError("pebble vertex out of range")
    else:
        raise RuleError(f"unknown move kind {mv.kind!r}")


def apply_universal(pos: Position, mv: Move, cfg: GameConfig) -> PendingPosition:
    _validate_move(pos, mv, cfg)
    return PendingPosition(pos, mv)


def apply_existential(
    pending: PendingPosition, answer: int, cfg: GameConfig
) -> Position:
    """Commit the round: the answer lands on the opposite side.

    For colour moves the answer is a vertex bitmask (any subset; legality is
    not wisdom); for pebble moves it is a single vertex index.
    """
    mv = pending.move
    pos = pending.base
    a_side = pending.answer_side
    graph = cfg.graph(a_side)
    if mv.kind == "colour":
        if answer & ~graph.full_mask:
            raise RuleError("answer set out of range")
        new_mover = list(pos.planes(mv.side))
        new_mover[mv.colour] = mv.vertices  # reusing a colour erases its first use
        new_answer = list(pos.planes(a_side))
        new_answer[mv.colour] = answer
        planes = {mv.side: tuple(new_mover), a_side: tuple(new_answer)}
        return replace(
            pos, planes_g=planes[SIDE_G], planes_h=planes[SIDE_H]
        )
    if not 0 <= answer < graph.n:
        raise RuleError("pebble answer must be a single vertex on the other side")
    peb_mover = list(pos.pebbles(mv.side))
    peb_mover[mv.pair] = mv.vertex
    peb_answer = list(pos.pebbles(a_side))
    peb_answer[mv.pair] = answer
    pebbles = {mv.side: tuple(peb_mover), a_side: tuple(peb_answer)}
    return replace(
        pos, pebbles_g=pebbles[SIDE_G], pebbles_h=pebbles[SIDE_H]
    )


# ---------------------------------------------------------------------------
# Ranges and win conditions


def palette_ranges(pos: Position, side: str, cfg: GameConfig) -> dict[int, int]:
    """Mask of vertices per realized palette (the empty palette included)."""
    graph = cfg.graph(side)
    out: dict[int, int] = {}
    for v in range(graph.n):
        pal = pos.palette(side, v)
        out[pal] = out.get(pal, 0) | (1 << v)
    return out


def ranges(pos: Position, side: str, palette: int, cfg: GameConfig) -> int:
    """Vertices of the side whose palette is exactly ``palette``."""
    return palette_ranges(pos, side, cfg).get(palette, 0)


def _outreach(graph: Digraph, mask: int) -> int:
    acc = 0
    for u in bits(mask):
        acc |= graph.rows[u]
    return acc


def _inreach(graph: Digraph, mask: int) -> int:
    acc = 0
    for u in bits(mask):
        acc |= graph.cols[u]
    return acc


def losing_conditions(pos: Position, cfg: GameConfig) -> list[Trigger]:
    """All triggers the first player may claim on this committed position."""
    rg = palette_ranges(pos, SIDE_G, cfg)
    rh = palette_ranges(pos, SIDE_H, cfg)
    triggers: list[Trigger] = []

    for pal in sorted(set(rg) | set(rh)):
        in_g, in_h = pal in rg, pal in rh
        if in_g != in_h:
            side = SIDE_G if in_g else SIDE_H
            triggers.append(
                Trigger(
                    "C1",
                    {
                        "palette": sorted(bits(pal)),
                        "nonempty_side": side,
                        "vertices": sorted(bits((rg if in_g else rh)[pal])),
                    },
                )
            )

    shared = sorted(set(rg) & set(rh))
    out_g = {p: _outreach(cfg.g, rg[p]) for p in shared}
    out_h = {p: _outreach(cfg.h, rh[p]) for p in shared}
    for p1 in shared:
        for p2 in shared:
            eg = bool(out_g[p1] & rg[p2])
            eh = bool(out_h[p1] & rh[p2])
            if eg != eh:
                side = SIDE_G if eg else SIDE_H
                src = (rg if eg else rh)[p1]
                dst_reach = (out_g if eg else out_h)[p1] & (rg if eg else rh)[p2]
                v = next(bits(dst_reach))
                graph = cfg.graph(side)
                u = next(u for u in bits(src) if graph.rows[u] >> v & 1)
                triggers.append(
                    Trigger(
                        "C2",
                        {
                            "palette_from": sorted(bits(p1)),
                            "palette_to": sorted(bits(p2)),
                            "edge_side": side,
                            "edge": [u, v],
                        },
                    )
                )

    if cfg.variant == STRONG:
        in_g = {p: _inreach(cfg.g, rg[p]) for p in shared}
        in_h = {p: _inreach(cfg.h, rh[p]) for p in shared}
        for p1 in shared:
            for p2 in shared:
                cov_g = rg[p2] & ~out_g[p1] == 0
                cov_h = rh[p2] & ~out_h[p1] == 0
                if cov_g != cov_h:
                    side = SIDE_H if cov_g else SIDE_G
                    missing = (rh[p2] & ~out_h[p1]) if cov_g else (rg[p2] & ~out_g[p1])
                    triggers.append(
                        Trigger(
                            "C3",
                            {
                                "palette_source": sorted(bits(p1)),
                                "palette_target": sorted(bits(p2)),
                                "covered_side": SIDE_G if cov_g else SIDE_H,
                                "uncovered_vertex": next(bits(missing)),
                                "uncovered_side": side,
                            },
                        )
                    )
                org_g = rg[p1] & ~in_g[p2] == 0
                org_h = rh[p1] & ~in_h[p2] == 0
                if org_g != org_h:
                    side = SIDE_H if org_g else SIDE_G
                    missing = (rh[p1] & ~in_h[p2]) if org_g else (rg[p1] & ~in_g[p2])
                    triggers.append(
                        Trigger(
                            "C4",
                            {
                                "palette_source": sorted(bits(p1)),
                                "palette_target": sorted(bits(p2)),
                                "covered_side": SIDE_G if org_g else SIDE_H,
                                "unoriginated_vertex": next(bits(missing)),
                                "unoriginated_side": side,
                            },
                        )
                    )

    if cfg.variant == MSO:
        t = _pebble_trigger(pos, cfg)
        if t is not None:
            triggers.append(t)
    return triggers


def _pebble_trigger(pos: Position, cfg: GameConfig) -> Optional[Trigger]:
    """Pebble-induced partial map check: edges, loops, and palettes."""
    placed = [
        (i, pos.pebbles_g[i], pos.pebbles_h[i])
        for i in range(cfg.pebble_pairs)
        if pos.pebbles_g[i] is not None and pos.pebbles_h[i] is not None
    ]
    for i, u, v in placed:
        if pos.palette(SIDE_G, u) != pos.palette(SIDE_H, v):
            return Trigger("PEBBLE", {"pair": i, "reason": "palette", "g": u, "h": v})
    for i, u, v in placed:
        for j, u2, v2 in placed:
            if (u == u2) != (v == v2):
                return Trigger(
                    "PEBBLE", {"pairs": [i, j], "reason": "not_injective"}
                )
            if cfg.g.has_edge(u, u2) != cfg.h.has_edge(v, v2):
                return Trigger(
                    "PEBBLE",
                    {"pairs": [i, j], "reason": "edge", "g": [u, u2], "h": [v, v2]},
                )
    return None


# ---------------------------------------------------------------------------
# Move and answer enumeration


def enumerate_universal(
    pos: Position,
    cfg: GameConfig,
    policy: str = "all",
    groups: Optional[tuple[Sequence[tuple[int, ...]], Sequence[tuple[int, ...]]]] = None,
) -> Iterator[Move]:
    """All first-player moves, or one representative per symmetry orbit.

    ``canonical`` needs the two automorphism groups; orbits are taken under
    the product action restricted to the stabilizer of the position.
    """
    moves: list[Move] = []
    for side in (SIDE_G, SIDE_H):
        graph = cfg.graph(side)
        for colour in range(cfg.colours):
            for mask in range(1 << graph.n):
                moves.append(Move("colour", side, colour=colour, vertices=mask))
        if cfg.variant == MSO:
            for pair in range(cfg.pebble_pairs):
                for v in range(graph.n):
                    moves.append(Move("pebble", side, pair=pair, vertex=v))
    moves.sort(key=Move.sort_key)
    if policy == "all" or groups is None:
        yield from moves
        return
    if policy != "canonical_under_automorphisms":
        raise RuleError(f"unknown policy {policy!r}")
    stab = stabilizer(pos, cfg, groups)
    seen: set[tuple] = set()
    for mv in moves:
        key = _move_orbit_key(mv, cfg, stab)
        if key not in seen:
            seen.add(key)
            yield mv


def enumerate_existential(
    pending: PendingPosition,
    cfg: GameConfig,
    policy: str = "all",
    groups: Optional[tuple[Sequence[tuple[int, ...]], Sequence[tuple[int, ...]]]] = None,
) -> Iterator[int]:
    """All answers on the opposite side (masks, or vertices for pebbles)."""
    graph = cfg.graph(pending.answer_side)
    if pending.move.kind == "pebble":
        answers: Iterable[int] = range(graph.n)
    else:
        answers = range(1 << graph.n)
    if policy == "all" or groups is None:
        yield from answers
        return
    if policy != "canonical_under_automorphisms":
        raise RuleError(f"unknown policy {policy!r}")
    stab = _pending_stabilizer(pending, cfg, groups)
    side_index = 0 if pending.answer_side == SIDE_G else 1
    seen: set[int] = set()
    for ans in answers:
        if pending.move.kind == "pebble":
            key = min(p[side_index][ans] for p in stab) if stab else ans
        else:
            key = min(permute_mask(ans, p[side_index]) for p in stab) if stab else ans
        if key not in seen:
            seen.add(key)
            yield ans


def permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def _apply_product(pos: Position, pg: Sequence[int], ph: Sequence[int]) -> Position:
    return Position(
        planes_g=tuple(permute_mask(m, pg) for m in pos.planes_g),
        planes_h=tuple(permute_mask(m, ph) for m in pos.planes_h),
        pebbles_g=tuple(None if v is None else pg[v] for v in pos.pebbles_g),
        pebbles_h=tuple(None if v is None else ph[v] for v in pos.pebbles_h),
    )


def stabilizer(
    pos: Position,
    cfg: GameConfig,
    groups: tuple[Sequence[tuple[int, ...]], Sequence[tuple[int, ...]]],
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Product-group elements fixing the position exactly."""
    out = []
    for pg in groups[0]:
        for ph in groups[1]:
            if _apply_product(pos, pg, ph).key() == pos.key():
                out.append((pg, ph))
    return out


def _pending_stabilizer(pending, cfg, groups):
    mv = pending.move
    stab = []
    for pg, ph in stabilizer(pending.base, cfg, groups):
        perm = pg if mv.side == SIDE_G else ph
        if mv.kind == "colour":
            fixed = permute_mask(mv.vertices, perm) == mv.vertices
        else:
            fixed = perm[mv.vertex] == mv.vertex
        if fixed:
            stab.append((pg, ph))
    return stab


def _move_orbit_key(mv: Move, cfg: GameConfig, stab) -> tuple:
    side_index = 0 if mv.side == SIDE_G else 1
    if mv.kind == "colour":
        base = mv.vertices
        img = min(
            (permute_mask(base, p[side_index]) for p in stab), default=base
        )
        return ("colour", mv.side, mv.colour, img)
    img = min((p[side_index][mv.vertex] for p in stab), default=mv.vertex)
    return ("pebble", mv.side, mv.pair, img)


def position_key(
    pos: Position,
    cfg: GameConfig,
    modulo_automorphisms: bool = False,
    groups: Optional[tuple[Sequence[tuple[int, ...]], Sequence[tuple[int, ...]]]] = None,
    group_cap: int = 50_000,
) -> tuple:
    """Memoization key; orbit-invariant when the flag is set and the product
    group is within the cap (falls back to the exact key otherwise)."""
    if not modulo_automorphisms or groups is None:
        return pos.key()
    if len(groups[0]) * len(groups[1]) > group_cap:
        return pos.key()
    return min(
        _apply_product(pos, pg, ph).key() for pg in groups[0] for ph in groups[1]
    )
