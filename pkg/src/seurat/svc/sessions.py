"""Live play sessions: creation, turn handling, engine replies, persistence.

A session document records the full round history; its current position is
always reproduced by replaying that history from the initial position, so a
reload after a crash shows exactly the same state.  All randomness used by
engine heuristics flows from the per-session seed.
"""
from __future__ import annotations

import threading
import uuid
from typing import Optional

from ..engine import (
    MSO,
    PLAIN,
    SIDE_G,
    GameConfig,
    Move,
    PendingPosition,
    Position,
    apply_existential,
    apply_universal,
    initial_position,
    losing_conditions,
    other_side,
)
from ..graphs import bits, graph_from_json, graph_to_json, mask_of
from ..solve import SolveLimits, estimate_state_space, extract_strategy, solve
from .store import DataStore


class SessionError(ValueError):
    pass


class NotYourTurn(SessionError):
    pass


_locks: dict[str, threading.Lock] = {}
_locks_guard = threading.Lock()


def _session_lock(session_id: str) -> threading.Lock:
    with _locks_guard:
        return _locks.setdefault(session_id, threading.Lock())


def config_from_doc(doc: dict) -> GameConfig:
    return GameConfig(
        graph_from_json(doc["g"]),
        graph_from_json(doc["h"]),
        doc["colours"],
        doc["variant"],
        doc.get("pebble_pairs", 0),
    )


def _answer_to_json(move: Move, answer: int) -> dict:
    if move.kind == "colour":
        return {"vertices": sorted(bits(answer))}
    return {"vertex": answer}


def _answer_from_json(move_kind: str, doc: dict) -> int:
    if move_kind == "colour":
        if set(doc) != {"vertices"}:
            raise SessionError("colour answers carry exactly a vertex list")
        return mask_of(int(v) for v in doc["vertices"])
    if set(doc) != {"vertex"}:
        raise SessionError("pebble answers carry exactly one vertex")
    return int(doc["vertex"])


def replay(doc: dict) -> tuple[Position, Optional[PendingPosition]]:
    """Current position (and pending half-round, if any) from the history."""
    cfg = config_from_doc(doc)
    pos = initial_position(cfg)
    for round_doc in doc["history"]:
        mv = Move.from_json(round_doc["move"])
        pend = apply_universal(pos, mv, cfg)
        pos = apply_existential(
            pend, _answer_from_json(mv.kind, round_doc["answer"]), cfg
        )
    pending = None
    if doc.get("pending"):
        pending = apply_universal(pos, Move.from_json(doc["pending"]), cfg)
    return pos, pending


def _position_json(cfg: GameConfig, pos: Position) -> dict:
    doc = {
        "palettes_g": [sorted(bits(pos.palette(SIDE_G, v))) for v in range(cfg.g.n)],
        "palettes_h": [
            sorted(bits(pos.palette(other_side(SIDE_G), v))) for v in range(cfg.h.n)
        ],
    }
    if cfg.variant == MSO:
        doc["pebbles_g"] = list(pos.pebbles_g)
        doc["pebbles_h"] = list(pos.pebbles_h)
    return doc


def _whose_half(doc: dict) -> str:
    """'universal' when a fresh move is due, else 'existential'."""
    return "existential" if doc.get("pending") else "universal"


def _is_humans_half(doc: dict) -> bool:
    role = doc["human_role"]
    if role == "both":
        return True
    half = _whose_half(doc)
    return (role == "forall") == (half == "universal")


class EnginePlayers:
    """Engine move/answer computation for one session document."""

    def __init__(self, doc: dict):
        self.doc = doc
        self.cfg = config_from_doc(doc)
        spec = doc.get("engine") or {}
        self.kind = spec.get("kind")
        self.spec = spec

    def _solver_strategy(self):
        limits = SolveLimits(
            state_budget=int(self.spec.get("state_budget", 1 << 25))
        )
        verdict = solve(self.cfg, limits)
        return verdict, extract_strategy(verdict) if verdict.winner != "unknown" else None

    def universal_move(self, pos: Position) -> Move:
        if self.kind == "solver":
            verdict, strat = self._solver_strategy()
            if strat is not None and verdict.winner == "forall":
                try:
                    return strat.universal_move(pos)
                except ValueError:
                    pass
            # no winning line known: play the first sensible probe
            from ..solve import hint

            ranked = hint(pos, self.cfg, SolveLimits(), top=1)
            if ranked:
                return Move.from_json(ranked[0]["move"])
        # heuristic engines probe with a deterministic small move
        rng_round = len(self.doc["history"])
        graph = self.cfg.g
        v = rng_round % graph.n
        return Move("colour", SIDE_G, colour=rng_round % self.cfg.colours, vertices=1 << v)

    def existential_answer(self, pending: PendingPosition) -> int:
        if self.kind == "solver":
            verdict, strat = self._solver_strategy()
            if strat is not None:
                try:
                    return strat.existential_answer(pending)
                except ValueError:
                    pass
        from ..strat.heuristics import eloise_heuristic

        name = self.spec.get("name", "greedy_spectrum")
        seed = self.doc.get("seed", 0)
        try:
            player = eloise_heuristic(name, self.cfg, seed=seed)
            return player.answer(self.cfg, pending, self.doc["history"])
        except ValueError:
            player = eloise_heuristic("greedy_spectrum", self.cfg)
            return player.answer(self.cfg, pending, self.doc["history"])


def _finish_round(doc: dict, cfg: GameConfig, pos: Position) -> None:
    triggers = losing_conditions(pos, cfg)
    if triggers:
        doc["status"] = {
            "state": "won_by_forall",
            "round": len(doc["history"]),
            "triggers": [t.to_json() for t in triggers],
        }


def _engine_advance(doc: dict) -> None:
    """Let the engine play while it is its half and the session is live."""
    if doc["human_role"] == "both" or doc["status"]["state"] != "live":
        return
    cfg = config_from_doc(doc)
    engine = EnginePlayers(doc)
    for _ in range(2):
        if doc["status"]["state"] != "live" or _is_humans_half(doc):
            return
        pos, pending = replay(doc)
        if pending is None:
            mv = engine.universal_move(pos)
            apply_universal(pos, mv, cfg)  # validation
            doc["pending"] = mv.to_json()
        else:
            ans = engine.existential_answer(pending)
            new_pos = apply_existential(pending, ans, cfg)
            doc["history"].append(
                {
                    "move": doc["pending"],
                    "answer": _answer_to_json(pending.move, ans),
                }
            )
            doc["pending"] = None
            _finish_round(doc, cfg, new_pos)


def session_view(doc: dict) -> dict:
    cfg = config_from_doc(doc)
    pos, pending = replay(doc)
    view = {
        "id": doc["id"],
        "g": doc["g"],
        "h": doc["h"],
        "colours": doc["colours"],
        "variant": doc["variant"],
        "pebble_pairs": doc.get("pebble_pairs", 0),
        "human_role": doc["human_role"],
        "engine": doc.get("engine"),
        "seed": doc.get("seed", 0),
        "round": len(doc["history"]),
        "history": doc["history"],
        "pending": doc.get("pending"),
        "status": doc["status"],
        "position": _position_json(cfg, pos),
        "your_turn": doc["status"]["state"] == "live" and _is_humans_half(doc),
        "turn_half": _whose_half(doc),
    }
    return view


def create_session(store: DataStore, request: dict) -> dict:
    cfg = GameConfig(
        graph_from_json(request["g"]),
        graph_from_json(request["h"]),
        request["colours"],
        request.get("variant", PLAIN),
        request.get("pebble_pairs", 0),
    )
    doc = {
        "id": uuid.uuid4().hex[:12],
        "g": graph_to_json(cfg.g),
        "h": graph_to_json(cfg.h),
        "colours": cfg.colours,
        "variant": cfg.variant,
        "pebble_pairs": cfg.pebble_pairs,
        "human_role": request.get("human_role", "both"),
        "engine": request.get("engine"),
        "seed": int(request.get("seed", 0)),
        "history": [],
        "pending": None,
        "status": {"state": "live"},
    }
    if doc["human_role"] not in ("forall", "exists", "both"):
        raise SessionError("human_role must be forall, exists or both")
    if doc["human_role"] != "both" and not doc.get("engine"):
        doc["engine"] = {"kind": "solver"}
    _engine_advance(doc)
    store.save_session(doc)
    return session_view(doc)


def post_move(store: DataStore, session_id: str, payload: dict) -> dict:
    with _session_lock(session_id):
        doc = store.load_session(session_id)
        if doc is None:
            raise KeyError(session_id)
        if doc["status"]["state"] != "live":
            raise SessionError("session already finished")
        if not _is_humans_half(doc):
            raise NotYourTurn("engine to play")
        cfg = config_from_doc(doc)
        pos, pending = replay(doc)
        if pending is None:
            if "move" not in payload:
                raise SessionError("a first-player move is due")
            mv = Move.from_json(payload["move"])
            apply_universal(pos, mv, cfg)
            doc["pending"] = mv.to_json()
        else:
            if "answer" not in payload:
                raise SessionError("an answer on the other side is due")
            ans = _answer_from_json(pending.move.kind, payload["answer"])
            new_pos = apply_existential(pending, ans, cfg)
            doc["history"].append(
                {"move": doc["pending"], "answer": _answer_to_json(pending.move, ans)}
            )
            doc["pending"] = None
            _finish_round(doc, cfg, new_pos)
        _engine_advance(doc)
        store.save_session(doc)
        return session_view(doc)


def session_hint(store: DataStore, session_id: str, depth: Optional[int]) -> dict:
    doc = store.load_session(session_id)
    if doc is None:
        raise KeyError(session_id)
    if doc["status"]["state"] != "live":
        raise SessionError("session already finished")
    cfg = config_from_doc(doc)
    pos, pending = replay(doc)
    limits = SolveLimits(max_rounds=depth) if depth else SolveLimits()
    certified = estimate_state_space(cfg) <= limits.state_budget
    if pending is not None:
        # answering half: rank answers by safety
        if certified:
            ctx = solve(cfg, limits)._ctx
            ranked = [
                {
                    "answer": _answer_to_json(pending.move, a),
                    "eval": {"safe": not won, "bound": rank if won else None, "certified": True},
                }
                for a, won, rank in ctx.answer_values(pending)
            ]
            ranked.sort(key=lambda d: (not d["eval"]["safe"], -(d["eval"]["bound"] or 0)))
        else:
            engine = EnginePlayers(doc)
            best = engine.existential_answer(pending)
            ranked = [
                {
                    "answer": _answer_to_json(pending.move, best),
                    "eval": {"safe": None, "bound": None, "certified": False},
                }
            ]
        return {
            "hints": ranked[:32],
            "provenance": "certified" if certified else "heuristic",
        }
    from ..solve import hint as solve_hint

    ranked = solve_hint(pos, cfg, limits, top=32)
    return {
        "hints": ranked,
        "provenance": "certified" if certified else "heuristic",
    }
