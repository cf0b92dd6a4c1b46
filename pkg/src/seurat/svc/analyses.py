"""Asynchronous analysis jobs with disk-cached results.

Results are cached keyed by (kind, canonical forms of the input graphs,
normalized parameters); a repeated request returns the cached result under
the same result id without recomputation.
"""
from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from ..engine import PLAIN, GameConfig
from ..graphs import canonical_form, graph_from_json
from .store import DataStore

KINDS = ("spectra", "wl", "iso", "deck", "solve", "verify", "search")


def _cache_key(kind: str, params: dict) -> str:
    normal = dict(params)
    for field in ("g", "h"):
        if field in normal:
            normal[field] = canonical_form(graph_from_json(normal[field])).hex()
    blob = json.dumps({"kind": kind, "params": normal}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def _run_analysis(kind: str, params: dict) -> dict:
    from ..refine import k_wl_pair, spectrum_to_json, tally_spectrum
    from ..solve import SolveLimits, solve

    if kind == "spectra":
        g = graph_from_json(params["g"])
        return {"spectrum": spectrum_to_json(tally_spectrum(g))}
    if kind == "wl":
        g = graph_from_json(params["g"])
        h = graph_from_json(params["h"])
        a, b = k_wl_pair(g, h, int(params.get("k", 1)))
        return {
            "distinguishes": a.histogram != b.histogram,
            "histogram_g": [list(x) for x in a.histogram],
            "histogram_h": [list(x) for x in b.histogram],
        }
    if kind == "iso":
        from ..graphs import find_isomorphism

        g = graph_from_json(params["g"])
        h = graph_from_json(params["h"])
        m = find_isomorphism(g, h, params.get("mode", "refined_backtracking"))
        return {
            "isomorphic": m is not None,
            "mapping": dict(m.pairs) if m else None,
        }
    if kind == "deck":
        from ..recon import da_deck, deck

        g = graph_from_json(params["g"])
        if params.get("da"):
            d = da_deck(g)
            return {
                "da_deck": [
                    {"tally": list(t), "card": f.hex(), "mult": mult}
                    for (t, f), mult in d.cards
                ]
            }
        d = deck(g)
        return {"deck": [{"card": f.hex(), "mult": mult} for f, mult in d.cards]}
    if kind == "solve":
        g = graph_from_json(params["g"])
        h = graph_from_json(params["h"])
        cfg = GameConfig(
            g, h, int(params.get("colours", 2)), params.get("variant", PLAIN),
            int(params.get("pebble_pairs", 0)),
        )
        limits = SolveLimits(
            state_budget=int(params.get("state_budget", 1 << 25)),
            max_rounds=params.get("max_rounds"),
            pruning_level=params.get("pruning_level", "none"),
            symmetry_reduction=bool(params.get("symmetry_reduction", False)),
        )
        return solve(cfg, limits).to_json()
    if kind == "verify":
        from ..strat import ResponseFilter, scripted, verify

        name = params["strategy"]
        kwargs = {}
        for key in ("family", "m", "n", "case"):
            if key in params:
                kwargs[key] = params[key]
        for key in ("g", "h"):
            if key in params:
                kwargs[key] = graph_from_json(params[key])
        strategy = scripted(name, **kwargs)
        filt = None
        if params.get("rules"):
            filt = ResponseFilter(frozenset(params["rules"]))
        res = verify(
            strategy,
            adversary=params.get("adversary", "exhaustive"),
            depth=int(params.get("depth", 4)),
            filt=filt,
            seeds=tuple(params.get("seeds", (0, 1, 2))),
        )
        return res.to_json()
    if kind == "search":
        from ..recon import search

        report = search(
            max_n=int(params.get("max_n", 2)),
            colours=int(params.get("colours", 2)),
            variant=params.get("variant", PLAIN),
            loops=bool(params.get("loops", True)),
            directed=not bool(params.get("undirected", False)),
        )
        return report.to_json()
    raise ValueError(f"unknown analysis kind {kind!r}")


class AnalysisRunner:
    def __init__(self, store: DataStore, workers: int = 2):
        self.store = store
        self.pool = ThreadPoolExecutor(max_workers=workers)
        self.jobs: dict[str, dict] = {}
        self.guard = threading.Lock()

    def submit(self, kind: str, params: dict) -> dict:
        if kind not in KINDS:
            raise ValueError(f"unknown analysis kind {kind!r}")
        key = _cache_key(kind, params)
        cached = self.store.cache_get(key)
        if cached is not None:
            job = {
                "id": key,
                "kind": kind,
                "state": "done",
                "result": cached,
                "cached": True,
            }
            with self.guard:
                self.jobs[job["id"]] = job
            return job
        job = {"id": key, "kind": kind, "state": "queued", "cached": False}
        with self.guard:
            self.jobs[job["id"]] = job

        def work():
            with self.guard:
                job["state"] = "running"
            try:
                result = _run_analysis(kind, params)
            except Exception as exc:  # surfaced to the poller
                with self.guard:
                    job["state"] = "failed"
                    job["error"] = str(exc)
                return
            self.store.cache_put(key, result)
            with self.guard:
                job["state"] = "done"
                job["result"] = result

        self.pool.submit(work)
        return dict(job)

    def poll(self, job_id: str) -> Optional[dict]:
        with self.guard:
            job = self.jobs.get(job_id)
            if job is not None:
                return dict(job)
        cached = self.store.cache_get(job_id)
        if cached is not None:
            return {"id": job_id, "kind": None, "state": "done", "result": cached, "cached": True}
        return None
