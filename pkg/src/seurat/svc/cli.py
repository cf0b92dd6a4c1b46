"""Command line entry points.

Subcommands: gen, spectra, wl, iso, deck, solve, verify, search, serve.
``solve`` exits 10 when the first player wins, 11 for the second player,
12 when the budgets ran out.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from ..engine import PLAIN, GameConfig
from ..graphs import graph_to_json, load_graph


def _read_graph(path: str):
    with open(path) as fh:
        return load_graph(fh.read())


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_gen(args) -> int:
    from ..generators import (
        cfi,
        complete_graph,
        named_example,
        stockmeyer_labels,
        stockmeyer_pair,
        tournament_T,
        tournament_labels,
    )

    if args.what == "tournament":
        g = tournament_T(args.k)
        _emit(graph_to_json(g, tournament_labels(args.k)))
    elif args.what == "stockmeyer":
        pair = stockmeyer_pair(args.family, args.m, args.n)
        g = pair[1] if args.star else pair[0]
        _emit(graph_to_json(g, stockmeyer_labels(args.m, args.n)))
    elif args.what == "cfi":
        if args.base.upper().startswith("K") and args.base[1:].isdigit():
            base = complete_graph(int(args.base[1:]))
        else:
            base = _read_graph(args.base)
        twist = tuple(args.twist) if args.twist else None
        g, labels = cfi(base, twist)
        _emit(graph_to_json(g, {v: str(l) for v, l in labels.items()}))
    elif args.what == "named":
        ex = named_example(args.name)
        docs = [
            graph_to_json(g, lab or None) for g, lab in zip(ex.graphs, ex.labels)
        ]
        _emit(docs[0] if len(docs) == 1 else docs)
    return 0


def _cmd_spectra(args) -> int:
    from ..refine import spectrum_to_json, tally_spectrum

    g = _read_graph(args.graph)
    _emit(spectrum_to_json(tally_spectrum(g)))
    return 0


def _cmd_wl(args) -> int:
    from ..refine import k_wl_pair

    g, h = _read_graph(args.g), _read_graph(args.h)
    a, b = k_wl_pair(g, h, args.k)
    _emit(
        {
            "distinguishes": a.histogram != b.histogram,
            "histogram_g": [list(x) for x in a.histogram],
            "histogram_h": [list(x) for x in b.histogram],
        }
    )
    return 0


def _cmd_iso(args) -> int:
    from ..graphs import find_isomorphism

    g, h = _read_graph(args.g), _read_graph(args.h)
    m = find_isomorphism(g, h, args.mode)
    _emit({"isomorphic": m is not None, "mapping": dict(m.pairs) if m else None})
    return 0


def _cmd_deck(args) -> int:
    from ..recon import da_deck, deck

    g = _read_graph(args.graph)
    if args.da:
        d = da_deck(g)
        _emit(
            {
                "da_deck": [
                    {"tally": list(t), "card": f.hex(), "mult": m}
                    for (t, f), m in d.cards
                ]
            }
        )
    else:
        _emit({"deck": [{"card": f.hex(), "mult": m} for f, m in deck(g).cards]})
    return 0


def _cmd_solve(args) -> int:
    from ..solve import SolveLimits, solve

    cfg = GameConfig(
        _read_graph(args.g), _read_graph(args.h), args.colours, args.variant, args.pebbles
    )
    limits = SolveLimits(
        max_rounds=args.max_rounds,
        state_budget=args.budget,
        symmetry_reduction=args.symmetry,
        pruning_level="necessary_constraints" if args.prune else "none",
        mode=args.mode,
    )
    verdict = solve(cfg, limits)
    _emit(verdict.to_json())
    return {"forall": 10, "exists": 11}.get(verdict.winner, 12)


def _cmd_verify(args) -> int:
    from ..strat import ResponseFilter, scripted, verify

    kwargs = {}
    if args.family:
        kwargs.update(family=args.family, m=args.m, n=args.n)
    elif args.strategy == "cfi":
        kwargs.update(n=args.n)
    if args.g:
        kwargs["g"] = _read_graph(args.g)
    if args.h:
        kwargs["h"] = _read_graph(args.h)
    strategy = scripted(args.strategy, **kwargs)
    filt = ResponseFilter(frozenset(args.rules.split(","))) if args.rules else None
    res = verify(
        strategy,
        adversary=args.adversary,
        depth=args.depth,
        filt=filt,
        seeds=tuple(int(s) for s in args.seeds.split(",")) if args.seeds else (0, 1, 2),
    )
    _emit(res.to_json())
    return 0 if res.kind in ("certificate", "not_refuted") else 1


def _cmd_search(args) -> int:
    from ..recon import search
    from ..solve import SolveLimits

    report = search(
        max_n=args.max_n,
        colours=args.colours,
        variant=args.variant,
        loops=args.loops,
        directed=not args.undirected,
        limits=SolveLimits(state_budget=args.budget),
    )
    _emit(report.to_json())
    print(report.summary(), file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .http import create_app

    app = create_app(args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seurat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate graphs")
    gsub = gen.add_subparsers(dest="what", required=True)
    t = gsub.add_parser("tournament")
    t.add_argument("--k", type=int, required=True)
    s = gsub.add_parser("stockmeyer")
    s.add_argument("--family", required=True, choices=list("ABCDEF"))
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--star", action="store_true")
    c = gsub.add_parser("cfi")
    c.add_argument("--base", required=True, help="graph file or K<n>")
    c.add_argument("--twist", type=int, nargs=2, default=None)
    nm = gsub.add_parser("named")
    nm.add_argument("--name", required=True)
    gen.set_defaults(fn=_cmd_gen)

    sp = sub.add_parser("spectra", help="tally spectrum of a graph")
    sp.add_argument("graph")
    sp.set_defaults(fn=_cmd_spectra)

    wl = sub.add_parser("wl", help="Weisfeiler-Leman comparison")
    wl.add_argument("g")
    wl.add_argument("h")
    wl.add_argument("--k", type=int, default=1)
    wl.set_defaults(fn=_cmd_wl)

    iso = sub.add_parser("iso", help="isomorphism test")
    iso.add_argument("g")
    iso.add_argument("h")
    iso.add_argument("--mode", default="refined_backtracking")
    iso.set_defaults(fn=_cmd_iso)

    dk = sub.add_parser("deck", help="(degree-associated) deck")
    dk.add_argument("graph")
    dk.add_argument("--da", action="store_true")
    dk.set_defaults(fn=_cmd_deck)

    so = sub.add_parser("solve", help="decide a game")
    so.add_argument("g")
    so.add_argument("h")
    so.add_argument("--colours", type=int, required=True)
    so.add_argument("--variant", default=PLAIN, choices=["plain", "strong", "mso"])
    so.add_argument("--pebbles", type=int, default=0)
    so.add_argument("--budget", type=int, default=1 << 25)
    so.add_argument("--max-rounds", type=int, default=None)
    so.add_argument("--symmetry", action="store_true")
    so.add_argument("--prune", action="store_true")
    so.add_argument("--mode", default=None, choices=["attractor", "search"])
    so.set_defaults(fn=_cmd_solve)

    ve = sub.add_parser("verify", help="certify a scripted strategy")
    ve.add_argument("--strategy", required=True)
    ve.add_argument("--family", default=None)
    ve.add_argument("--m", type=int, default=None)
    ve.add_argument("--n", type=int, default=None)
    ve.add_argument("--g", default=None)
    ve.add_argument("--h", default=None)
    ve.add_argument("--adversary", default="exhaustive",
                    choices=["exhaustive", "filtered_exhaustive", "heuristic_suite"])
    ve.add_argument("--depth", type=int, default=4)
    ve.add_argument("--rules", default=None, help="comma-separated rule names")
    ve.add_argument("--seeds", default=None, help="comma-separated seeds")
    ve.set_defaults(fn=_cmd_verify)

    se = sub.add_parser("search", help="conjecture-support pair sweep")
    se.add_argument("--max-n", type=int, required=True)
    se.add_argument("--colours", type=int, required=True)
    se.add_argument("--variant", default=PLAIN, choices=["plain", "strong"])
    se.add_argument("--loops", action=argparse.BooleanOptionalAction, default=True)
    se.add_argument("--undirected", action="store_true")
    se.add_argument("--budget", type=int, default=1 << 25)
    se.set_defaults(fn=_cmd_search)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--port", type=int, default=8642)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--data-dir", default=None)
    sv.set_defaults(fn=_cmd_serve)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
