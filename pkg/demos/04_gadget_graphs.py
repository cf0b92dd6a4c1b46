"""Gadget graphs: invisible to bounded-dimension refinement, visible to the
two-colour game.

The twisted copy is not isomorphic to the plain one, but one-dimensional
refinement cannot tell them apart (both are regular).  The game still wins:
at base K4 the closure-size rule alone empties the reply set -- an
even-subset parity obstruction across the twist makes every 4-vertex answer
leak by the second closure step.

Run:  python3 demos/04_gadget_graphs.py
"""
from seurat.generators import cfi, complete_graph
from seurat.graphs import canonical_form, eta_step, find_isomorphism
from seurat.refine import k_wl_pair
from seurat.strat import ResponseFilter, scripted, verify

plain, labels = cfi(complete_graph(3))
twisted, _ = cfi(complete_graph(3), twist=True)
print("base K3 gadget graph:", plain.n, "vertices")
print("isomorphic to its twist:", find_isomorphism(plain, twisted) is not None)
print("canonical forms equal:", canonical_form(plain) == canonical_form(twisted))
a, b = k_wl_pair(plain, twisted, 1)
print("1-WL histograms equal:", a.histogram == b.histogram)

strat = scripted("cfi", n=4)
g, h = strat.cfg.g, strat.cfg.h
opening = strat.line[0].vertices
sizes = []
cur = opening
for _ in range(3):
    cur = eta_step(g, cur, "O")
    sizes.append(cur.bit_count())
print("\nbase K4: 40 vertices per side; opening closure sizes:", sizes)

res = verify(
    strat,
    adversary="filtered_exhaustive",
    filt=ResponseFilter(frozenset({"S1", "S4", "S5", "S6"})),
    depth=3,
)
print("certification:", res.kind, "| coverage:", res.certificate.coverage)
print(
    "explored answer branches:",
    sum(1 for _ in res.certificate.root.children),
    "(every reply violates a listed rule, so the tree closes at once)",
)
