"""Tally sequences and spectra: how iterated relative degrees partition a
digraph, and why that partition is exactly what the two-colour game can see.

Run:  python3 demos/01_tally_sequences.py
"""
from seurat.generators import named_example
from seurat.graphs import tally
from seurat.refine import all_tally_sequences, tally_class_subgraph, tally_spectrum
from seurat.graphs import Tally, find_isomorphism, make_digraph

# Two 6-vertex tournaments with the same deck -- a classical reconstruction
# counterexample.  Their plain tallies agree, but sequences tell them apart
# vertex by vertex.
g, h = named_example("ramachandran").graphs
labels_g, labels_h = named_example("ramachandran").labels

print("vertex tallies of the first tournament:")
for v in range(g.n):
    print(f"  {labels_g[v]}: {tuple(tally(g, v))}")

print("\nsignificant parts of the tally-sequences:")
for graph, labels in ((g, labels_g), (h, labels_h)):
    for v, seq in enumerate(all_tally_sequences(graph)):
        parts = ", ".join(str(tuple(t)) for t in seq.significant)
        print(f"  {labels[v]}: ({parts})")
    print()

print("spectra equal:", tally_spectrum(g) == tally_spectrum(h))

# The star pair: equal spectra but different class subgraphs.
s, t = named_example("stars").graphs
print("\nstar pair spectra equal:", tally_spectrum(s) == tally_spectrum(t))
ring = tally_class_subgraph(s, [Tally(3, 3), Tally(2, 2)])
twin = tally_class_subgraph(t, [Tally(3, 3), Tally(2, 2)])
c6 = make_digraph(6, [(i, (i + 1) % 6) for i in range(6)], directed=False)
print("outer class of the first star is a 6-ring:", find_isomorphism(ring, c6) is not None)
print("outer class of the twin star is a 6-ring:", find_isomorphism(twin, c6) is not None)
