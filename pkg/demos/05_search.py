"""Conjecture-support sweep: solve the two-colour game exactly over every
pair of distinct isomorphism classes of equal order.

A second-player win between non-isomorphic digraphs would be a headline
finding (it would bear on the reconstruction conjectures), so any hit is
re-verified with a fresh unreduced solve before being reported.

Run:  python3 demos/05_search.py
"""
from seurat.recon import search

report = search(max_n=3, colours=2)
print(report.summary())
print()

report_k1 = search(max_n=3, colours=1)
print("for contrast, the one-colour game leaves survivors:")
print(report_k1.summary())
if report_k1.exists_wins:
    first = report_k1.exists_wins[0]
    print("\nsmallest surviving pair (edge lists):")
    print("  g:", first["g"]["edges"])
    print("  h:", first["h"]["edges"])
