"""The six pair families: same decks, different games.

Each pair shares its deck (the classical counterexamples to digraph
reconstruction) yet the two-colour game always separates it.  The scripted
tally strategy either exploits a spectrum mismatch outright or traps the
unique sequence-matched pair of vertices whose edge pattern disagrees.

Run:  python3 demos/03_stockmeyer_families.py
"""
from seurat.engine import GameConfig, PLAIN
from seurat.generators import stockmeyer_pair
from seurat.recon import da_deck, deck
from seurat.refine import tally_spectrum
from seurat.solve import solve
from seurat.strat import ResponseFilter, scripted, verify

RULES = ResponseFilter(frozenset({"S1", "S2", "S3", "S4", "TallySpectrum"}))

for family in "ABCDEF":
    z, zs = stockmeyer_pair(family, 2, 1)
    print(f"family {family} at (2,1):")
    print("  decks equal:           ", deck(z) == deck(zs))
    print("  degree-assoc decks eq: ", da_deck(z) != da_deck(zs) and "no" or "yes")
    print("  spectra equal:         ", tally_spectrum(z) == tally_spectrum(zs))
    print("  exact verdict (k=2):   ", solve(GameConfig(z, zs, 2, PLAIN)).winner)
    strat = scripted("tally", family=family, m=2, n=1)
    res = verify(strat, adversary="filtered_exhaustive", filt=RULES, depth=4)
    print(
        f"  scripted tally strategy: branch={strat.branch}, "
        f"verification={res.kind} (depth {res.certificate.depth if res.certificate else '-'})"
    )
    print()
