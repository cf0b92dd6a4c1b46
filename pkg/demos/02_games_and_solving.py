"""Playing and solving the colouring games exactly.

The worked two-chain pair separates the plain and strong one-colour games:
the second player mirrors edge-type combinations forever in the plain game,
but the strong game's coverage condition catches the added 2-cycle.

Run:  python3 demos/02_games_and_solving.py
"""
from seurat.engine import (
    PLAIN,
    STRONG,
    GameConfig,
    initial_position,
)
from seurat.generators import named_example
from seurat.solve import SolveLimits, estimate_state_space, extract_strategy, hint, solve

g, h = named_example("fig1").graphs
for variant in (PLAIN, STRONG):
    cfg = GameConfig(g, h, 1, variant)
    verdict = solve(cfg)
    print(
        f"{variant:6s} one-colour game over {estimate_state_space(cfg)} positions:"
        f" {verdict.winner}"
        + (f" within {verdict.round_bound} round(s)" if verdict.winner == "forall" else "")
    )

cfg = GameConfig(g, h, 1, STRONG)
strategy = extract_strategy(solve(cfg))
opening = strategy.universal_move(initial_position(cfg))
print("winning opening move:", opening.to_json())

# Move ranking from any position.
rg, rh = named_example("ramachandran").graphs
cfg2 = GameConfig(rg, rh, 2, PLAIN)
print("\ntwo-colour game over the tournament pair:", solve(cfg2).winner)
top = hint(initial_position(cfg2), cfg2, SolveLimits(), top=3)
print("top ranked openings:")
for entry in top:
    print("  ", entry["move"], entry["eval"])
