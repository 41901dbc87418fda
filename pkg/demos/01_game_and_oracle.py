"""
The example congestion game, solved by brute force
==================================================

Two players cross a seven-node road network. Player A drives from S1 to T,
player B from S2 to T. Only the X->Y link slows down when it is shared.
"""
import numpy as np

from congestion_qaoa import bundled_game, enumerate_paths, evaluate_all, optimum, verify_nash

game = bundled_game()
table = enumerate_paths(game)

# Each player's strategies are the simple paths to their destination.
# One spin variable per (player, path): 4 + 2 = 6 spins.
for player, paths in zip(game.players, table.paths):
    print(f"player {player.id}:", ", ".join(str(p) for p in paths))
print("spins:", table.n_spins)

# %%
# Enumerate all 2^6 assignments. Only one-hot assignments (one path per
# player) are feasible.
rows = evaluate_all(game, table)
print(len(rows), "assignments,", sum(r.feasible for r in rows), "feasible")

# %%
# The social optimum minimises total delay; the potential minimiser is the
# best Nash equilibrium. They differ on this network.
social = optimum(rows, "social")
nash = optimum(rows, "nash")
for name, row in (("social", social), ("nash", nash)):
    print(f"{name:>6}: bits={row.bitstring} per-player={row.utilities} total={row.combined_utility:.2f}")

# %%
# In the social optimum player A can cut its own delay by switching path,
# so it is not an equilibrium. The potential minimiser has no such move.
for name, row in (("social", social), ("nash", nash)):
    cert = verify_nash(game, table, row)
    moves = [(i, str(table.paths[i][j]), round(d, 3)) for i, (j, d) in enumerate(cert.deviations)]
    print(f"{name:>6}: equilibrium={cert.is_nash} best moves={moves}")

# %%
# Feasible solutions ranked by total delay
feasible = sorted((r for r in rows if r.feasible), key=lambda r: r.social_cost)
print(np.array([[r.bitstring, f"{r.social_cost:.2f}", f"{r.nash_cost:.2f}"] for r in feasible]))
