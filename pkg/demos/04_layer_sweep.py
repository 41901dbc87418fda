"""
Finding the optima with the outer optimisation loop
===================================================

For each layer count, optimise the angles from several random starts and
count how often the most probable measured state is the brute-force optimum.
Fewer seeds than a full study so this finishes in about a minute.
"""
import numpy as np

from congestion_qaoa import Hard, Soft, bundled_game, enumerate_paths, sweep

game = bundled_game()
table = enumerate_paths(game)
p_list = [1, 3, 5]
seeds = 4

print("p   " + "  ".join(f"{o + '/' + m:>11}" for o in ("social", "nash") for m in ("soft", "hard")))
reports = {}
for objective in ("social", "nash"):
    for mode in ("soft", "hard"):
        reports[objective, mode] = sweep(game, table, objective, Soft() if mode == "soft" else Hard(), p_list, seeds)
for p in p_list:
    counts = [reports[k].success_counts()[p] for k in reports]
    print(f"{p:<3} " + "  ".join(f"{f'{c}/{seeds}':>11}" for c in counts))

# %%
# Cumulative probability over feasible solutions ranked by cost, averaged over
# seeds, against a uniform draw over the same solutions.
rep = reports["nash", "hard"]
_, base = rep.baseline_curve(feasible_only=True)
print("uniform:", np.round(base, 3))
for p in p_list:
    _, cum = rep.curve(p, feasible_only=True)
    print(f"p={p}:    ", np.round(cum, 3))
