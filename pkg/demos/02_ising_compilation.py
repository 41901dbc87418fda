"""
Compiling the game into an Ising cost
=====================================

Resource loads are affine in the spins, so both objectives and the one-path
penalty expand to constant + bias + pairwise couplings.
"""
import numpy as np

from congestion_qaoa import (
    Soft,
    assemble,
    auto_penalty,
    bundled_game,
    compile_nash,
    compile_path_penalty,
    compile_social,
    enumerate_paths,
)
from congestion_qaoa import oracle
from congestion_qaoa.encode import all_bits

game = bundled_game()
table = enumerate_paths(game)

social = compile_social(game, table)
nash = compile_nash(game, table)
np.set_printoptions(precision=3, suppress=True)
print("social: c =", social.c)
print("h =", social.h)
print("J =\n", social.J)

# %%
# The compiled polynomial agrees with the delays summed path by path.
bits = all_bits(table.n_spins)
direct = np.array([oracle.nash_cost(game, table, b) for b in bits])
print("max |compiled - direct| (Nash):", np.abs(nash.energies() - direct).max())

# %%
# The automatic penalty is one more than the objective's range over all
# assignments, enough to push every infeasible assignment above every
# feasible one.
A = auto_penalty(nash)
soft = assemble("nash", Soft(A), game, table).energies()
feasible = np.array([oracle.is_feasible(table, b) for b in bits])
print(f"A = {A:.3f}")
print("worst feasible:", soft[feasible].max(), " best infeasible:", soft[~feasible].min())

# %%
# Coupling counts stay within the worst-case bounds.
n, r, pmax = game.n_players, game.n_resources, table.max_paths
print("social couplings", social.n_couplings(), "<=", r * (n * pmax) ** 2)
print("nash couplings", nash.n_couplings(), "<=", r * (n * pmax) ** 2)
print("penalty couplings", compile_path_penalty(table, A).n_couplings(), "<=", n * pmax**2)
