"""
One QAOA layer: expectation over (beta, gamma)
==============================================

With the transverse-field mixer the p = 1 landscape varies in both angles.
The parity-mixer ansatz starts in a basis state, so the first cost layer is
only a global phase and the map is flat along gamma. One pre-mixing layer at
beta0 = pi/8 restores the gamma dependence.
"""
import numpy as np

from congestion_qaoa import Hard, QaoaConfig, Soft, assemble, bundled_game, enumerate_paths, heatmap

game = bundled_game()
table = enumerate_paths(game)
soft = assemble("nash", Soft(), game, table).energies()
hard = assemble("nash", Hard(), game, table).energies()

maps = {
    "soft, X mixer": heatmap(QaoaConfig.soft(1), soft, 32),
    "hard, no pre-mix": heatmap(QaoaConfig.hard(table, 1), hard, 32),
    "hard, pre-mix pi/8": heatmap(QaoaConfig.hard(table, 1, premix_beta0=np.pi / 8), hard, 32),
}

for name, grid in maps.items():
    along_gamma = np.ptp(grid.values, axis=1).max()
    along_beta = np.ptp(grid.values, axis=0).max()
    print(f"{name:>20}: min {grid.values.min():8.3f}  spread along gamma {along_gamma:.3g}  along beta {along_beta:.3g}")

# %%
# If matplotlib is around, draw the three maps side by side.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for ax, (name, grid) in zip(axes, maps.items()):
        im = ax.imshow(grid.values, origin="lower", aspect="auto", extent=[0, 2 * np.pi, 0, np.pi])
        ax.set_title(name)
        ax.set_xlabel("gamma")
        ax.set_ylabel("beta")
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig("heatmaps.png", dpi=120)
    print("wrote heatmaps.png")
