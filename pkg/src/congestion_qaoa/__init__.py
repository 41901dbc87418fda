"""Congestion games compiled to Ising costs and solved with simulated QAOA."""
from importlib.resources import files

from .encode import (
    Hard,
    Objective,
    Soft,
    SpinPolynomial,
    assemble,
    auto_penalty,
    compile_nash,
    compile_path_penalty,
    compile_social,
    congestion_terms,
)
from .game import Game, GameError, StrategyTable, enumerate_paths, load_game
from .oracle import evaluate_all, optimum, verify_nash
from .qaoa import AngleVector, QaoaConfig, Variant, heatmap, optimize, run_circuit, sweep

__version__ = "0.1.0"


def bundled_game_text() -> str:
    """The two-player, seven-node asymmetric example network."""
    return files(__package__).joinpath("data/asymmetric_game.json").read_text(encoding="utf-8")


def bundled_game() -> Game:
    return load_game(bundled_game_text())
