"""QAOA circuits, angle scans and the classical outer loop.

Two variants are supported:

* ``SOFT_X``: uniform superposition, cost phase, transverse-field mixer.
  The cost passed in should include the path penalty.
* ``HARD_PARITY``: start from a feasible basis state (one selected path per
  player), optionally pre-mix, then alternate cost phase and one parity ring
  mixer per player register. Probability never leaves the feasible subspace.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import qsim
from .encode import Hard, Objective, Soft, assemble
from .game import Game, StrategyTable
from .oracle import evaluate_all, optimum
from .rng import SplitMix64

BETA_MAX = math.pi
GAMMA_MAX = 2 * math.pi
DEFAULT_PREMIX = math.pi / 8
EVALS_PER_LAYER = 200
IMPROVEMENT_TOL = 1e-6


class Variant(enum.Enum):
    SOFT_X = "soft"
    HARD_PARITY = "hard"


@dataclass(frozen=True)
class QaoaConfig:
    variant: Variant
    p: int
    registers: tuple[tuple[int, ...], ...] = ()
    premix_beta0: float | None = None
    initial_bits: tuple[int, ...] | None = None
    seed: int = 0
    max_evals: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "registers", tuple(tuple(r) for r in self.registers))
        if self.p < 0:
            raise ValueError(f"p must be non-negative, got {self.p}")
        if self.max_evals is not None and self.max_evals < 1:
            raise ValueError("max_evals must be positive")
        if self.variant is Variant.SOFT_X:
            if self.premix_beta0 is not None or self.initial_bits is not None:
                raise ValueError("soft variant takes neither a pre-mix angle nor initial bits")
            return
        if not self.registers:
            raise ValueError("hard variant needs the player registers")
        if self.initial_bits is None:
            object.__setattr__(self, "initial_bits", first_path_bits(self.registers))
        bits = tuple(int(b) for b in self.initial_bits)
        object.__setattr__(self, "initial_bits", bits)
        if len(bits) != self.n_qubits:
            raise ValueError(f"initial bits have length {len(bits)}, expected {self.n_qubits}")
        for reg in self.registers:
            if sum(bits[q] for q in reg) != 1:
                raise ValueError("initial bits must select exactly one path per player")

    @property
    def n_qubits(self) -> int:
        return sum(len(r) for r in self.registers)

    @property
    def budget(self) -> int:
        return self.max_evals if self.max_evals is not None else EVALS_PER_LAYER * max(self.p, 1)

    @classmethod
    def soft(cls, p: int, **kw) -> QaoaConfig:
        return cls(Variant.SOFT_X, p, **kw)

    @classmethod
    def hard(cls, table: StrategyTable, p: int, **kw) -> QaoaConfig:
        return cls(Variant.HARD_PARITY, p, registers=tuple(map(tuple, table.registers())), **kw)


def first_path_bits(registers) -> tuple[int, ...]:
    n = sum(len(r) for r in registers)
    bits = [0] * n
    for reg in registers:
        bits[reg[0]] = 1
    return tuple(bits)


def random_initial_bits(registers, seed: int) -> tuple[int, ...]:
    """A one-hot state chosen per player from ``seed`` (independent of angle draws)."""
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    n = sum(len(r) for r in registers)
    bits = [0] * n
    for reg in registers:
        bits[reg[rng.below(len(reg))]] = 1
    return tuple(bits)


@dataclass
class AngleVector:
    betas: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        self.betas = np.asarray(self.betas, dtype=float).reshape(-1)
        self.gammas = np.asarray(self.gammas, dtype=float).reshape(-1)
        if self.betas.size != self.gammas.size:
            raise ValueError("need as many betas as gammas")
        if np.any((self.betas < 0) | (self.betas > BETA_MAX)):
            raise ValueError("betas must lie in [0, pi]")
        if np.any((self.gammas < 0) | (self.gammas > GAMMA_MAX)):
            raise ValueError("gammas must lie in [0, 2 pi]")

    @property
    def p(self) -> int:
        return self.betas.size

    def flat(self) -> np.ndarray:
        return np.concatenate([self.betas, self.gammas])

    @classmethod
    def from_flat(cls, x) -> AngleVector:
        x = np.asarray(x, dtype=float)
        p = x.size // 2
        return cls(np.clip(x[:p], 0, BETA_MAX), np.clip(x[p:], 0, GAMMA_MAX))

    @classmethod
    def random(cls, p: int, seed: int) -> AngleVector:
        """Betas first, then gammas, each uniform over its box from SplitMix64(seed)."""
        rng = SplitMix64(seed)
        betas = [rng.uniform(0, BETA_MAX) for _ in range(p)]
        gammas = [rng.uniform(0, GAMMA_MAX) for _ in range(p)]
        return cls(betas, gammas)


def _mix(config: QaoaConfig, state: qsim.StateVector, beta: float) -> qsim.StateVector:
    if config.variant is Variant.SOFT_X:
        return qsim.apply_x_mixer(state, beta)
    for reg in config.registers:
        state = qsim.apply_parity_mixer(state, reg, beta)
    return state


def initial_state(config: QaoaConfig, n: int) -> qsim.StateVector:
    if config.variant is Variant.SOFT_X:
        return qsim.plus_state(n)
    if n != config.n_qubits:
        raise ValueError(f"cost table is for {n} qubits, registers cover {config.n_qubits}")
    state = qsim.basis_state(config.initial_bits)
    if config.premix_beta0 is not None:
        state = _mix(config, state, config.premix_beta0)
    return state


def run_circuit(config: QaoaConfig, angles: AngleVector, cost_table, *, layers=None) -> qsim.StateVector:
    """Evolve the initial state through ``p`` cost/mixer layers.

    ``layers``, if given, is a list that receives the state after every layer.
    """
    cost_table = np.asarray(cost_table, dtype=float)
    n = cost_table.size.bit_length() - 1
    if 2**n != cost_table.size:
        raise ValueError("cost table length must be a power of two")
    if angles.p != config.p:
        raise ValueError(f"config has p={config.p} but {angles.p} angle pairs were given")
    state = initial_state(config, n)
    for gamma, beta in zip(angles.gammas, angles.betas):
        state = qsim.apply_cost_phase(state, cost_table, gamma)
        state = _mix(config, state, beta)
        if layers is not None:
            layers.append(state)
    return state


@dataclass
class ExpectationGrid:
    betas: np.ndarray
    gammas: np.ndarray
    values: np.ndarray  # rows follow betas, columns follow gammas


def heatmap(config: QaoaConfig, cost_table, grid: int = 64) -> ExpectationGrid:
    if config.p != 1:
        raise ValueError("heat maps are defined for p = 1 only")
    if grid < 2:
        raise ValueError("grid needs at least 2 points per axis")
    betas = np.linspace(0, BETA_MAX, grid)
    gammas = np.linspace(0, GAMMA_MAX, grid)
    values = np.empty((grid, grid))
    for r, b in enumerate(betas):
        for c, g in enumerate(gammas):
            state = run_circuit(config, AngleVector([b], [g]), cost_table)
            values[r, c] = qsim.expectation(state, cost_table)
    return ExpectationGrid(betas, gammas, values)


@dataclass
class RunRecord:
    config: QaoaConfig
    initial_angles: AngleVector
    best_angles: AngleVector
    best_expectation: float
    probabilities: np.ndarray
    most_probable: tuple[int, ...]
    trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def most_probable_bits(self) -> str:
        return "".join(map(str, self.most_probable))


def most_probable_state(probs: np.ndarray) -> tuple[int, ...]:
    """Argmax of the distribution; ``np.argmax`` keeps the first (smallest index) tie."""
    n = probs.size.bit_length() - 1
    z = int(np.argmax(probs))
    return tuple((z >> (n - 1 - i)) & 1 for i in range(n))


def _initial_simplex(x0: np.ndarray, upper: np.ndarray) -> np.ndarray:
    # steps of a quarter of each box width, pointed back into the box
    sim = np.tile(x0, (x0.size + 1, 1))
    for i in range(x0.size):
        step = 0.25 * upper[i]
        sim[i + 1, i] = x0[i] + step if x0[i] + step <= upper[i] else x0[i] - step
    return sim


def optimize(config: QaoaConfig, cost_table) -> RunRecord:
    """Minimise the expectation over the 2p angles from seeded random angles.

    Bounded Nelder-Mead (points clipped into the box). Stops when the budget
    is spent or when the simplex values agree to within ``IMPROVEMENT_TOL``.
    The best point seen over every evaluation is returned.
    """
    cost_table = np.asarray(cost_table, dtype=float)
    start = AngleVector.random(config.p, config.seed)
    upper = np.concatenate([np.full(config.p, BETA_MAX), np.full(config.p, GAMMA_MAX)])
    trace: list[tuple[int, float]] = []
    best = [np.inf, start.flat()]

    def f(x):
        angles = AngleVector.from_flat(x)
        val = qsim.expectation(run_circuit(config, angles, cost_table), cost_table)
        trace.append((len(trace), val))
        if val < best[0]:
            best[0], best[1] = val, angles.flat()
        return val

    f(start.flat())
    if config.p > 0 and config.budget > 1:
        minimize(
            f,
            start.flat(),
            method="Nelder-Mead",
            bounds=list(zip(np.zeros_like(upper), upper)),
            options={
                "maxfev": config.budget - 1,
                "fatol": IMPROVEMENT_TOL,
                "xatol": np.inf,
                "adaptive": True,
                "initial_simplex": _initial_simplex(start.flat(), upper),
            },
        )
    best_angles = AngleVector.from_flat(best[1])
    probs = qsim.probabilities(run_circuit(config, best_angles, cost_table))
    return RunRecord(config, start, best_angles, float(best[0]), probs, most_probable_state(probs), trace)


def cumulative_curve(probs: np.ndarray, costs: np.ndarray, feasible: np.ndarray, feasible_only: bool = False):
    """Cumulative probability over solutions ranked by cost.

    Feasible solutions rank ahead of infeasible ones; ties keep binary order.
    With ``feasible_only`` the curve covers feasible solutions and is
    normalised by the feasible probability mass. Returns (order, cum_prob).
    """
    idx = np.arange(costs.size)
    order = np.array(sorted(idx, key=lambda z: (not feasible[z], costs[z], z)), dtype=int)
    if feasible_only:
        order = order[feasible[order]]
    mass = probs[order]
    total = mass.sum()
    cum = np.cumsum(mass) / total if total > 0 else np.full(order.size, np.nan)
    if total > 0:
        cum[-1] = 1.0
    return order, cum


@dataclass
class SweepCell:
    p: int
    seed: int
    record: RunRecord
    is_optimal: bool
    p_optimal: float


@dataclass
class SweepReport:
    objective: Objective
    variant: Variant
    optimum_bits: tuple[int, ...]
    costs: np.ndarray  # objective cost per basis state, from the oracle
    feasible: np.ndarray
    cells: list[SweepCell]

    def success_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for cell in self.cells:
            counts[cell.p] = counts.get(cell.p, 0) + int(cell.is_optimal)
        return counts

    def seed_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for cell in self.cells:
            counts[cell.p] = counts.get(cell.p, 0) + 1
        return counts

    def mean_probabilities(self, p: int) -> np.ndarray:
        return np.mean([c.record.probabilities for c in self.cells if c.p == p], axis=0)

    def curve(self, p: int, feasible_only: bool = False):
        return cumulative_curve(self.mean_probabilities(p), self.costs, self.feasible, feasible_only)

    def baseline_curve(self, feasible_only: bool = False):
        """Uniform random draw over all (or all feasible) solutions."""
        probs = self.feasible.astype(float) if feasible_only else np.ones(self.costs.size)
        return cumulative_curve(probs / probs.sum(), self.costs, self.feasible, feasible_only)


def make_config(variant: Variant, table: StrategyTable, p: int, seed: int, *, premix=None,
                randomize_initial: bool = False, max_evals: int | None = None) -> QaoaConfig:
    variant = Variant(variant)
    if variant is Variant.SOFT_X:
        if premix is not None or randomize_initial:
            raise ValueError("pre-mixing and initial-state randomisation apply to the hard variant only")
        return QaoaConfig.soft(p, seed=seed, max_evals=max_evals)
    regs = table.registers()
    bits = random_initial_bits(regs, seed) if randomize_initial else None
    return QaoaConfig.hard(table, p, premix_beta0=premix, initial_bits=bits, seed=seed, max_evals=max_evals)


def seed_list(seeds: int, seed_base: int = 0) -> list[int]:
    return [(seed_base + k) & ((1 << 64) - 1) for k in range(seeds)]


def sweep(game: Game, table: StrategyTable, objective: Objective, mode: Soft | Hard, p_list,
          seeds: int, *, seed_base: int = 0, premix=None, randomize_initial: bool = False,
          max_evals: int | None = None) -> SweepReport:
    """Run ``optimize`` for every (p, seed) and score against the oracle optimum.

    Soft mode runs the transverse-field variant on objective + penalty; hard
    mode runs the parity-mixer variant on the bare objective.
    """
    objective = Objective(objective)
    rows = evaluate_all(game, table)
    best = optimum(rows, objective)
    costs = np.array([r.cost(objective) for r in rows])
    feasible = np.array([r.feasible for r in rows])
    poly = assemble(objective, mode, game, table)
    table_values = poly.energies()
    variant = Variant.HARD_PARITY if isinstance(mode, Hard) else Variant.SOFT_X

    cells = []
    for p in p_list:
        for seed in seed_list(seeds, seed_base):
            cfg = make_config(variant, table, p, seed, premix=premix,
                              randomize_initial=randomize_initial, max_evals=max_evals)
            rec = optimize(cfg, table_values)
            cells.append(SweepCell(p, seed, rec, rec.most_probable == best.bits,
                                   float(rec.probabilities[best.index])))
    return SweepReport(objective, variant, best.bits, costs, feasible, cells)
