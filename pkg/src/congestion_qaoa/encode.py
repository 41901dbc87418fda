"""Compile congestion-game objectives and constraints into Ising polynomials.

Everything is expressed over spins ``s = 2x - 1``. The load on a resource is
affine in the spins, both objectives are quadratic in the loads, and squares
of spins are folded into the constant, so every compiled cost closes at
degree two: ``C(s) = c + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .game import Game, StrategyTable

MAX_SCAN_SPINS = 24


def spin_of(bit: int) -> int:
    return 2 * bit - 1


def bit_of(spin: int) -> int:
    return (spin + 1) // 2


def all_bits(n: int) -> np.ndarray:
    """Every bitstring of length ``n`` as rows, in ascending binary order.

    Column ``i`` is spin variable ``i``; column 0 is the most significant bit.
    """
    z = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((z[:, None] >> shifts) & 1).astype(np.int8)


def all_spins(n: int) -> np.ndarray:
    return 2 * all_bits(n) - 1


@dataclass
class SpinPolynomial:
    c: float
    h: np.ndarray
    J: np.ndarray

    @classmethod
    def zero(cls, n: int) -> SpinPolynomial:
        return cls(0.0, np.zeros(n), np.zeros((n, n)))

    @property
    def n(self) -> int:
        return len(self.h)

    def __post_init__(self):
        self.c = float(self.c)
        self.h = np.asarray(self.h, dtype=float)
        self.J = np.asarray(self.J, dtype=float)
        if self.J.shape != (self.n, self.n):
            raise ValueError(f"coupling matrix must be {self.n}x{self.n}, got {self.J.shape}")
        if np.any(np.tril(self.J) != 0):
            raise ValueError("coupling matrix must be strictly upper triangular")

    def __add__(self, other: SpinPolynomial) -> SpinPolynomial:
        if other.n != self.n:
            raise ValueError("spin counts differ")
        return SpinPolynomial(self.c + other.c, self.h + other.h, self.J + other.J)

    def scaled(self, factor: float) -> SpinPolynomial:
        return SpinPolynomial(factor * self.c, factor * self.h, factor * self.J)

    def evaluate(self, spins) -> np.ndarray | float:
        """Value at one spin vector, or at each row of a 2-D array of them."""
        s = np.asarray(spins, dtype=float)
        val = self.c + s @ self.h + np.einsum("...i,ij,...j->...", s, self.J, s)
        return float(val) if s.ndim == 1 else val

    def energies(self) -> np.ndarray:
        """Cost of every assignment, indexed by the binary value of its bits."""
        if self.n > MAX_SCAN_SPINS:
            raise ValueError(f"{self.n} spins is too many to tabulate (limit {MAX_SCAN_SPINS})")
        return self.evaluate(all_spins(self.n))

    def n_couplings(self, tol: float = 1e-12) -> int:
        return int(np.count_nonzero(np.abs(self.J) > tol))

    def to_json(self) -> str:
        ii, jj = np.nonzero(self.J)
        doc = {
            "n": self.n,
            "c": self.c,
            "h": self.h.tolist(),
            "J": [{"i": int(i), "j": int(j), "v": float(self.J[i, j])} for i, j in zip(ii, jj)],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SpinPolynomial:
        doc = json.loads(text)
        n = doc["n"]
        J = np.zeros((n, n))
        for term in doc["J"]:
            i, j = term["i"], term["j"]
            if not i < j:
                raise ValueError(f"coupling ({i},{j}) must have i < j")
            J[i, j] = term["v"]
        return cls(doc["c"], np.array(doc["h"], dtype=float), J)


@dataclass
class AffineSpin:
    """``const + coef . s``; used for resource loads and constraint residuals."""

    const: float
    coef: np.ndarray

    def squared(self) -> SpinPolynomial:
        return self.times(self)

    def times(self, other: AffineSpin) -> SpinPolynomial:
        outer = np.outer(self.coef, other.coef)
        # s_i * s_i = 1
        c = self.const * other.const + np.trace(outer)
        h = self.const * other.coef + other.const * self.coef
        J = np.triu(outer + outer.T, k=1)
        return SpinPolynomial(c, h, J)

    def as_polynomial(self) -> SpinPolynomial:
        n = len(self.coef)
        return SpinPolynomial(self.const, self.coef.copy(), np.zeros((n, n)))


class Objective(enum.Enum):
    SOCIAL = "social"
    NASH = "nash"


@dataclass(frozen=True)
class Soft:
    """Penalty formulation. ``penalty`` is a positive real or ``"auto"``."""

    penalty: float | str = "auto"

    def __post_init__(self):
        if self.penalty == "auto":
            return
        if isinstance(self.penalty, str) or not self.penalty > 0:
            raise ValueError(f"penalty must be positive or 'auto', got {self.penalty!r}")


@dataclass(frozen=True)
class Hard:
    """Constraint handled by the mixer; cost is the bare objective."""


def congestion_terms(table: StrategyTable, k: int) -> AffineSpin:
    """Load on resource ``k``: one half of (1 + s) summed over paths using ``k``."""
    coef = np.zeros(table.n_spins)
    for idx, _, _, path in table.variables():
        if k in path.edge_ids:
            coef[idx] = 0.5
    return AffineSpin(float(coef.sum()), coef)


def compile_social(game: Game, table: StrategyTable) -> SpinPolynomial:
    """Total delay: sum over resources of load * (a + b * load)."""
    total = SpinPolynomial.zero(table.n_spins)
    for e in game.edges:
        load = congestion_terms(table, e.id)
        total = total + load.as_polynomial().scaled(e.a) + load.squared().scaled(e.b)
    return total


def compile_nash(game: Game, table: StrategyTable) -> SpinPolynomial:
    """Rosenthal potential with the inner delay sum closed as a triangular number."""
    total = SpinPolynomial.zero(table.n_spins)
    for e in game.edges:
        load = congestion_terms(table, e.id)
        total = total + load.as_polynomial().scaled(e.a + e.b / 2) + load.squared().scaled(e.b / 2)
    return total


def compile_path_penalty(table: StrategyTable, A: float) -> SpinPolynomial:
    """``A * sum_i (sum_j s_ij + |S_i| - 2)^2``; zero iff every player is one-hot."""
    if not A > 0:
        raise ValueError(f"penalty must be positive, got {A}")
    total = SpinPolynomial.zero(table.n_spins)
    for reg in table.registers():
        coef = np.zeros(table.n_spins)
        coef[reg] = 1.0
        total = total + AffineSpin(len(reg) - 2.0, coef).squared()
    return total.scaled(A)


def compile_objective(objective: Objective, game: Game, table: StrategyTable) -> SpinPolynomial:
    objective = Objective(objective)
    if objective is Objective.SOCIAL:
        return compile_social(game, table)
    return compile_nash(game, table)


def auto_penalty(cost: SpinPolynomial) -> float:
    """Penalty weight one unit above the full range of ``cost`` over all assignments."""
    if cost.n > MAX_SCAN_SPINS:
        raise ValueError("spin count too large for exhaustive penalty scan")
    e = cost.energies()
    return float(e.max() - e.min()) + 1.0


def assemble(objective: Objective, mode: Soft | Hard, game: Game, table: StrategyTable) -> SpinPolynomial:
    cost = compile_objective(objective, game, table)
    if isinstance(mode, Hard):
        return cost
    if not isinstance(mode, Soft):
        raise TypeError(f"unknown constraint mode {mode!r}")
    A = auto_penalty(cost) if mode.penalty == "auto" else float(mode.penalty)
    return cost + compile_path_penalty(table, A)


def resolve_penalty(objective: Objective, mode: Soft, game: Game, table: StrategyTable) -> float:
    if mode.penalty == "auto":
        return auto_penalty(compile_objective(objective, game, table))
    return float(mode.penalty)
