"""Brute-force ground truth computed from first principles.

Nothing here touches the compiled polynomials: loads are counted from the
selected paths, costs and utilities are summed directly from the delay
functions. That independence is what lets the oracle check the compiler.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .encode import MAX_SCAN_SPINS, Objective, all_bits
from .game import Game, StrategyTable


class InfeasibleError(ValueError):
    pass


@dataclass
class SolutionRow:
    bits: tuple[int, ...]
    feasible: bool
    social_cost: float
    nash_cost: float
    utilities: tuple[float, ...] | None = None

    @property
    def combined_utility(self) -> float | None:
        return None if self.utilities is None else sum(self.utilities)

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    @property
    def index(self) -> int:
        return int(self.bitstring, 2)

    def cost(self, objective: Objective) -> float:
        return self.social_cost if Objective(objective) is Objective.SOCIAL else self.nash_cost


@dataclass
class NashCertificate:
    is_nash: bool
    # per player: (best alternative path index or None, utility change if taken)
    deviations: list[tuple[int | None, float]] = field(default_factory=list)


def loads(game: Game, table: StrategyTable, bits) -> list[int]:
    """Players per resource, counting every selected (player, path) bit."""
    n = [0] * game.n_resources
    for idx, _, _, path in table.variables():
        if bits[idx]:
            for k in path.edge_ids:
                n[k] += 1
    return n


def social_cost(game: Game, table: StrategyTable, bits) -> float:
    n = loads(game, table, bits)
    return sum(n[e.id] * e.delay(n[e.id]) for e in game.edges)


def nash_cost(game: Game, table: StrategyTable, bits) -> float:
    n = loads(game, table, bits)
    total = 0.0
    for e in game.edges:
        for j in range(1, n[e.id] + 1):
            total += e.delay(j)
    return total


def path_violation(table: StrategyTable, bits) -> float:
    """Unscaled penalty: sum over players of (selected paths - 1)^2, spin form."""
    total = 0.0
    for reg in table.registers():
        spins = [2 * bits[i] - 1 for i in reg]
        total += (sum(spins) + len(reg) - 2) ** 2
    return total


def is_feasible(table: StrategyTable, bits) -> bool:
    return all(sum(bits[i] for i in reg) == 1 for reg in table.registers())


def choices(table: StrategyTable, bits) -> list[int]:
    """Selected path index per player; bits must be feasible."""
    out = []
    for reg in table.registers():
        sel = [j for j, i in enumerate(reg) if bits[i]]
        if len(sel) != 1:
            raise InfeasibleError("assignment is not one-hot per player")
        out.append(sel[0])
    return out


def bits_for(table: StrategyTable, choice) -> tuple[int, ...]:
    bits = [0] * table.n_spins
    for i, j in enumerate(choice):
        bits[table.var_index[(i, j)]] = 1
    return tuple(bits)


def player_utilities(game: Game, table: StrategyTable, choice) -> list[float]:
    n = [0] * game.n_resources
    for i, j in enumerate(choice):
        for k in table.paths[i][j].edge_ids:
            n[k] += 1
    return [
        sum(game.edges[k].delay(n[k]) for k in table.paths[i][j].edge_ids)
        for i, j in enumerate(choice)
    ]


def evaluate_all(game: Game, table: StrategyTable) -> list[SolutionRow]:
    """One row per assignment, ascending binary order."""
    if table.n_spins > MAX_SCAN_SPINS:
        raise ValueError(f"{table.n_spins} spins is too many for brute force (limit {MAX_SCAN_SPINS})")
    rows = []
    for bits in all_bits(table.n_spins):
        bits = tuple(int(b) for b in bits)
        feasible = is_feasible(table, bits)
        utils = tuple(player_utilities(game, table, choices(table, bits))) if feasible else None
        rows.append(SolutionRow(bits, feasible, social_cost(game, table, bits), nash_cost(game, table, bits), utils))
    return rows


def optimum(rows: list[SolutionRow], objective: Objective) -> SolutionRow:
    """Cheapest feasible row; ties go to the smallest binary value."""
    best = None
    for row in rows:
        if not row.feasible:
            continue
        if best is None or row.cost(objective) < best.cost(objective) or (
            row.cost(objective) == best.cost(objective) and row.index < best.index
        ):
            best = row
    if best is None:
        raise InfeasibleError("no feasible solution")
    return best


def verify_nash(game: Game, table: StrategyTable, row: SolutionRow) -> NashCertificate:
    """Check that no player gains by switching path alone.

    For each player the certificate holds the best alternative path and the
    change in that player's delay; a negative change is an improving move.
    """
    choice = choices(table, row.bits)
    base = player_utilities(game, table, choice)
    deviations = []
    is_nash = True
    for i in range(game.n_players):
        best_j, best_delta = None, np.inf
        for j in range(len(table.paths[i])):
            if j == choice[i]:
                continue
            alt = list(choice)
            alt[i] = j
            delta = player_utilities(game, table, alt)[i] - base[i]
            if delta < best_delta:
                best_j, best_delta = j, delta
        if best_j is None:
            best_delta = 0.0
        # tolerate float noise when the move is a tie
        if best_delta < -1e-12:
            is_nash = False
        deviations.append((best_j, float(best_delta)))
    return NashCertificate(is_nash, deviations)


def rows_to_csv(rows: list[SolutionRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bits", "feasible", "social_cost", "nash_cost", "combined_utility", "per_player_utilities"])
    for r in rows:
        w.writerow([
            r.bitstring,
            int(r.feasible),
            fmt(r.social_cost),
            fmt(r.nash_cost),
            "" if r.utilities is None else fmt(r.combined_utility),
            "" if r.utilities is None else ";".join(fmt(u) for u in r.utilities),
        ])
    return buf.getvalue()


def fmt(x: float) -> str:
    """12 significant digits, normalised so -0 prints as 0."""
    s = f"{x:.12g}"
    return "0" if s == "-0" else s
