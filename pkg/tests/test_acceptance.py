"""Exit criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line for each in
the terminal summary.
"""
import io
import time

import numpy as np
import pytest

from congestion_qaoa import (
    Hard,
    Soft,
    assemble,
    bundled_game_text,
    compile_nash,
    compile_path_penalty,
    compile_social,
    evaluate_all,
    optimum,
    qsim,
    verify_nash,
)
from congestion_qaoa import oracle
from congestion_qaoa.cli import main
from congestion_qaoa.encode import all_bits
from congestion_qaoa.qaoa import AngleVector, QaoaConfig, heatmap, run_circuit, sweep

TOL = 1e-9


def feasible_mask(table):
    bits = all_bits(table.n_spins)
    return np.all([bits[:, r].sum(axis=1) == 1 for r in table.registers()], axis=0)


def test_criterion_1_structure(tmp_path):
    """paths reports 4/2 paths and 6 spins; brute reports 64 rows, 8 feasible; each < 1 s"""
    path = tmp_path / "game.json"
    path.write_text(bundled_game_text())

    t0 = time.perf_counter()
    out = io.StringIO()
    assert main(["paths", str(path)], out=out, err=io.StringIO()) == 0
    assert time.perf_counter() - t0 < 1.0
    lines = out.getvalue().splitlines()
    assert lines[0].endswith(": 4 paths") and lines[5].endswith(": 2 paths")
    assert lines[-1] == "players=2 paths=4,2 spins=6"

    t0 = time.perf_counter()
    out, err = io.StringIO(), io.StringIO()
    assert main(["brute", str(path), "--objective", "nash"], out=out, err=err) == 0
    assert time.perf_counter() - t0 < 1.0
    body = out.getvalue().splitlines()[1:]
    assert len(body) == 64
    assert sum(line.split(",")[1] == "1" for line in body) == 8
    assert "total=64 feasible=8" in err.getvalue()


def test_criterion_2_oracle_equivalence(games):
    """compiled social, Nash and penalty polynomials equal direct evaluation (1e-9), < 30 s"""
    assert len(games) >= 21
    t0 = time.perf_counter()
    for _, game, table in games:
        assert table.n_spins <= 12
        assert all(0 <= e.a <= 1 and 0 <= e.b <= 1 for e in game.edges)
        bits = [tuple(b) for b in all_bits(table.n_spins)]
        social = compile_social(game, table).energies()
        nash = compile_nash(game, table).energies()
        pen = compile_path_penalty(table, 1.0).energies()
        for z, b in enumerate(bits):
            assert abs(social[z] - oracle.social_cost(game, table, b)) <= TOL
            assert abs(nash[z] - oracle.nash_cost(game, table, b)) <= TOL
            assert abs(pen[z] - oracle.path_violation(table, b)) <= TOL
    assert time.perf_counter() - t0 < 30.0


def test_criterion_3_potential(games, game, table):
    """unilateral deviations move the potential by the mover's delay change; minimisers are equilibria"""
    for _, g, t in games:
        rows = evaluate_all(g, t)
        feasible = [r for r in rows if r.feasible]
        for row in feasible:
            choice = oracle.choices(t, row.bits)
            for i in range(g.n_players):
                for j in range(len(t.paths[i])):
                    alt = list(choice)
                    alt[i] = j
                    d_pot = oracle.nash_cost(g, t, oracle.bits_for(t, alt)) - row.nash_cost
                    d_u = oracle.player_utilities(g, t, alt)[i] - row.utilities[i]
                    assert abs(d_pot - d_u) <= TOL
        low = min(r.nash_cost for r in feasible)
        for r in feasible:
            if r.nash_cost <= low + TOL:
                assert verify_nash(g, t, r).is_nash
    rows = evaluate_all(game, table)
    assert optimum(rows, "social").combined_utility < optimum(rows, "nash").combined_utility


@pytest.mark.parametrize("objective", ["social", "nash"])
def test_criterion_4_penalty_separation(games, objective):
    """with the automatic penalty every infeasible soft cost exceeds every feasible one"""
    for _, game, table in games:
        energies = assemble(objective, Soft("auto"), game, table).energies()
        mask = feasible_mask(table)
        assert energies[~mask].min() > energies[mask].max()


def test_criterion_5_hard_feasibility(game, table):
    """parity-mixer runs at p = 1, 3, 8 with 20 random angle draws keep infeasible mass < 1e-9"""
    mask = feasible_mask(table)
    rng = np.random.default_rng(5)
    for objective in ("social", "nash"):
        values = assemble(objective, Hard(), game, table).energies()
        for p in (1, 3, 8):
            for _ in range(20):
                angles = AngleVector(rng.uniform(0, np.pi, p), rng.uniform(0, 2 * np.pi, p))
                layers = []
                run_circuit(QaoaConfig.hard(table, p), angles, values, layers=layers)
                for state in layers:
                    assert qsim.probabilities(state)[~mask].sum() < 1e-9


def test_criterion_6_gamma_invariance(game, table):
    """hard heat map: rows flat to 1e-9 without pre-mix; some row varies > 1e-3 with beta0 = pi/8"""
    values = assemble("nash", Hard(), game, table).energies()
    flat = heatmap(QaoaConfig.hard(table, 1), values, 64)
    assert np.ptp(flat.values, axis=1).max() < 1e-9
    mixed = heatmap(QaoaConfig.hard(table, 1, premix_beta0=np.pi / 8), values, 64)
    assert np.ptp(mixed.values, axis=1).max() > 1e-3


def test_criterion_7_appendix_bounds(games):
    """nonzero couplings <= r (n pmax)^2 for the objectives and <= n pmax^2 for the penalty"""
    for _, game, table in games:
        n, r, pmax = game.n_players, game.n_resources, table.max_paths
        assert compile_social(game, table).n_couplings() <= r * (n * pmax) ** 2
        assert compile_nash(game, table).n_couplings() <= r * (n * pmax) ** 2
        assert compile_path_penalty(table, 1.0).n_couplings() <= n * pmax**2


@pytest.fixture(scope="module")
def table1(game, table):
    """p = 8, 10 seeds, default budget, for every objective and mode."""
    t0 = time.perf_counter()
    reports = {
        (objective, mode): sweep(game, table, objective, Hard() if mode == "hard" else Soft(), [8], 10)
        for objective in ("nash", "social")
        for mode in ("hard", "soft")
    }
    return reports, time.perf_counter() - t0


def test_criterion_8a_hard_nash(table1):
    """hard/Nash p = 8: optimum is the most probable state in >= 7/10 seeds"""
    reports, _ = table1
    assert reports[("nash", "hard")].success_counts()[8] >= 7


def test_criterion_8b_hard_social(table1):
    """hard/social p = 8: optimum is the most probable state in >= 7/10 seeds"""
    reports, _ = table1
    assert reports[("social", "hard")].success_counts()[8] >= 7


@pytest.mark.parametrize("objective", ["nash", "social"])
def test_criterion_8c_soft_beats_uniform(table1, objective):
    """soft p = 8: probability on the optimum exceeds 1/64 in >= 8/10 seeds"""
    reports, _ = table1
    beats = sum(c.p_optimal > 1 / 64 for c in reports[(objective, "soft")].cells)
    assert beats >= 8, f"{beats}/10 seeds beat the uniform baseline"


def test_criterion_8d_runtime(table1):
    """all four p = 8 sweeps finish in under 5 minutes"""
    _, elapsed = table1
    assert elapsed < 300


def test_criterion_9_simulator_identities(game, table):
    """identity angles, parity-subspace invariance and plus-state mean hold to 1e-12"""
    exact = 1e-12
    values = assemble("nash", Soft(), game, table).energies()
    plus = qsim.plus_state(6)
    assert np.allclose(qsim.probabilities(plus), 1 / 64, atol=exact)
    assert np.allclose(qsim.plus_state(1).amps, [2**-0.5] * 2, atol=exact)
    assert qsim.basis_state([1, 0]).amps[2] == 1
    assert np.allclose(qsim.apply_cost_phase(plus, values, 0.0).amps, plus.amps, atol=exact)
    assert np.allclose(qsim.probabilities(qsim.apply_cost_phase(plus, values, 2.1)), 1 / 64, atol=exact)
    assert np.allclose(qsim.apply_x_mixer(plus, 0.0).amps, plus.amps, atol=exact)
    assert abs(abs(np.vdot(plus.amps, qsim.apply_x_mixer(plus, 1.2).amps)) - 1) < exact
    for bits in ([0, 0], [1, 1]):
        s = qsim.basis_state(bits)
        assert np.allclose(qsim.apply_xy_pair(s, 0, 1, 0.9).amps, s.amps, atol=exact)
    s = qsim.basis_state([0, 1, 0])
    assert np.allclose(qsim.apply_xy_pair(s, 0, 2, 0.0).amps, s.amps, atol=exact)
    assert np.array_equal(qsim.apply_parity_mixer(s, [1], 0.7).amps, s.amps)
    assert abs(qsim.expectation(plus, values) - values.mean()) < exact
    z = 0b100001
    assert qsim.expectation(qsim.basis_state([1, 0, 0, 0, 0, 1]), values) == values[z]
    state = run_circuit(QaoaConfig.soft(1), AngleVector([0.0], [0.0]), values)
    assert abs(qsim.expectation(state, values) - values.mean()) < exact
