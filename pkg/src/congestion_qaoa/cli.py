"""Command-line front end.

Exit status is 0 on success, 1 for usage errors and 2 for domain errors
(invalid game, no feasible solution, bad parameter values).
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from pathlib import Path

from .encode import Hard, Objective, Soft, assemble
from .game import GameError, enumerate_paths, load_game
from .oracle import InfeasibleError, evaluate_all, fmt, optimum, rows_to_csv, verify_nash
from .qaoa import QaoaConfig, SweepReport, heatmap, sweep


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _penalty(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("penalty must be a positive number")
    return value


def _p_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("layer counts must be positive integers")
    return values


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="congestion-qaoa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_objective(p, mode=True):
        p.add_argument("game", type=Path)
        p.add_argument("--objective", choices=["social", "nash"], required=True)
        if mode:
            p.add_argument("--mode", choices=["soft", "hard"], required=True)
            p.add_argument("--penalty", type=_penalty, default=None,
                           help="penalty weight for soft mode: 'auto' (default) or a positive number")
        return p

    p = sub.add_parser("paths", help="list every player's paths")
    p.add_argument("game", type=Path)

    p = with_objective(sub.add_parser("brute", help="evaluate every assignment by brute force"), mode=False)
    p.add_argument("--csv", type=Path)

    p = with_objective(sub.add_parser("compile", help="export the Ising model as JSON"))
    p.add_argument("--out", type=Path)

    p = with_objective(sub.add_parser("heatmap", help="p=1 expectation over a (beta, gamma) grid"))
    p.add_argument("--grid", type=_positive, default=64)
    p.add_argument("--premix", type=float, default=None)
    p.add_argument("--out", type=Path)

    p = with_objective(sub.add_parser("solve", help="optimise QAOA angles for several seeds"))
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--seeds", type=_positive, default=10)
    p.add_argument("--seed-base", type=_u64, default=0)
    p.add_argument("--max-evals", type=_positive, default=None)
    p.add_argument("--premix", type=float, default=None)
    p.add_argument("--randomize-initial", action="store_true")
    p.add_argument("--out", type=Path)

    p = with_objective(sub.add_parser("sweep", help="success counts over several layer counts"))
    p.add_argument("--p-list", type=_p_list, required=True)
    p.add_argument("--seeds", type=_positive, required=True)
    p.add_argument("--seed-base", type=_u64, default=0)
    p.add_argument("--max-evals", type=_positive, default=None)
    p.add_argument("--premix", type=float, default=None)
    p.add_argument("--randomize-initial", action="store_true")
    p.add_argument("--out", type=Path)
    return parser


def _validate(args) -> None:
    mode = getattr(args, "mode", None)
    if mode == "hard" and args.penalty is not None:
        raise UsageError("--penalty applies to --mode soft only")
    if mode == "soft":
        if getattr(args, "premix", None) is not None:
            raise UsageError("--premix applies to --mode hard only")
        if getattr(args, "randomize_initial", False):
            raise UsageError("--randomize-initial applies to --mode hard only")
    if args.command == "heatmap" and args.grid < 2:
        raise UsageError("--grid must be at least 2")


def _mode(args):
    if args.mode == "hard":
        return Hard()
    return Soft("auto" if args.penalty is None else args.penalty)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path: Path | None, text: str, out) -> None:
    if path is None:
        out.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _load(args):
    game = load_game(args.game.read_text(encoding="utf-8"))
    return game, enumerate_paths(game)


def cmd_paths(args, out):
    game, table = _load(args)
    for pl, paths in zip(game.players, table.paths):
        out.write(f"player {pl.id} {pl.origin}->{pl.dest}: {len(paths)} paths\n")
        for j, path in enumerate(paths):
            idx = table.var_index[(pl.id, j)]
            edges = ",".join(map(str, path.edge_ids))
            out.write(f"  [{j}] spin={idx} {path} edges={edges}\n")
    counts = ",".join(map(str, table.counts))
    out.write(f"players={game.n_players} paths={counts} spins={table.n_spins}\n")


def cmd_brute(args, out, err):
    game, table = _load(args)
    objective = Objective(args.objective)
    rows = evaluate_all(game, table)
    best = optimum(rows, objective)
    cert = verify_nash(game, table, best)
    _write(args.csv, rows_to_csv(rows), out)
    summary = out if args.csv is not None else err
    summary.write(f"total={len(rows)} feasible={sum(r.feasible for r in rows)}\n")
    summary.write(
        f"optimum objective={objective.value} bits={best.bitstring} cost={fmt(best.cost(objective))} "
        f"combined_utility={fmt(best.combined_utility)} "
        f"utilities={';'.join(fmt(u) for u in best.utilities)}\n"
    )
    summary.write(f"nash_equilibrium={'yes' if cert.is_nash else 'no'}\n")
    for i, (j, delta) in enumerate(cert.deviations):
        alt = "none" if j is None else f"{j}:{table.paths[i][j]}"
        summary.write(f"  player {i} best_deviation={alt} delta={fmt(delta)}\n")


def cmd_compile(args, out):
    game, table = _load(args)
    poly = assemble(Objective(args.objective), _mode(args), game, table)
    _write(args.out, poly.to_json(), out)


def cmd_heatmap(args, out):
    game, table = _load(args)
    objective = Objective(args.objective)
    mode = _mode(args)
    values = assemble(objective, mode, game, table).energies()
    if isinstance(mode, Hard):
        cfg = QaoaConfig.hard(table, 1, premix_beta0=args.premix)
    else:
        cfg = QaoaConfig.soft(1)
    grid = heatmap(cfg, values, args.grid)
    rows = [
        (fmt(b), fmt(g), fmt(grid.values[r, c]))
        for r, b in enumerate(grid.betas)
        for c, g in enumerate(grid.gammas)
    ]
    _write(args.out, _csv_text(["beta", "gamma", "expectation"], rows), out)


def _curve_csv(report: SweepReport, order, cum) -> str:
    rows = [
        (rank, fmt(report.costs[z]), fmt(cp), int(report.feasible[z]))
        for rank, (z, cp) in enumerate(zip(order, cum))
    ]
    return _csv_text(["rank", "cost", "cum_prob", "feasible"], rows)


def _write_curves(report: SweepReport, directory: Path, p: int, prefix: str) -> None:
    for feasible_only, tag in ((False, "all"), (True, "feasible")):
        order, cum = report.curve(p, feasible_only)
        (directory / f"{prefix}{tag}.csv").write_text(_curve_csv(report, order, cum), encoding="utf-8", newline="\n")


def _write_baselines(report: SweepReport, directory: Path) -> None:
    for feasible_only, tag in ((False, "all"), (True, "feasible")):
        order, cum = report.baseline_curve(feasible_only)
        (directory / f"baseline_{tag}.csv").write_text(_curve_csv(report, order, cum), encoding="utf-8", newline="\n")


def _run_sweep(args, p_list):
    game, table = _load(args)
    return sweep(
        game, table, Objective(args.objective), _mode(args), p_list, args.seeds,
        seed_base=args.seed_base,
        premix=args.premix,
        randomize_initial=args.randomize_initial,
        max_evals=args.max_evals,
    )


def _record_json(cell) -> dict:
    rec = cell.record
    cfg = rec.config
    return {
        "seed": cell.seed,
        "p": cell.p,
        "variant": cfg.variant.value,
        "premix_beta0": cfg.premix_beta0,
        "initial_bits": None if cfg.initial_bits is None else "".join(map(str, cfg.initial_bits)),
        "max_evals": cfg.budget,
        "initial_angles": {"betas": rec.initial_angles.betas.tolist(), "gammas": rec.initial_angles.gammas.tolist()},
        "best_angles": {"betas": rec.best_angles.betas.tolist(), "gammas": rec.best_angles.gammas.tolist()},
        "best_expectation": rec.best_expectation,
        "most_probable_bits": rec.most_probable_bits,
        "is_optimal": cell.is_optimal,
        "p_optimal_state": cell.p_optimal,
        "evaluations": len(rec.trace),
        "trace": [v for _, v in rec.trace],
        "probabilities": rec.probabilities.tolist(),
    }


def cmd_solve(args, out):
    report = _run_sweep(args, [args.p])
    rows = [
        (c.seed, fmt(c.record.best_expectation), c.record.most_probable_bits, int(c.is_optimal), fmt(c.p_optimal))
        for c in report.cells
    ]
    runs = _csv_text(["seed", "best_expectation", "most_probable_bits", "is_optimal", "p_optimal_state"], rows)
    success = report.success_counts()[args.p]
    opt = "".join(map(str, report.optimum_bits))
    if args.out is None:
        out.write(runs)
    else:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "runs.csv").write_text(runs, encoding="utf-8", newline="\n")
        _write_curves(report, args.out, args.p, "cumulative_")
        _write_baselines(report, args.out)
        records = [_record_json(c) for c in report.cells]
        (args.out / "records.json").write_text(json.dumps(records, indent=1) + "\n", encoding="utf-8")
    out.write(f"optimum={opt} success={success}/{len(report.cells)}\n")


def cmd_sweep(args, out):
    report = _run_sweep(args, args.p_list)
    counts, seeds = report.success_counts(), report.seed_counts()
    summary = _csv_text(["p", "seed_count", "success_count"], [(p, seeds[p], counts[p]) for p in args.p_list])
    if args.out is None:
        out.write(summary)
        return
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "summary.csv").write_text(summary, encoding="utf-8", newline="\n")
    for p in args.p_list:
        _write_curves(report, args.out, p, f"cumulative_p{p}_")
    _write_baselines(report, args.out)
    out.write(summary)


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        if args.command == "paths":
            cmd_paths(args, out)
        elif args.command == "brute":
            cmd_brute(args, out, err)
        elif args.command == "compile":
            cmd_compile(args, out)
        elif args.command == "heatmap":
            cmd_heatmap(args, out)
        elif args.command == "solve":
            cmd_solve(args, out)
        elif args.command == "sweep":
            cmd_sweep(args, out)
    except UsageError as exc:
        err.write(f"congestion-qaoa: error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"congestion-qaoa: error: {exc}\n")
        return 2
    except (GameError, InfeasibleError, ValueError) as exc:
        err.write(f"congestion-qaoa: error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
