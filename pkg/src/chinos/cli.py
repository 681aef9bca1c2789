"""Command-line interface: ``chinos <command> [options]``.

Machine-readable output goes to ``--output`` (or stdout when omitted);
short human summaries go to stderr. Exit codes: 0 success, 2 invalid input,
3 unreadable or malformed data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import ChinosError, ParseError, ShapeError
from .games import averaged_probs, classical_game, classical_round, make_game, probability_table
from .metric import Order, metric_matrix, two_qubit_probabilities
from .shots import (
    NoiseModel,
    ShotConfig,
    bundled_path,
    calibrate_depolarizing,
    error_report,
    estimate_matrix,
    estimate_overlap,
    exact_population,
    excluded_cross_set_pairs,
    ingest_experimental,
)
from .strategy import crossing_angles, equilibrium_scan

EXIT_OK, EXIT_VALIDATION, EXIT_DATA = 0, 2, 3

_PI_RE = re.compile(r"^(?P<num>[+-]?(\d+(\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(/\s*(?P<den>\d+(\.\d*)?))?$")

DEFAULT_THETA = {"hardcore": math.pi / 4, "qubit": math.pi / 2, "two_qubit": 0.0}
SWEEP_RANGE = {"hardcore": (0.01, math.pi / 2 - 0.01), "qubit": (0.01, math.pi - 0.01), "two_qubit": (0.0, math.pi)}


class ValidationError(Exception):
    pass


def parse_theta(text: str) -> float:
    """Radians from a number or a multiple of pi such as ``pi/3``, ``2pi/3``, ``-pi/4``."""
    t = text.strip().lower()
    m = _PI_RE.match(t)
    if m:
        num = m.group("num")
        if num in (None, "", "+"):
            coef = 1.0
        elif num == "-":
            coef = -1.0
        else:
            coef = float(num)
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        return coef * math.pi / den
    try:
        value = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read angle {text!r}; use radians or forms like pi/3") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite, got {text!r}")
    return value


def fmt(x) -> str:
    return f"{float(x):.12g}"


def _default_seed() -> int:
    env = os.environ.get("CHINOS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"CHINOS_SEED must be an integer, got {env!r}") from None


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _theta_for(game: str, theta: float | None) -> float | None:
    if game in ("classical", "boson"):
        if theta is not None:
            raise ValidationError(f"game {game} takes no angle")
        return None
    return DEFAULT_THETA[game] if theta is None else theta


def cmd_table(args) -> int:
    if args.game == "classical":
        game = classical_game()
        rows = [["c_A", "c_B", "g_AB", "g_A", "g_B", "winner"]]
        data = []
        for cA in (0, 1):
            for cB in (0, 1):
                gA = 1
                gB = next(g for g in sorted(game.intelligence[cB]) if g != gA)
                win = classical_round(cA, cB, gA, gB, game)
                rows.append([cA, cB, cA + cB, gA, gB, win])
                data.append(dict(zip(rows[0], rows[-1])))
        text = json.dumps({"game": "classical", "rows": data}) + "\n" if args.format == "json" else _csv(rows)
        _emit(text, args.output)
        return EXIT_OK
    theta = _theta_for(args.game, args.theta)
    game = make_game(args.game, theta)
    table = probability_table(game)
    avg = averaged_probs(game, table=table)
    outs = ["".join(map(str, o)) if isinstance(o, tuple) else str(o) for o in game.guess_set]
    if args.format == "json":
        payload = {
            "game": game.name,
            "theta": theta,
            "outcomes": outs,
            "cells": [
                {"alice": i, "bob": j, "p": [float(fmt(x)) for x in table.cell(i, j)]}
                for i in game.choice_set for j in game.choice_set
            ],
            "average": [{"alice": i, "p": [float(fmt(x)) for x in avg.row(i)]} for i in game.choice_set],
        }
        _emit(json.dumps(payload) + "\n", args.output)
        return EXIT_OK
    rows = [["table", "alice", "bob"] + [f"p({o})" for o in outs]]
    for i in game.choice_set:
        for j in game.choice_set:
            rows.append(["cell", i, j] + [fmt(x) for x in table.cell(i, j)])
    for i in game.choice_set:
        rows.append(["average", i, "uniform"] + [fmt(x) for x in avg.row(i)])
    _emit(_csv(rows), args.output)
    return EXIT_OK


def _grid(game: str, args) -> np.ndarray:
    lo, hi = SWEEP_RANGE[game]
    start = lo if args.start is None else args.start
    stop = hi if args.stop is None else args.stop
    if args.points < 2:
        raise ValidationError("a sweep needs at least 2 points")
    if not stop > start:
        raise ValidationError("sweep stop must exceed start")
    return np.linspace(start, stop, args.points)


def cmd_sweep(args) -> int:
    grid = _grid(args.game, args)
    if args.game == "two_qubit":
        order = Order.parse(args.order)
        header = ["theta", "P_A", "P_B"]
        rows = []
        for t in grid:
            rep = two_qubit_probabilities(t, order)
            rows.append([fmt(t), fmt(rep.P_A), fmt(rep.P_B)])
        extra = {}
    else:
        header = None
        rows = []
        for t in grid:
            game = make_game(args.game, float(t))
            avg = averaged_probs(game)
            if header is None:
                header = ["theta"] + [f"<p{i}(0)>" for i in game.choice_set]
            rows.append([fmt(t)] + [fmt(avg.row(i)[0]) for i in game.choice_set])
        t1, t2 = crossing_angles(args.game)
        extra = {"theta1": t1, "theta2": t2}
        _note(f"crossings at 1/2: theta1={fmt(t1)} theta2={fmt(t2)}")
    if args.format == "json":
        payload = {"game": args.game, "columns": header, "rows": [[float(x) for x in r] for r in rows], **extra}
        _emit(json.dumps(payload) + "\n", args.output)
    else:
        _emit(_csv([header] + rows), args.output)
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    theta = _theta_for(args.game, args.theta)
    game = make_game(args.game, theta)
    if args.game == "two_qubit":
        from .games import two_qubit_game

        game = two_qubit_game(theta, Order.parse(args.order).value)
    rep = equilibrium_scan(game, max_iters=args.max_iters)
    _note(f"{rep.game}: stable={rep.stable} winner={rep.winner} P_A={fmt(rep.final.P_A)} P_B={fmt(rep.final.P_B)}")
    _emit(json.dumps(rep.to_dict()) + "\n", args.output)
    return EXIT_OK


def cmd_metric(args) -> int:
    theta = 0.0 if args.theta is None else args.theta
    G = metric_matrix(theta, Order.parse(args.order))
    text = G.to_json() + "\n" if args.format == "json" else G.to_csv()
    _emit(text, args.output)
    return EXIT_OK


def _parse_entry(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(re.fullmatch(r"[0-3]{2}", p) for p in parts):
        raise ValidationError(f"--entry expects two pair labels like 22,30, got {text!r}")
    return parts[0], parts[1]


def cmd_shots(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    theta = 0.0 if args.theta is None else args.theta
    if args.calibrate and args.noise is not None:
        raise ValidationError("use either --noise or --calibrate, not both")
    p = calibrate_depolarizing() if args.calibrate else (args.noise or 0.0)
    noise = NoiseModel.depolarizing(p) if p > 0 else NoiseModel()
    config = ShotConfig(args.shots, seed, noise)
    if args.entry:
        row, col = _parse_entry(args.entry)
        est, err = estimate_overlap(row, col, theta, config)
        payload = {"entry": [row, col], "theta": theta, "shots": args.shots, "seed": seed, "noise_p": p,
                   "estimate": est, "stderr": err, "exact": exact_population(row, col, theta, noise)}
        _note(f"|G[{row},{col}]|^2 ~ {fmt(est)} +- {fmt(err)} ({args.shots} shots)")
        _emit(json.dumps(payload) + "\n", args.output)
        return EXIT_OK
    est, err = estimate_matrix(theta, config)
    from .metric import LEX_LABELS, TABLE_ORDER

    perm = [LEX_LABELS.index(p_) for p_ in TABLE_ORDER]
    rows = [["G"] + list(TABLE_ORDER)] + [[lab] + [fmt(x) for x in est[r, perm]] for lab, r in zip(TABLE_ORDER, perm)]
    _emit(_csv(rows), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    path = args.exp or str(bundled_path())
    exp = ingest_experimental(path)
    theta = 0.0 if args.theta is None else args.theta
    rep = error_report(metric_matrix(theta), exp)
    payload = rep.to_dict()
    payload["source"] = exp.source_label
    payload["excluded_cross_set_pairs"] = [[p, q, v] for p, q, v in excluded_cross_set_pairs(exp, args.threshold)]
    _note(f"avg_err_on_units={fmt(rep.avg_err_on_units)} avg_err_on_zeros={fmt(rep.avg_err_on_zeros)} "
          f"max_err={fmt(rep.max_err)}")
    _emit(json.dumps(payload) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chinos", description="Classical and quantum Chinos game simulator.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="csv"):
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        sp.add_argument("--output", "-o", help="write machine output here instead of stdout")

    games = ("classical", "boson", "hardcore", "qubit", "two_qubit")
    t = sub.add_parser("table", help="per-move and averaged outcome probabilities")
    t.add_argument("--game", choices=games, required=True)
    t.add_argument("--theta", type=parse_theta)
    common(t)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("sweep", help="averaged probabilities or P_A, P_B over an angle grid")
    s.add_argument("--game", choices=("hardcore", "qubit", "two_qubit"), required=True)
    s.add_argument("--start", type=parse_theta)
    s.add_argument("--stop", type=parse_theta)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--order", choices=("bob_first", "alice_first"), default="bob_first")
    common(s)
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("equilibrium", help="iterated best-response scan")
    e.add_argument("--game", choices=("boson", "hardcore", "qubit", "two_qubit"), required=True)
    e.add_argument("--theta", type=parse_theta)
    e.add_argument("--order", choices=("bob_first", "alice_first"), default="bob_first")
    e.add_argument("--max-iters", type=int, default=20)
    e.add_argument("--output", "-o")
    e.set_defaults(func=cmd_equilibrium)

    m = sub.add_parser("metric", help="two-qubit metric matrix")
    m.add_argument("--theta", type=parse_theta)
    m.add_argument("--order", choices=("bob_first", "alice_first"), default="bob_first")
    common(m)
    m.set_defaults(func=cmd_metric)

    sh = sub.add_parser("shots", help="finite-shot estimates of |G|^2")
    sh.add_argument("--entry", help="row,col pair labels, e.g. 22,30; omit for the full matrix")
    sh.add_argument("--theta", type=parse_theta)
    sh.add_argument("--shots", type=int, default=8192)
    sh.add_argument("--seed", type=int, help="default: $CHINOS_SEED or 0")
    sh.add_argument("--noise", type=float, help="depolarizing strength per layer")
    sh.add_argument("--calibrate", action="store_true", help="use the strength fitted to the 0.964 headline value")
    sh.add_argument("--output", "-o")
    sh.set_defaults(func=cmd_shots)

    c = sub.add_parser("compare", help="error report of an experimental table against theory")
    c.add_argument("--exp", help="experimental CSV (default: the bundled hardware table)")
    c.add_argument("--theta", type=parse_theta)
    c.add_argument("--threshold", type=float, default=0.25)
    c.add_argument("--output", "-o")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ShapeError, OSError) as exc:
        _note(f"error: {exc}")
        return EXIT_DATA
    except (ValidationError, ValueError, ChinosError) as exc:
        _note(f"error: {exc}")
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
