"""Command-line frontend.

Every computation is exposed as a deterministic, scriptable subcommand
emitting CSV (default) or JSON.  Identical invocations, including the
seed, produce byte-identical output.  Exit codes: 0 on success, 1 on a
computation error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

from . import __version__, bell, dicke, monogamy, persistency, qccr, qstate

_SYMBOLIC = {
    "sqrt2": math.sqrt(2.0),
    "pi": math.pi,
    "pi/2": math.pi / 2.0,
}


def _parse_scalar(token: str) -> float:
    if token in _SYMBOLIC:
        return _SYMBOLIC[token]
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cannot parse {token!r}; use a number or one of {sorted(_SYMBOLIC)}"
        )


def _parse_range(token: str) -> list[int]:
    lo, sep, hi = token.partition(":")
    try:
        if sep:
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(lo)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse range {token!r}; use LO:HI")
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {token!r}")
    return values


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _emit(args, rows: list[dict], fields: list[str]) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
        text = buf.getvalue()
    else:
        payload = {
            "version": __version__,
            "command": args.command_path,
            "config": {
                k: v
                for k, v in sorted(vars(args).items())
                if k not in ("func", "command_path", "format", "output")
                and v is not None
            },
            "rows": [{k: _fmt(v) for k, v in row.items()} for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.output:
        directory = os.path.dirname(os.path.abspath(args.output))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, args.output)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _cmd_gamma_crit(args) -> None:
    tol = args.tolerance if args.tolerance else 1e-8
    rows = []
    for token in args.a:
        a = _parse_scalar(token)
        if a <= 1.0:
            raise UsageError(f"growth base must exceed 1, got {token!r}")
        gamma = persistency.gamma_crit(a, tol=tol)
        residual = persistency.binary_entropy(gamma) - gamma * math.log2(a)
        rows.append({"a": a, "gamma_crit": gamma, "residual": residual})
    _emit(args, rows, ["a", "gamma_crit", "residual"])


def _cmd_dicke_table(args) -> None:
    rows = []
    for m in args.m_range:
        fit = dicke.fit_n0_line(m, args.l_range)
        rows.append(
            {
                "M": m,
                "a": fit.slope,
                "b": fit.intercept,
                "residual": fit.rms_residual,
                "fraction": 1.0 / fit.slope,
            }
        )
    _emit(args, rows, ["M", "a", "b", "residual", "fraction"])


def _cmd_dicke_n0(args) -> None:
    rows = [
        {"M": args.m, "L": l, "N0": dicke.solve_n0(args.m, l)} for l in args.l_range
    ]
    _emit(args, rows, ["M", "L", "N0"])


def _cmd_dicke_sigma(args) -> None:
    value = dicke.sigma_sum(args.n, args.m, args.l)
    rows = [
        {
            "N": args.n,
            "M": args.m,
            "L": args.l,
            "sigma": value,
            "sigma_float": float(value),
            "violation_possible": bool(value > 1),
        }
    ]
    _emit(args, rows, ["N", "M", "L", "sigma", "sigma_float", "violation_possible"])


def _cmd_persistency_ghz(args) -> None:
    model = persistency.QcrModel.makb() if args.family == "makb" else persistency.QcrModel.gbi()
    rows = []
    for n in args.n:
        result = persistency.ghz_persistency(model, n, exact=not args.asymptotic or None)
        rows.append(
            {
                "N": n,
                "family": args.family,
                "max_traced": result.max_traced,
                "witness_M": result.witness_m,
                "margin": result.margin,
            }
        )
    _emit(args, rows, ["N", "family", "max_traced", "witness_M", "margin"])


def _cmd_persistency_dicke(args) -> None:
    rows = []
    for n in args.n:
        result = persistency.dicke_persistency(n, args.m)
        rows.append(
            {
                "N": n,
                "M": args.m,
                "max_traced": result.max_traced,
                "persistency_lower_bound": result.max_traced + 1,
                "margin": result.margin,
            }
        )
    _emit(args, rows, ["N", "M", "max_traced", "persistency_lower_bound", "margin"])


def _cmd_gbi_constants(args) -> None:
    rows = []
    for n in range(2, args.max_n + 1):
        c = bell.gbi_classical(n)
        rows.append(
            {
                "n": n,
                "classical": c,
                "classical_float": float(c),
                "quantum": bell.gbi_quantum(n),
                "qcr": bell.gbi_qcr(n),
            }
        )
    _emit(args, rows, ["n", "classical", "classical_float", "quantum", "qcr"])


def _cmd_makb_qcr(args) -> None:
    rows = []
    for n in args.n_range:
        f = bell.makb(n)
        lr = bell.lr_max(f)
        a, ap = bell.makb_xy_settings(n)
        pair = (qstate.PlaneObservable.xy_turns(a), qstate.PlaneObservable.xy_turns(ap))
        state = qstate.ghz_state(n, phase=bell.makb_alignment_phase(n))
        quantum = bell.quantum_value(f, state, [pair] * n)
        rows.append({"n": n, "lr_max": lr, "quantum": quantum, "qcr": quantum / lr})
    _emit(args, rows, ["n", "lr_max", "quantum", "qcr"])


def _cmd_makb_coefficients(args) -> None:
    f = bell.makb(args.n)
    rows = [
        {"settings": "".join(map(str, key)), "coefficient": float(value)}
        for key, value in sorted(f.coefficients.items())
    ]
    _emit(args, rows, ["settings", "coefficient"])


def _cmd_monogamy_bound(args) -> None:
    with open(args.file, "r", encoding="utf-8") as handle:
        operators = monogamy.parse_pauli_lines(handle.read())
    graph = monogamy.build_graph(operators)
    bound = monogamy.independence_number(graph)
    rows = [
        {
            "operators": len(operators),
            "qubits": len(operators[0]),
            "edges": int(graph.adjacency.sum()) // 2,
            "bound": bound,
        }
    ]
    _emit(args, rows, ["operators", "qubits", "edges", "bound"])


def _cmd_qccr_simulate(args) -> None:
    with open(args.game, "r", encoding="utf-8") as handle:
        game = qccr.game_from_json(handle.read())
    subset = None
    if args.subset:
        subset = [int(tok) for tok in args.subset.split(",")]
    seed = args.seed if args.seed is not None else 0
    result = qccr.simulate(
        game, trials=args.trials, seed=seed, subset=subset, jobs=args.jobs or 1
    )
    rows = [
        {
            "game": result.game,
            "subset": "+".join(map(str, result.subset)),
            "trials": result.trials,
            "seed": result.seed,
            "success": result.success_rate,
            "stderr": result.stderr,
            "analytic": qccr.quantum_success(game, subset),
            "classical_best": qccr.classical_best(game)
            if game.functional.settings_per_party == 2
            and game.n_parties <= bell.LR_MAX_PARTY_CAP
            else "",
        }
    ]
    _emit(
        args,
        rows,
        ["game", "subset", "trials", "seed", "success", "stderr", "analytic", "classical_best"],
    )


def _cmd_qccr_feasibility(args) -> None:
    with open(args.dist, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    dist = {tuple(int(ch) for ch in key): Fraction(value) for key, value in raw.items()}
    result = qccr.marginal_feasibility(dist, args.n_total)
    rows = [
        {
            "k": result.k,
            "N": result.n_parties,
            "feasible": result.feasible,
            "witness": ";".join(_fmt(q) for q in result.witness) if result.witness else "",
            "certificate": ";".join(_fmt(y) for y in result.certificate)
            if result.certificate
            else "",
            "reason": result.reason,
        }
    ]
    _emit(args, rows, ["k", "N", "feasible", "witness", "certificate", "reason"])


def _cmd_qccr_make_game(args) -> None:
    if args.type == "chsh":
        game = qccr.chsh_game()
    elif args.type == "makb":
        game = qccr.makb_game(args.n, args.n_total)
    else:
        game = qccr.gbi_game(args.n, args.grid)
    text = qccr.game_to_json(game) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


class UsageError(Exception):
    pass


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", help="write output atomically to this path")
    parser.add_argument("--seed", type=int, help="RNG seed recorded in the output")
    parser.add_argument("--jobs", type=int, help="parallel worker streams")
    parser.add_argument("--tolerance", type=float, help="numeric tolerance override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellpersist",
        description="Persistency of multipartite Bell correlations: thresholds, "
        "Dicke reductions, monogamy bounds, and game simulation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma-crit", help="critical preserved fraction for ratio growth a")
    p.add_argument("--a", action="append", required=True, help="growth base (number, sqrt2, pi/2)")
    _add_common(p)
    p.set_defaults(func=_cmd_gamma_crit, command_path="gamma-crit")

    dicke_p = sub.add_parser("dicke", help="Dicke-state correlation sums and fits")
    dicke_sub = dicke_p.add_subparsers(dest="subcommand", required=True)
    p = dicke_sub.add_parser("fit", help="N0 = a L + b threshold lines per zeros count M")
    p.add_argument("--m-range", type=_parse_range, default=list(range(1, 5)))
    p.add_argument("--l-range", type=_parse_range, default=list(range(5, 41)))
    _add_common(p)
    p.set_defaults(func=_cmd_dicke_table, command_path="dicke fit")
    p = dicke_sub.add_parser("n0", help="threshold party counts N0(M, L)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l-range", type=_parse_range, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_dicke_n0, command_path="dicke n0")
    p = dicke_sub.add_parser("sigma", help="squared-correlation sum of a reduced Dicke state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_dicke_sigma, command_path="dicke sigma")

    pers_p = sub.add_parser("persistency", help="how many parties may be lost")
    pers_sub = pers_p.add_subparsers(dest="subcommand", required=True)
    p = pers_sub.add_parser("ghz", help="symmetrized GHZ-block mixtures")
    p.add_argument("--family", choices=("makb", "gbi"), required=True)
    p.add_argument("--n", type=_parse_range, required=True, help="party count or range LO:HI")
    p.add_argument(
        "--asymptotic",
        action="store_true",
        help="use the b*a^M growth model instead of exact certificates",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_persistency_ghz, command_path="persistency ghz")
    p = pers_sub.add_parser("dicke", help="Dicke states via the correlation indicator")
    p.add_argument("--n", type=_parse_range, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_persistency_dicke, command_path="persistency dicke")

    gbi_p = sub.add_parser("gbi", help="geometric-inequality constants")
    gbi_sub = gbi_p.add_subparsers(dest="subcommand", required=True)
    p = gbi_sub.add_parser("constants", help="exact classical values and ratios")
    p.add_argument("--max-n", type=int, default=12)
    _add_common(p)
    p.set_defaults(func=_cmd_gbi_constants, command_path="gbi constants")

    makb_p = sub.add_parser("makb", help="Mermin-type functionals")
    makb_sub = makb_p.add_subparsers(dest="subcommand", required=True)
    p = makb_sub.add_parser("qcr", help="quantum-to-classical ratios by enumeration")
    p.add_argument("--n-range", type=_parse_range, default=list(range(2, 9)))
    _add_common(p)
    p.set_defaults(func=_cmd_makb_qcr, command_path="makb qcr")
    p = makb_sub.add_parser("coefficients", help="functional coefficients")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_makb_coefficients, command_path="makb coefficients")

    mono_p = sub.add_parser("monogamy", help="anticommutation-graph bounds")
    mono_sub = mono_p.add_subparsers(dest="subcommand", required=True)
    p = mono_sub.add_parser("bound", help="squared-mean bound for a Pauli list file")
    p.add_argument("--file", required=True, help="text file, one Pauli string per line")
    _add_common(p)
    p.set_defaults(func=_cmd_monogamy_bound, command_path="monogamy bound")

    qccr_p = sub.add_parser("qccr", help="distributed sign-guessing game")
    qccr_sub = qccr_p.add_subparsers(dest="subcommand", required=True)
    p = qccr_sub.add_parser("simulate", help="Monte Carlo play of a game spec")
    p.add_argument("--game", required=True, help="game spec JSON path")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--subset", help="comma-separated party indices")
    _add_common(p)
    p.set_defaults(func=_cmd_qccr_simulate, command_path="qccr simulate")
    p = qccr_sub.add_parser("feasibility", help="exchangeable-marginal check")
    p.add_argument("--dist", required=True, help="JSON mapping settings strings to probabilities")
    p.add_argument("--n-total", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_qccr_feasibility, command_path="qccr feasibility")
    p = qccr_sub.add_parser("make-game", help="write a ready-made game spec")
    p.add_argument("--type", choices=("chsh", "makb", "gbi"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-total", type=int)
    p.add_argument("--grid", type=int, default=32)
    _add_common(p)
    p.set_defaults(func=_cmd_qccr_make_game, command_path="qccr make-game")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"{parser.prog}: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
