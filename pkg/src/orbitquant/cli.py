"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
input (unparsable files or expressions, invalid options).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .diffops import change_vars_shear, quantize_symbol, shear_pairs
from .enveloping import parse_word, pbw_normal_form
from .lie_core import (AlgebraFileError, InvalidSamplerError, SamplerSpec, bundled_path, check_jacobi,
                       load_algebra, stratify)
from .moyal import star, star_bracket_check
from .orbits import get_chart
from .suites import DEFAULT_TOLERANCES, SUITES, GridSpec, run_suite
from .symbols import SymbolError, SymbolParseError, parse

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SCHEMA = "1"


class ConfigError(Exception):
    pass


def _load(path: str):
    p = Path(path)
    if not p.exists():
        bundled = bundled_path(path)
        if bundled is not None:
            p = bundled
    try:
        return load_algebra(p)
    except AlgebraFileError as exc:
        raise ConfigError(f"{p}: {exc}") from None


def _chart(chart_id: str):
    try:
        return get_chart(chart_id)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None


def _parse(text: str, space, what: str):
    try:
        return parse(text, space)
    except SymbolParseError as exc:
        raise ConfigError(f"{what}: {exc}") from None
    except SymbolError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _emit(args, report: dict, text: str):
    report = {"schema": SCHEMA, **report}
    if getattr(args, "timestamp", True):
        report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.format == "json":
        out = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


# commands -------------------------------------------------------------------

def cmd_algebra_check(args) -> int:
    alg = _load(args.file)
    rep = check_jacobi(alg)
    lines = [f"algebra {alg.name} (dim {alg.dim}): {'ok' if rep.ok else 'INVALID'}"]
    for v in rep.to_dict()["violations"]:
        lines.append(f"  {v['kind']} at {tuple(v['indices'])}: {v['value']:.3g}")
    _emit(args, {"command": "algebra check", "algebra": alg.name, "dim": alg.dim, **rep.to_dict()},
          "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_orbits_stratify(args) -> int:
    alg = _load(args.file)
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    spec = {"kind": args.sampler}
    if args.sampler == "uniform":
        spec.update(low=args.low, high=args.high)
    else:
        spec.update(scale=args.scale)
    if args.zero:
        try:
            spec["zero"] = [alg.index(z) if not z.isdigit() else int(z) - 1 for z in args.zero.split(",")]
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"--zero: {exc}") from None
    try:
        sampler = SamplerSpec.from_dict(spec)
        rep = stratify(alg, sampler, args.samples, args.seed)
    except InvalidSamplerError as exc:
        raise ConfigError(str(exc)) from None
    d = rep.to_dict()
    lines = [f"{alg.name}: {args.samples} samples, seed {args.seed}"]
    lines += [f"  rank {r}: {n}" for r, n in d["rank_histogram"].items()]
    _emit(args, d, "\n".join(lines))
    return EXIT_OK


def cmd_star(args) -> int:
    ch = _chart(args.chart)
    a = _parse(args.a, ch.space, "first operand")
    b = _parse(args.b, ch.space, "second operand")
    result = star(a, b, ch)
    report = {"command": "star", "chart": ch.orbit_id, "a": a.format(), "b": b.format(), "result": result.format()}
    text = result.format()
    code = EXIT_OK
    if args.check_assoc is not None:
        c = _parse(args.check_assoc, ch.space, "--check-assoc operand")
        left = star(result, c, ch)
        right = star(a, star(b, c, ch), ch)
        dev = left.max_deviation(right) / max(1.0, left.max_abs_coeff(), right.max_abs_coeff())
        ok = dev < DEFAULT_TOLERANCES["associativity"]
        report["associativity"] = {"c": c.format(), "deviation": dev, "passed": ok}
        text += f"\nassociativity deviation {dev:.3g}: {'ok' if ok else 'FAILED'}"
        code = EXIT_OK if ok else EXIT_FAIL
    _emit(args, report, text)
    return code


def cmd_commutator_check(args) -> int:
    ch = _chart(args.chart)
    rep = star_bracket_check(ch, args.trials, args.seed)
    tol = args.tol if args.tol is not None else DEFAULT_TOLERANCES["commutator"]
    ok = rep.max_deviation < tol
    _emit(args, {"command": "commutator-check", **rep.to_dict(), "tolerance": tol, "passed": ok},
          f"{ch.orbit_id}: {len(rep.cases)} pairs, max deviation {rep.max_deviation:.3g} "
          f"({'ok' if ok else 'FAILED'})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_quantize(args) -> int:
    ch = _chart(args.chart)
    zt = _parse(args.expr, ch.space, "symbol")
    try:
        op = quantize_symbol(zt, ch)
        if args.shear:
            op = change_vars_shear(op, shear_pairs(ch))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit(args, {"command": "quantize", "chart": ch.orbit_id, "symbol": zt.format(), "sheared": args.shear,
                 "operator": op.to_dict(), "text": op.format()}, op.format())
    return EXIT_OK


def cmd_pbw(args) -> int:
    alg = _load(args.algebra)
    try:
        word = parse_word(alg, args.word)
        order = [t.strip() for t in args.order.split(",")] if args.order else None
        if order is None:
            chart = {"aff_r": "affR+", "aff_c": "affC:0"}.get(alg.name)
            order = get_chart(chart).polarization.order if chart else None
        nf = pbw_normal_form(word, order)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc.args[0] if exc.args else exc)) from None
    _emit(args, {"command": "pbw", "input": word.format(), **nf.to_dict()}, nf.format())
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = None
    if args.grid:
        try:
            grid = GridSpec.parse(args.grid)
        except ValueError as exc:
            raise ConfigError(f"--grid: {exc}") from None
    if args.chart:
        _chart(args.chart)
    tol = {"all": args.tol} if args.tol is not None else None
    dump = None
    if args.dump_grids:
        dump = Path(args.dump_grids)
        dump.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    results = run_suite(args.suite, args.seed, args.chart, grid, tol, dump, args.precision)
    passed = all(r.passed for r in results)
    report = {
        "command": "verify",
        "suite": args.suite,
        "config": {"chart": args.chart, "seed": args.seed, "grid": str(grid) if grid else None,
                   "tolerance_override": args.tol},
        "passed": passed,
        "results": [r.to_dict() for r in results],
    }
    if args.timestamp:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    lines = [f"verify {args.suite}: {'PASS' if passed else 'FAIL'}"]
    for r in results:
        lines.append(f"[{r.suite}]")
        for a in r.assertions:
            lines.append(f"  {'ok  ' if a.passed else 'FAIL'} {a.name}: {a.value:.3g} {a.relation} {a.tolerance:.3g}")
    _emit(args, report, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


# parser -----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false",
                   help="omit wall-clock fields so reports are byte-reproducible")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitquant",
                                     description="Star products, quantized operators and their verification.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="Lie-algebra files")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    p = alg_sub.add_parser("check", help="check antisymmetry and the Jacobi identity")
    p.add_argument("file", help="algebra JSON file, or aff_r / aff_c for a bundled one")
    _common(p)
    p.set_defaults(func=cmd_algebra_check)

    orb = sub.add_parser("orbits", help="orbit-dimension stratification")
    orb_sub = orb.add_subparsers(dest="action", required=True)
    p = orb_sub.add_parser("stratify", help="histogram of Poisson ranks over sampled functionals")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sampler", choices=("uniform", "gaussian"), default="uniform")
    p.add_argument("--low", type=float, default=-1.0)
    p.add_argument("--high", type=float, default=1.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--zero", help="comma-separated coordinates (labels or 1-based) forced to zero")
    _common(p)
    p.set_defaults(func=cmd_orbits_stratify)

    p = sub.add_parser("star", help="star product of two symbols")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--chart", default="affR+")
    p.add_argument("--check-assoc", metavar="EXPR", help="also check associativity with a third symbol")
    _common(p)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("commutator-check", help="star commutators of Hamiltonians vs brackets")
    p.add_argument("--chart", default="affR+")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--tol", type=float)
    _common(p)
    p.set_defaults(func=cmd_commutator_check)

    p = sub.add_parser("quantize", help="differential operator of a Hamiltonian symbol")
    p.add_argument("expr")
    p.add_argument("--chart", default="affR+")
    p.add_argument("--shear", action="store_true", help="rewrite in s = q - x/2, t = q + x/2")
    _common(p)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("pbw", help="PBW normal form of a word")
    p.add_argument("word", help="comma-separated basis labels, e.g. Y,X")
    p.add_argument("--order", help="comma-separated basis labels (default: the catalog polarization order)")
    p.add_argument("--algebra", default="aff_r", help="algebra file or bundled name")
    _common(p)
    p.set_defaults(func=cmd_pbw)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--chart", help="restrict to one chart (affR+, affR-, affC:k)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid", help="min:max:count with count a power of two")
    p.add_argument("--tol", type=float, help="override every tolerance")
    p.add_argument("--dump-grids", metavar="DIR", help="save sample grids here")
    p.add_argument("--precision", choices=("complex64", "complex128"), default="complex128")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _join_grid(argv: list[str]) -> list[str]:
    # "--grid -8:8:4096" would otherwise be read as an option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--grid" and i + 1 < len(argv):
            out.append(f"--grid={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_grid(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
