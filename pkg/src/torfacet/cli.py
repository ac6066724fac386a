"""Command-line interface: ``torfacet <command> [options]``.

Exit codes: 0 success, 1 mathematical failure with a witness, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .complexes import (
    SimplicialComplex,
    dual_complex,
    full_subcomplex,
    generate,
    join,
    link,
    star,
    stellar_subdivision,
    to_vertices,
)
from .homology import Coefficients

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("TORFACET_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise UsageError(f"TORFACET_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_complex(gen: str | None, path: str | None, what: str = "input") -> SimplicialComplex:
    if (gen is None) == (path is None):
        raise UsageError(f"give exactly one {what} source: --gen NAME:PARAM or --complex FILE")
    if gen is not None:
        return generate(gen)
    try:
        return SimplicialComplex.from_json(_read_text(path))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: not a complex in JSON form ({exc})") from exc


def _complex(args) -> SimplicialComplex:
    return _load_complex(args.gen, args.complex)


def _coeff(text: str) -> Coefficients:
    try:
        return Coefficients.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _vertices(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "[]"):
        return []
    try:
        if text.startswith("["):
            return [int(v) for v in json.loads(text)]
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad vertex list {text!r}") from exc


class Output:
    def __init__(self, args):
        self.args = args
        self.chunks: list[str] = []

    def text(self, s: str):
        self.chunks.append(s)

    def json(self, obj):
        self.chunks.append(json.dumps(obj, indent=1, sort_keys=False))

    def flush(self):
        data = "\n".join(self.chunks) + ("\n" if self.chunks else "")
        if getattr(self.args, "output", None):
            Path(self.args.output).write_text(data)
        else:
            sys.stdout.write(data)


# ------------------------------------------------------------------ commands

def cmd_betti(args, out: Output) -> int:
    from .hochster import betti_table_hochster
    from .koszul import betti_table_koszul

    K = _complex(args)
    coeff = _coeff(args.coeff)
    threads = _threads(args)
    tables = {}
    if args.method in ("hochster", "both"):
        tables["hochster"] = betti_table_hochster(K, coeff, args.multigraded, threads=threads)
    if args.method in ("koszul", "both"):
        tables["koszul"] = betti_table_koszul(K, coeff, args.multigraded, threads=threads)
    equal = len({json.dumps(t.to_dict()) for t in tables.values()}) == 1
    if args.json:
        out.json({"schema": 1, "command": "betti", "method": args.method,
                  "tables": {k: t.to_dict() for k, t in tables.items()}, "equal": equal})
    else:
        for name, t in tables.items():
            out.text(f"[{name}] {t.format()}")
            if t.multigraded:
                for (neg_i, w), r in sorted(t.multigraded.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
                    out.text(f"  ({neg_i}, omega={list(to_vertices(w))}): {r}")
        if len(tables) > 1:
            out.text(f"tables equal: {'yes' if equal else 'NO'}")
    return EXIT_OK if equal else EXIT_FAIL


def cmd_cm_test(args, out: Output) -> int:
    from .facering import reisner_cm_test

    v = reisner_cm_test(_complex(args), _coeff(args.coeff))
    d = v.to_dict("cohen_macaulay", "fail")
    if args.json:
        out.json(d)
    else:
        out.text(d["verdict"] if v.ok else f"fail: H_{v.witness['i']}(link {v.witness['sigma']}) != 0")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_lsop_check(args, out: Output) -> int:
    from .facering import CharMatrix, lsop_check_field, lsop_check_integer

    K = _complex(args)
    try:
        L = CharMatrix.from_dict(json.loads(_read_text(args.matrix)))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.matrix}: not a matrix in JSON form ({exc})") from exc
    coeff = _coeff(args.coeff)
    v = lsop_check_integer(K, L) if coeff.kind == "Z" else lsop_check_field(K, L, coeff)
    d = v.to_dict()
    if args.json:
        out.json(d)
    else:
        out.text("pass" if v.ok else f"fail: facet {v.witness} has minor det {d['det']}")
    return EXIT_OK if v.ok else EXIT_FAIL


def cmd_massey(args, out: Output) -> int:
    from .koszul import load_element
    from .massey import MasseyProblem, UndefinedMasseyProduct, demo_p3, triple_massey

    coeff = _coeff(args.coeff)
    if not coeff.is_field:
        raise UsageError("Massey products need field coefficients")
    try:
        if args.action == "demo-p3":
            if args.gen or args.complex:
                raise UsageError("demo-p3 takes no complex")
            _, res = demo_p3(coeff)
        else:
            K = _complex(args)
            if not (args.a1 and args.a2 and args.a3):
                raise UsageError("massey needs --a1, --a2 and --a3")
            elems = [load_element(K, _maybe_file(a), coeff) for a in (args.a1, args.a2, args.a3)]
            res = triple_massey(MasseyProblem(K, *elems, coeff))
    except UndefinedMasseyProduct as exc:
        if args.json:
            out.json({"defined": False, "obstruction": exc.obstruction})
        else:
            out.text(f"undefined: {exc.obstruction} is not a coboundary")
        return EXIT_FAIL
    d = res.to_dict()
    if args.json:
        out.json({"defined": True, **d})
    else:
        out.text(f"representative: {d['representative']}")
        out.text(f"e: {d['e']}")
        out.text(f"f: {d['f']}")
        out.text(f"indeterminacy rank: {d['indeterminacy_rank']}")
        out.text(f"trivial={'true' if res.trivial else 'false'}")
    return EXIT_OK


def _maybe_file(text: str) -> str:
    if text.startswith("@"):
        return _read_text(text[1:])
    return text


def cmd_ukhom(args, out: Output) -> int:
    from .arrangements import uk_homology_via_dual_links, uk_homology_via_subcomplexes

    K = _complex(args)
    coeff = _coeff(args.coeff)
    threads = _threads(args)
    reports = {}
    if args.route in ("subcomplex", "both"):
        reports["subcomplex"] = uk_homology_via_subcomplexes(K, coeff, threads)
    if args.route in ("dual", "both"):
        reports["dual"] = uk_homology_via_dual_links(K, coeff, threads)
    rs = list(reports.values())
    equal = all(r.same_groups(rs[0]) for r in rs)
    if args.json:
        out.json({"schema": 1, "command": "ukhom", "reports": {k: r.to_dict() for k, r in reports.items()},
                  "equal": equal})
    else:
        for name, r in reports.items():
            groups = ", ".join(f"H_{p} = {g}" for p, g in sorted(r.groups.items())) or "acyclic"
            out.text(f"[{name}] {groups}")
        if len(reports) > 1:
            out.text(f"routes agree: {'yes' if equal else 'NO'}")
    return EXIT_OK if equal else EXIT_FAIL


def cmd_alexander(args, out: Output) -> int:
    from .arrangements import alexander_duality_check

    r = alexander_duality_check(_complex(args), _coeff(args.coeff))
    if args.json:
        out.json(r.to_dict())
    else:
        out.text("pass" if r.ok else f"fail at sigma={r.witness['sigma']}, j={r.witness['j']}")
    return EXIT_OK if r.ok else EXIT_FAIL


def cmd_trc(args, out: Output) -> int:
    from .arrangements import toral_rank_check

    r = toral_rank_check(_complex(args), _threads(args))
    if args.json:
        out.json(r.to_dict())
    else:
        note = "" if r.pure else " (complex not pure; n = dim + 1)"
        word = "holds" if r.holds else "VIOLATION"
        out.text(f"{word}: {r.lhs} >= 2^{r.rhs.bit_length() - 1} = {r.rhs}, margin {r.margin}{note}")
    return EXIT_OK if r.holds else EXIT_FAIL


def cmd_complex(args, out: Output) -> int:
    op = args.op
    if op == "gen":
        K = _complex(args)
    elif op == "join":
        K = join(_complex(args), _load_complex(args.other_gen, args.other, "second"))
    elif op in ("stellar", "link", "star"):
        if args.face is None:
            raise UsageError(f"complex {op} needs --face")
        fn = {"stellar": stellar_subdivision, "link": link, "star": star}[op]
        K = fn(_complex(args), _vertices(args.face))
    elif op == "dual":
        K = dual_complex(_complex(args))
    elif op == "sub":
        if args.omega is None:
            raise UsageError("complex sub needs --omega")
        K = full_subcomplex(_complex(args), _vertices(args.omega))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(op)
    out.text(K.to_json())
    return EXIT_OK


def cmd_suite(args, out: Output) -> int:
    from .corpus import run_suite

    coeffs = [_coeff(c) for c in (args.coeff_list or ["q"])]
    options = {}
    if args.name in ("hochster-vs-koszul", "alexander", "toral-rank"):
        options = {"random_count": args.random, "seed": args.seed, "threads": _threads(args)}
        if args.max_m is not None:
            options["max_m"] = args.max_m
    report = run_suite(args.name, coeffs, **options)
    if args.json:
        out.json(report)
    else:
        for r in report["results"]:
            out.text(f"{'PASS' if r['pass'] else 'FAIL'}  {r['name']}  [{r['field']}]")
        out.text(f"{report['count'] - report['failures']}/{report['count']} passed")
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gen", help="named generator, e.g. mgon:5, cut_cube_dual")
    common.add_argument("--complex", help="complex JSON file ('-' for stdin)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $TORFACET_THREADS or CPU count)")
    common.add_argument("--output", "-o", help="write output to this file")

    p = argparse.ArgumentParser(prog="torfacet", description="Tor-algebras of face rings and related checks.")
    p.add_argument("--version", action="version", version=f"torfacet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("betti", parents=[common], help="bigraded Betti numbers")
    s.add_argument("--method", choices=["hochster", "koszul", "both"], default="hochster")
    s.add_argument("--coeff", default="q", help="q, z or fp:<p>")
    s.add_argument("--multigraded", action="store_true")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("cm-test", parents=[common], help="Reisner's Cohen-Macaulay criterion")
    s.add_argument("--coeff", default="q")
    s.set_defaults(func=cmd_cm_test)

    s = sub.add_parser("lsop-check", parents=[common], help="check a characteristic matrix")
    s.add_argument("--matrix", required=True, help='JSON file {"n": .., "rows": [[..]]}')
    s.add_argument("--coeff", default="z", help="z for the determinant ±1 test, or a field")
    s.set_defaults(func=cmd_lsop_check)

    s = sub.add_parser("massey", parents=[common], help="triple Massey products")
    s.add_argument("action", nargs="?", choices=["demo-p3"])
    s.add_argument("--a1")
    s.add_argument("--a2")
    s.add_argument("--a3", help="cocycles as 'v1u2' strings, JSON term lists, or @file")
    s.add_argument("--coeff", default="q")
    s.set_defaults(func=cmd_massey)

    s = sub.add_parser("ukhom", parents=[common], help="homology of the arrangement complement U(K)")
    s.add_argument("--route", choices=["subcomplex", "dual", "both"], default="both")
    s.add_argument("--coeff", default="q")
    s.set_defaults(func=cmd_ukhom)

    s = sub.add_parser("alexander-check", parents=[common], help="Alexander duality on every non-face")
    s.add_argument("--coeff", default="q")
    s.set_defaults(func=cmd_alexander)

    s = sub.add_parser("trc-check", parents=[common], help="toral rank inequality")
    s.set_defaults(func=cmd_trc)

    s = sub.add_parser("complex", parents=[common], help="build and transform complexes")
    s.add_argument("op", choices=["gen", "join", "stellar", "dual", "link", "star", "sub"])
    s.add_argument("--face", help="vertex list for stellar/link/star, e.g. 1,2")
    s.add_argument("--omega", help="vertex list for sub")
    s.add_argument("--other", help="second complex file for join")
    s.add_argument("--other-gen", help="second named complex for join")
    s.set_defaults(func=cmd_complex)

    s = sub.add_parser("suite", parents=[common], help="run a batch of cross-checks")
    s.add_argument("name")
    s.add_argument("--coeff", dest="coeff_list", action="append", help="repeatable; default q")
    s.add_argument("--random", type=int, default=0, help="extra random complexes")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-m", type=int, default=None)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args)
    try:
        code = args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"torfacet: error: {exc}", file=sys.stderr)
        if getattr(args, "json", False):
            sys.stdout.write(json.dumps({"error": str(exc)}) + "\n")
        return EXIT_USAGE
    out.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
