"""Command-line entry point: ``fpgroups <subcommand> ...``.

Exit codes: 0 success, 1 a check or hypothesis was refuted, 2 a resource
limit was hit (the answer is unknown), 3 bad input.  Every JSON report has a
top-level ``status`` (ok / refuted / unknown / error) matching the exit code.

Default limits come from ``FPGROUPS_MAX_COSETS``, ``FPGROUPS_MAX_TIME`` and
``FPGROUPS_MAX_NODES``; command-line flags override them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import constructions as cons
from .certificates import CERTIFIED, REFUTED
from .coset_enum import EnumerationLimits, ResourceExhausted, certify_no_finite_quotients, check_coset_table, low_index_subgroups, todd_coxeter
from .homology import IntegerMatrix, h1, smith_normal_form
from .presentations import format_presentation, load_presentation, presentation_to_json
from .rips import ConstructionFailed, InvalidInput, RipsOutput, RipsParameters, rips_wise
from .small_cancellation import dehn_solver, sc_verify
from .words import AlphabetError, ParseError, format_word, parse_word

EXIT = {"ok": 0, "refuted": 1, "unknown": 2, "error": 3}


class InputError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


def _env_number(name: str, default, kind=int):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return kind(raw)
    except ValueError:
        raise InputError(f"environment variable {name}={raw!r} is not a number") from None


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _presentation(path: str):
    text = _read(path)
    try:
        return load_presentation(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc.message}", exc.line, exc.column) from None
    except (KeyError, TypeError, AlphabetError, ValueError) as exc:
        raise InputError(f"{path}: malformed presentation ({exc})") from None


def _word(text: str, alphabet):
    try:
        return parse_word(text, alphabet)
    except ParseError as exc:
        raise InputError(f"word {text!r}: {exc.message}", exc.line, exc.column) from None


def _split_words(values) -> list[str]:
    """Split ``"w1,w2"`` at commas outside brackets; the flag may also repeat."""
    out = []
    for text in values or ():
        depth, start = 0, 0
        for i, ch in enumerate(text):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "," and depth == 0:
                out.append(text[start:i])
                start = i + 1
        out.append(text[start:])
    return [w for w in (x.strip() for x in out) if w]


def _rips_output(path: str) -> RipsOutput:
    try:
        obj = json.loads(_read(path))
        if "rips" in obj:
            obj = obj["rips"]
        return RipsOutput.from_json(obj)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from None
    except ParseError as exc:
        raise InputError(f"{path}: {exc.message}", exc.line, exc.column) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a rips output ({exc})") from None


def _limits(args) -> EnumerationLimits:
    return EnumerationLimits(
        max_cosets=args.max_cosets if args.max_cosets is not None else _env_number("FPGROUPS_MAX_COSETS", 100_000),
        max_time=args.max_time if args.max_time is not None else _env_number("FPGROUPS_MAX_TIME", 60.0, float),
        max_nodes=args.max_nodes if args.max_nodes is not None else _env_number("FPGROUPS_MAX_NODES", 0),
    )


def _rips_params(args) -> RipsParameters:
    try:
        return RipsParameters(block_base=args.block_base, max_rounds=args.max_rounds)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("lambda must lie strictly between 0 and 1")
    return value


# ------------------------------------------------------------- subcommands
# each returns (report dict with "status", text rendering)


def cmd_parse(args):
    p = _presentation(args.file)
    return {"status": "ok", "presentation": presentation_to_json(p)}, format_presentation(p)


def cmd_h1(args):
    inv = h1(_presentation(args.file))
    return {"status": "ok", "h1": inv.to_json(), "text": str(inv)}, str(inv)


def cmd_snf(args):
    try:
        m = IntegerMatrix.from_json(json.loads(_read(args.file)))
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file}: {exc.msg}", exc.lineno, exc.colno) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.file}: malformed matrix ({exc})") from None
    res = smith_normal_form(m, transforms=args.transforms)
    out = {"status": "ok", "diagonal": [str(d) for d in res.diagonal]}
    if args.transforms:
        out["left"] = IntegerMatrix(res.left).to_json()
        out["right"] = IntegerMatrix(res.right).to_json()
    return out, " ".join(str(d) for d in res.diagonal)


def cmd_tc(args):
    p = _presentation(args.file)
    subgroup = [_word(s, p.generators) for s in _split_words(args.subgroup)]
    try:
        ct = todd_coxeter(p, subgroup, _limits(args), strategy=args.strategy)
    except ResourceExhausted as exc:
        return {"status": "unknown", "reason": str(exc), "live_cosets": exc.size}, f"unknown: {exc}"
    problems = check_coset_table(p, ct, subgroup)
    status = "ok" if not problems else "refuted"
    return {"status": status, "index": ct.index, "table": ct.to_json(), "check": problems or "passed"}, f"index {ct.index}"


def cmd_lowindex(args):
    p = _presentation(args.file)
    try:
        tables = low_index_subgroups(p, args.max_index, _limits(args))
    except ResourceExhausted as exc:
        return {"status": "unknown", "reason": str(exc), "found_so_far": exc.size}, f"unknown: {exc}"
    lines = [f"index {t.index} class {t.conjugacy_class}" for t in tables]
    out = {"status": "ok", "count": len(tables), "subgroups": [t.to_json() for t in tables]}
    return out, "\n".join([f"{len(tables)} subgroups"] + lines)


def cmd_certify(args):
    cert = certify_no_finite_quotients(_presentation(args.file), args.bound, _limits(args))
    status = {CERTIFIED: "ok", REFUTED: "refuted"}.get(cert.status, "unknown")
    return {"status": status, "certificate": cert.to_json()}, f"{cert.status}: {cert.claim}"


def cmd_sc_check(args):
    rep = sc_verify(_presentation(args.file), args.lambda_)
    status = "ok" if rep.passes else "refuted"
    verdict = "pass" if rep.passes else "fail"
    return {"status": status, "report": rep.to_json()}, f"lambda = {rep.lambda_} ({verdict} C'({rep.lambda_target}))"


def cmd_dehn(args):
    p = _presentation(args.file)
    w = _word(args.word, p.generators)
    rep = sc_verify(p)
    if not rep.passes_sixth:
        out = {"status": "refuted", "reason": f"presentation is not C'(1/6) (lambda = {rep.lambda_})"}
        return out, out["reason"]
    red, trace = dehn_solver(p).reduce(w)
    out = {"status": "ok", "input": format_word(w), "reduced": format_word(red), "trivial": not red, "lengths": trace}
    return out, format_word(red)


def cmd_rips(args):
    q = _presentation(args.file)
    try:
        res = rips_wise(q, _rips_params(args))
    except InvalidInput as exc:
        raise InputError(str(exc)) from None
    except ConstructionFailed as exc:
        return {"status": "unknown", "reason": str(exc)}, f"unknown: {exc}"
    out = dict(res.to_json(), status="ok")
    return out, f"Gamma: {res.gamma.rank} generators, {len(res.gamma.relators)} relators, lambda {res.sc_report.lambda_}"


def _report(rep: cons.PairReport):
    out = rep.to_json()
    if rep.rips is not None:
        out["rips"] = rep.rips.to_json()
    text = f"G: {rep.g.rank} generators, {len(rep.g.relators)} relators; direct factor: {rep.direct_factor}"
    return out, text


def _run_pipeline(fn, *a, **kw):
    try:
        return _report(fn(*a, **kw))
    except cons.HypothesisRefuted as exc:
        return exc.to_json(), f"refuted: {exc}"
    except ConstructionFailed as exc:
        return {"status": "unknown", "reason": str(exc)}, f"unknown: {exc}"


def cmd_pipeline(args):
    q = _presentation(args.q)
    return _run_pipeline(cons.theorem_main_pipeline, q, args.bound, _rips_params(args), limits=_limits(args))


def cmd_pair(args):
    q, b = _presentation(args.q), _presentation(args.b)
    return _run_pipeline(cons.goldstein_guralnick_pair, q, b, args.bound, _rips_params(args), limits=_limits(args))


def cmd_fibre(args):
    res = _rips_output(args.gamma)
    sub = cons.fibre_product_generators(res)
    out = {"status": "ok" if sub.metadata["balanced"] else "refuted", "g": presentation_to_json(sub.ambient), "a": sub.to_json()}
    return out, f"P: {len(sub.subgroup_generators)} generators in Gamma x Gamma"


def cmd_ns(args):
    res = _rips_output(args.gamma)
    w = _word(args.word, res.gamma.generators)
    try:
        sub = cons.nikolov_segal_subgroup(res, w)
    except cons.PreconditionRefuted as exc:
        return {"status": "refuted", "reason": str(exc)}, f"refused: {exc}"
    out = {"status": "ok", "g": presentation_to_json(res.gamma), "a": sub.to_json()}
    return out, ", ".join(format_word(x) for x in sub.subgroup_generators)


def cmd_family(args):
    seed = cons.BUILTIN_SEEDS[args.seed]()
    return _run_pipeline(
        cons.gn_family, seed, args.n, args.bound, _rips_params(args),
        tietze_budget=args.tietze_budget, use_oracle=not args.no_oracle, limits=_limits(args),
    )


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpgroups", description="Finite presentations toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("--out", help="also write the JSON report to this file")
    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--max-cosets", type=int, default=None)
    limits.add_argument("--max-time", type=float, default=None, help="seconds")
    limits.add_argument("--max-nodes", type=int, default=None, help="search nodes (0 = unlimited)")
    rips = argparse.ArgumentParser(add_help=False)
    rips.add_argument("--block-base", type=int, default=10)
    rips.add_argument("--max-rounds", type=int, default=6)

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, parents=(), **kw):
        p = sub.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(func=fn)
        return p

    p = add("parse", cmd_parse, help="parse and re-print a presentation")
    p.add_argument("file")
    p = add("h1", cmd_h1, help="abelianization invariants")
    p.add_argument("file")
    p = add("snf", cmd_snf, help="Smith normal form of a JSON matrix")
    p.add_argument("file")
    p.add_argument("--transforms", action="store_true")
    p = add("tc", cmd_tc, [limits], help="Todd-Coxeter coset enumeration")
    p.add_argument("file")
    p.add_argument("--subgroup", action="append", help='subgroup generators, e.g. "a,[a,b]" (repeatable)')
    p.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")
    p = add("lowindex", cmd_lowindex, [limits], help="all subgroups of small index")
    p.add_argument("file")
    p.add_argument("--max-index", type=int, required=True)
    p = add("certify", cmd_certify, [limits], help="certify no finite quotients up to a bound")
    p.add_argument("file")
    p.add_argument("--bound", type=int, required=True)
    p = add("sc-check", cmd_sc_check, help="small cancellation C'(lambda) check")
    p.add_argument("file")
    p.add_argument("--lambda", dest="lambda_", type=_fraction, default=Fraction(1, 6))
    p = add("dehn", cmd_dehn, help="Dehn's algorithm on a C'(1/6) presentation")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p = add("rips", cmd_rips, [rips], help="Rips-Wise construction")
    p.add_argument("file")

    p = add("pipeline", cmd_pipeline, [limits, rips], help="N -> Gamma with isomorphic profinite completions")
    p.add_argument("name", choices=("theorem-main",))
    p.add_argument("--q", required=True)
    p.add_argument("--bound", type=int, default=6)
    p = add("pair", cmd_pair, [limits, rips], help="A = N x 1 inside G = Gamma x B")
    p.add_argument("name", choices=("gg",))
    p.add_argument("--q", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--bound", type=int, default=6)
    p = add("fibre", cmd_fibre, help="generators of the fibre product in Gamma x Gamma")
    p.add_argument("--gamma", required=True, help="JSON written by `rips --out`")
    p = add("ns", cmd_ns, help="the subgroup <N, gamma>")
    p.add_argument("--gamma", required=True, help="JSON written by `rips --out`")
    p.add_argument("--word", required=True)
    p = add("family", cmd_family, [limits, rips], help="member n of the seeded family")
    p.add_argument("name", choices=("gn",))
    p.add_argument("--seed", choices=sorted(cons.BUILTIN_SEEDS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--tietze-budget", type=int, default=1000)
    p.add_argument("--no-oracle", action="store_true", help="do not consult the seed's nontriviality oracle")
    return parser


def _write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".fpgroups-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT["error"] if exc.code else 0
    try:
        report, text = args.func(args)
    except InputError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.line is not None else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        if args.json:
            err = {"status": "error", "message": str(exc), "line": exc.line, "column": exc.column}
            print(json.dumps(err, sort_keys=True))
        return EXIT["error"]
    dumped = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        _write_atomic(args.out, dumped + "\n")
    print(dumped if args.json else text)
    return EXIT[report["status"]]


if __name__ == "__main__":
    sys.exit(main())
