"""Command-line interface.

Exit status: 0 on any completed evaluation, 3 for a failing verdict under
``--fail-on-negative``, 2 for invalid input.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import report
from .cones import partition_check
from .criterion import (
    CriterionError,
    Exponent,
    ExponentFamily,
    check_all,
    check_parabolic,
    series_probe,
)
from .exponents import (
    Character,
    ExponentError,
    Induced,
    Steinberg,
    borel_exponents,
    parabolic_exponents,
    restrict_to_S,
    tag_str,
)
from .involution import InvolutionData, InvolutionError, build
from .lattice import LatticeError, qvec
from .presets import golden_exponent_family, preset
from .rootdatum import BasedRootDatum, RootDatumError, parse_simple_names

EXIT_OK, EXIT_INVALID, EXIT_NEGATIVE = 0, 2, 3


class InputError(ValueError):
    pass


# --- representation grammar ------------------------------------------------
#   rep  := "char" q+ | "st" k ["twist" q] | "ind" "(" k ("," k)* "|" rep (";" rep)* ")"

_TOKEN = re.compile(r"\s*(ind|char|st|twist|[(),|;]|[-+]?\d+(?:/\d+)?)")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"unexpected text in representation at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_rep(text: str):
    toks = _tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(toks):
            raise InputError("representation ends early")
        t = toks[pos]
        if expected is not None and t != expected:
            raise InputError(f"expected {expected!r}, found {t!r}")
        pos += 1
        return t

    def number():
        t = take()
        try:
            return Fraction(t)
        except ValueError:
            raise InputError(f"expected a number, found {t!r}") from None

    def rep():
        head = take()
        if head == "char":
            vals = []
            while peek() not in (None, ";", ")"):
                vals.append(number())
            if not vals:
                raise InputError("char needs at least one value")
            return Character(vals)
        if head == "st":
            k = number()
            if k.denominator != 1:
                raise InputError("Steinberg size must be an integer")
            twist = Fraction(0)
            if peek() == "twist":
                take()
                twist = number()
            return Steinberg(int(k), twist)
        if head == "ind":
            take("(")
            comp = [number()]
            while peek() == ",":
                take()
                comp.append(number())
            take("|")
            kids = [rep()]
            while peek() == ";":
                take()
                kids.append(rep())
            take(")")
            if any(c.denominator != 1 for c in comp):
                raise InputError("composition parts must be integers")
            return Induced([int(c) for c in comp], kids)
        raise InputError(f"unknown block {head!r}")

    out = rep()
    if pos != len(toks):
        raise InputError(f"trailing input {' '.join(toks[pos:])!r}")
    return out


# --- inputs ----------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    return doc


def datum_from_doc(doc: dict) -> tuple[InvolutionData, str]:
    if "preset" in doc:
        p = preset(doc["preset"])
        return p.data, p.name
    rd = doc.get("root_datum")
    if not isinstance(rd, dict):
        raise InputError("input needs either 'preset' or 'root_datum'")
    try:
        rank = int(rd["rank"])
        roots = [tuple(int(x) for x in r) for r in rd["roots"]]
        simple = [int(i) for i in rd["simple"]]
        sigma = rd["sigma"]
        coroots = rd.get("coroots")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed root_datum: {exc}") from None
    base = BasedRootDatum.from_roots(rank, roots, simple, coroots, rd.get("name", "custom"))
    return build(base, sigma), base.name


def family_from_doc(doc: dict, data: InvolutionData, unitary: bool) -> ExponentFamily:
    entries: dict = {}
    count = len(data.base.simple)
    for k, item in enumerate(doc.get("exponents", [])):
        try:
            I = parse_simple_names(item.get("parabolic", []), count)
            vec = qvec(item["vector"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"exponent {k}: {exc}") from None
        if len(vec) != data.rank:
            raise InputError(f"exponent {k}: vector has {len(vec)} entries, rank is {data.rank}")
        if not data.is_sigma_split(I):
            raise InputError(f"exponent {k}: parabolic {sorted(I)} is not sigma-split")
        e = Exponent(item.get("label", f"e{k + 1}"), vec, bool(item.get("lambda_support", False)))
        entries.setdefault(tuple(sorted(I)), []).append(e)
    return ExponentFamily(entries, unitary)


def _source(args) -> tuple[InvolutionData, str, dict]:
    if bool(args.preset) == bool(args.input):
        raise InputError("give exactly one of --preset or --input")
    if args.preset:
        p = preset(args.preset)
        return p.data, p.name, {}
    doc = _load_json(args.input)
    data, name = datum_from_doc(doc)
    return data, name, doc


def _option(args, doc, name, default):
    val = getattr(args, name, None)
    if val is not None:
        return val
    return doc.get("options", {}).get(name, default)


def _subset(text: str, data: InvolutionData) -> tuple[int, ...]:
    parts = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    return tuple(sorted(parse_simple_names(parts, len(data.base.simple))))


# --- commands --------------------------------------------------------------

def cmd_describe(args):
    data, name, _ = _source(args)
    d = report.describe_dict(data, name)
    return d, report.describe_table(d), True


def cmd_check(args):
    data, name, doc = _source(args)
    lam = bool(_option(args, doc, "lambda_only", False))
    unitary = bool(_option(args, doc, "unitary", True))
    if args.golden:
        if args.input and "exponents" in doc:
            raise InputError("--golden conflicts with exponents given in the input")
        family = golden_exponent_family(name)
        family.unitary = unitary
    elif doc.get("exponents"):
        family = family_from_doc(doc, data, unitary)
    else:
        raise InputError("no exponent data: pass --golden or an input with 'exponents'")
    verdict = check_all(data, family, lam)
    body = {"datum": name, **report.verdict_dict(verdict)}
    return body, report.verdict_table(verdict), verdict.passed


def cmd_exponents(args):
    if args.preset and args.gln:
        raise InputError("give --gln or --preset, not both")
    data = preset(args.preset).data if args.preset else None
    n = args.gln or (data.rank if data else None)
    if n is None:
        raise InputError("exponents needs --gln or a GL_n preset")
    rep = parse_rep(args.rep)
    if rep.size != n:
        raise InputError(f"representation lives on GL_{rep.size}, not GL_{n}")
    I = tuple(sorted(parse_simple_names([t for t in re.split(r"[,\s]+", args.along) if t], n - 1)))
    ms = parabolic_exponents(rep, I) if I else borel_exponents(rep)
    body = {
        "gln": n,
        "along": report.names(I),
        "exponents": [{"coset": tag_str(t.tag), "vector": report.qv(t.vector)} for t in ms],
    }
    lines = [f"{len(ms)} exponents along {{{', '.join(report.names(I))}}}:"]
    lines += [f"  {tag_str(t.tag):<24} ({', '.join(report.qv(t.vector))})" for t in ms]
    if data is not None:
        if not isinstance(data, InvolutionData) or not data.is_sigma_split(I):
            raise InputError(f"{sorted(I)} is not sigma-split for {args.preset}")
        restricted = restrict_to_S(data, I, ms)
        body["restricted"] = [{"label": e.label, "vector": report.qv(e.vector)} for e in restricted]
        lines.append("restricted to S_I:")
        lines += [f"  {e.label:<6} ({', '.join(report.qv(e.vector))})" for e in restricted]
    return body, "\n".join(lines) + "\n", True


def cmd_partition(args):
    data, name, doc = _source(args)
    N = int(_option(args, doc, "threshold", 1))
    radius = int(_option(args, doc, "radius", 8))
    if N < 1 or radius < 0:
        raise InputError("partition needs threshold >= 1 and radius >= 0")
    r = partition_check(data, N, radius)
    return {"datum": name, **report.partition_dict(r)}, report.partition_table(r), r.ok


def cmd_series(args):
    data, name, doc = _source(args)
    q = int(_option(args, doc, "q", 2))
    d = int(_option(args, doc, "degree", 1))
    radii = _option(args, doc, "radius", None)
    if isinstance(radii, str):
        radii = [int(x) for x in re.split(r"[,\s]+", radii.strip()) if x]
    elif isinstance(radii, int):
        radii = [radii]
    radii = tuple(radii or (4, 8, 12, 16))
    if q < 2 or d < 0 or any(r < 1 for r in radii):
        raise InputError("series needs q >= 2, degree >= 0 and positive radii")
    if args.vector is not None:
        if args.along is None:
            raise InputError("--vector needs --along")
        I = _subset(args.along, data)
        if not data.is_sigma_split(I):
            raise InputError(f"{list(I)} is not sigma-split")
        vec = qvec(t for t in re.split(r"[,\s]+", args.vector.strip()) if t)
        if len(vec) != data.rank:
            raise InputError(f"vector needs {data.rank} entries")
        targets = [(I, Exponent("vector", vec))]
    elif args.golden:
        fam = golden_exponent_family(name)
        targets = [(I, e) for I, exps in fam.entries.items() for e in exps
                   if e.lambda_support or not args.lambda_only]
    else:
        raise InputError("series needs --vector with --along, or --golden")
    body, lines = {"datum": name, "q": q, "degree": d, "radii": list(radii), "probes": []}, []
    ok = True
    for I, e in targets:
        p = series_probe(data, I, e, d, q, radii)
        verdict = check_parabolic(data, I, [e]).passed
        ok &= p.classification == "convergent"
        body["probes"].append({"label": e.label, "subset": report.names(I),
                               "vector": report.qv(e.vector), "checker_passed": verdict,
                               **report.probe_dict(p)})
        lines.append(f"{e.label} along {{{', '.join(report.names(I))}}}:")
        lines.append(report.probe_table(p).rstrip("\n"))
    return body, "\n".join(lines) + "\n", ok


COMMANDS = {
    "describe": cmd_describe,
    "check": cmd_check,
    "exponents": cmd_exponents,
    "partition": cmd_partition,
    "series": cmd_series,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relcrit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "machine"), default="table")
    common.add_argument("--out", help="also write the report to this file")
    common.add_argument("--fail-on-negative", action="store_true",
                        help="exit 3 when the verdict is negative")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--preset", help="gl3_inner, gl4_symplectic or group_case(n)")
    source.add_argument("--input", help="JSON job file ('-' for stdin)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("describe", parents=[common, source], help="show the restricted root data")

    p = sub.add_parser("check", parents=[common, source], help="decide the square-integrability criterion")
    p.add_argument("--golden", action="store_true", help="use the preset's bundled exponents")
    p.add_argument("--lambda-only", action="store_true", default=None, dest="lambda_only")
    p.add_argument("--unitary", action=argparse.BooleanOptionalAction, default=None,
                   help="require exponents to vanish on Z0 (default on)")

    p = sub.add_parser("exponents", parents=[common], help="geometric-lemma exponents of a GL_n representation")
    p.add_argument("--gln", type=int)
    p.add_argument("--preset", help="also restrict to S_I of this preset")
    p.add_argument("--rep", required=True, help='e.g. "ind(1,2|char 0; st 2)"')
    p.add_argument("--along", default="", help='simple roots of the Levi, e.g. "alpha_1,alpha_3"')

    p = sub.add_parser("partition", parents=[common, source], help="box-check the cone partition")
    p.add_argument("--threshold", type=int)
    p.add_argument("--radius", type=int)

    p = sub.add_parser("series", parents=[common, source], help="numeric series probe")
    p.add_argument("--vector", help='exponent, e.g. "0,1/2,-1/2"')
    p.add_argument("--along", help="simple roots of the sigma-split subset")
    p.add_argument("--golden", action="store_true")
    p.add_argument("--lambda-only", action="store_true")
    p.add_argument("--q", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--radius", help="comma-separated radius schedule")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        body, table, positive = COMMANDS[args.command](args)
    except (InputError, KeyError, ValueError, TypeError, ZeroDivisionError,
            LatticeError, RootDatumError, InvolutionError, CriterionError, ExponentError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"relcrit: error: {msg}", file=stderr)
        return EXIT_INVALID
    text = report.dumps(report.envelope(args.command, body)) if args.format == "machine" else table
    stdout.write(text)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            print(f"relcrit: error: cannot write {args.out}: {exc}", file=stderr)
            return EXIT_INVALID
    if args.fail_on_negative and not positive:
        return EXIT_NEGATIVE
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
