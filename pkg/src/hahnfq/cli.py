"""Command line front end.

A job is a ``;``-separated list of statements::

    field 2^1; roots x^2 + x + t^-1; window 2 10

Statements: ``field p^d``, one command, and optional ``window r E``,
``bounds M N`` and ``budget n``.  Commands:

    roots <poly>                     roots of a polynomial in x
    as-solve <series>                principal solution of x^p - x = y
    eval <poly> at <series>          P(s) on the window
    certify series a=.. b=.. c=.. period=M,N table{m:word=value, ...}
    certify seq <pre>|<period>       sum x_i t^(-1/p^i), x eventually periodic
    certify seq squares              the same with x_i = [i is a square]

Polynomial terms look like ``c*t^(num/den)*x^k``; ``c`` is an integer or a
parenthesized element such as ``(1+g)``.  Exit status: 0 when every check
passed, 2 when a pattern was not found or a check failed, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import re
import sys
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

from .errors import HahnError, ParseError, PeriodUnverified
from .exponents import SupportCert, format_exp
from .ffield import FieldDesc, FqElem, GF, field_from_string, parse_element
from .lrr import PeriodCert
from .rootfind import SeriesPoly, find_roots, verify_root
from .series import FiniteSeries, OracleSeries, materialize, series_to_dict, twist, window_equal
from .twistrec import (
    CoeffFunction,
    algebraicity_witness,
    as_solve,
    build_tr,
    detect_tr,
    make_tr,
)

__all__ = ["JobSpec", "parse_input", "format_job", "run", "main"]

ENV_FIELD = "HAHNFQ_FIELD"

# (coefficient, t-exponent, x-power)
Term = tuple[FqElem, Fraction, int]


@dataclass(frozen=True)
class JobSpec:
    field: FieldDesc
    command: str
    terms: tuple[Term, ...] = ()
    at: tuple[Term, ...] = ()
    cert: SupportCert | None = None
    period: PeriodCert | None = None
    table: tuple[tuple[int, tuple[tuple[tuple[int, ...], FqElem], ...]], ...] = ()
    seq: tuple[tuple[FqElem, ...], tuple[FqElem, ...]] | str = ((), ())
    window: tuple[Fraction, int] = (Fraction(2), 8)
    bounds: tuple[int, int] = (8, 8)
    budget: int = 2000
    fmt: str = "text"

    def __str__(self) -> str:
        return format_job(self)


# -- lexing -------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z_-]*)|(?P<op>[-+*^/()]))")


class _Lexer:
    def __init__(self, text: str, base: int):
        self.text = text
        self.base = base
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", base + pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), base + start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", self.base + len(self.text))

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.toks)


def _signed_int(lx: _Lexer) -> int:
    sign = 1
    if lx.peek()[1] in "+-" and lx.peek()[0] == "op":
        sign = -1 if lx.take()[1] == "-" else 1
    return sign * int(lx.take(kind="num")[1])


def _exponent(lx: _Lexer) -> Fraction:
    if lx.peek()[1] == "(":
        lx.take("(")
        num = _signed_int(lx)
        den = 1
        if lx.peek()[1] == "/":
            lx.take("/")
            den = int(lx.take(kind="num")[1])
            if den == 0:
                raise ParseError("zero denominator", lx.peek()[2])
        lx.take(")")
        return Fraction(num, den)
    return Fraction(_signed_int(lx))


def _element_literal(lx: _Lexer, field: FieldDesc) -> FqElem:
    start = lx.take("(")[2]
    depth = 1
    while depth:
        kind, val, pos = lx.peek()
        if kind == "end":
            raise ParseError("unbalanced parenthesis", start)
        lx.take()
        depth += {"(": 1, ")": -1}.get(val, 0)
    end = pos
    inner = lx.text[start - lx.base + 1:end - lx.base]
    try:
        return parse_element(field, inner)
    except ValueError as exc:
        raise ParseError(str(exc), start) from None


def _term(lx: _Lexer, field: FieldDesc, allow_x: bool) -> Term:
    coef, texp, xpow = field.one, Fraction(0), 0
    while True:
        kind, val, pos = lx.peek()
        if kind == "num":
            lx.take()
            coef = coef * field(int(val))
        elif val == "(":
            coef = coef * _element_literal(lx, field)
        elif val == "g":
            lx.take()
            k = 1
            if lx.peek()[1] == "^":
                lx.take("^")
                k = int(lx.take(kind="num")[1])
            if field.d == 1:
                raise ParseError("g is only defined for extension fields", pos)
            coef = coef * field.gen ** k
        elif val == "t":
            lx.take()
            e = Fraction(1)
            if lx.peek()[1] == "^":
                lx.take("^")
                e = _exponent(lx)
            texp += e
        elif val == "x" and allow_x:
            lx.take()
            k = 1
            if lx.peek()[1] == "^":
                lx.take("^")
                k = int(lx.take(kind="num")[1])
            xpow += k
        elif val == "/":
            raise ParseError("division is not supported", pos)
        else:
            raise ParseError(f"unexpected {val or 'end of input'!r} in term", pos)
        nxt = lx.peek()[1]
        if nxt == "*":
            lx.take("*")
            continue
        if nxt == "/":
            raise ParseError("division is not supported", lx.peek()[2])
        return coef, texp, xpow


def _sum(text: str, base: int, field: FieldDesc, allow_x: bool, stop: str | None = None) -> tuple[tuple[Term, ...], int]:
    lx = _Lexer(text, base)
    acc: dict[tuple[Fraction, int], FqElem] = {}
    sign = 1
    if lx.peek()[1] in "+-" and lx.peek()[0] == "op":
        sign = -1 if lx.take()[1] == "-" else 1
    while True:
        c, e, k = _term(lx, field, allow_x)
        acc[(e, k)] = acc.get((e, k), field.zero) + (c if sign > 0 else -c)
        if lx.at_end():
            break
        kind, val, pos = lx.peek()
        if val not in "+-" or kind != "op":
            raise ParseError(f"expected + or -, found {val!r}", pos)
        lx.take()
        sign = 1 if val == "+" else -1
    terms = tuple(sorted(((c, e, k) for (e, k), c in acc.items() if c), key=lambda t: (t[2], t[1])))
    return terms, len(lx.toks)


# -- statements ---------------------------------------------------------------------------

def _split_statements(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    depth = 0
    start = 0
    for pos, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == ";" and depth == 0:
            out.append((text[start:pos], start))
            start = pos + 1
    out.append((text[start:], start))
    return [(s, b) for s, b in out if s.strip()]


def _strip(chunk: str, base: int) -> tuple[str, int]:
    lead = len(chunk) - len(chunk.lstrip())
    return chunk.strip(), base + lead


_KV = re.compile(r"(a|b|c|period)\s*=\s*([0-9,]+)")
_ENTRY = re.compile(r"\s*(-?\d+)\s*:\s*([0-9]+|-)\s*=\s*")


def _parse_table(body: str, base: int, field: FieldDesc) -> tuple:
    entries: dict[int, dict[tuple[int, ...], FqElem]] = {}
    pos = 0
    while pos < len(body):
        if not body[pos:].strip():
            break
        m = _ENTRY.match(body, pos)
        if not m:
            raise ParseError("expected m:word=value", base + pos)
        mval = int(m.group(1))
        word = () if m.group(2) == "-" else tuple(int(ch) for ch in m.group(2))
        vstart = m.end()
        depth = 0
        vend = vstart
        while vend < len(body) and not (body[vend] == "," and depth == 0):
            depth += {"(": 1, ")": -1}.get(body[vend], 0)
            vend += 1
        try:
            val = parse_element(field, body[vstart:vend])
        except ValueError as exc:
            raise ParseError(str(exc), base + vstart) from None
        if word and word[-1] == 0:
            raise ParseError("digit words end in a nonzero digit", base + m.start(2))
        entries.setdefault(mval, {})[word] = val
        pos = vend + 1
    return tuple(sorted((m, tuple(sorted(ws.items()))) for m, ws in entries.items()))


def _parse_certify(rest: str, base: int, field: FieldDesc, spec: dict) -> None:
    kind, _, payload = rest.partition(" ")
    pbase = base + len(kind) + 1
    if kind == "seq":
        body = payload.strip()
        if body == "squares":
            spec["seq"] = "squares"
            return
        pre_s, bar, per_s = body.partition("|")
        if not bar:
            raise ParseError("expected <preperiod>|<period>", pbase)

        def elems(s: str, off: int) -> tuple[FqElem, ...]:
            out = []
            for part in [x for x in s.split(",") if x.strip()]:
                try:
                    out.append(parse_element(field, part))
                except ValueError as exc:
                    raise ParseError(str(exc), off) from None
            return tuple(out)

        pre, per = elems(pre_s, pbase), elems(per_s, pbase + len(pre_s) + 1)
        if not per:
            raise ParseError("the periodic part is empty", pbase + len(pre_s) + 1)
        spec["seq"] = (pre, per)
        return
    if kind != "series":
        raise ParseError(f"unknown certify target {kind!r}", base)
    tpos = payload.find("table{")
    if tpos < 0 or not payload.rstrip().endswith("}"):
        raise ParseError("expected table{...}", pbase + max(tpos, 0))
    head = payload[:tpos]
    kv = {}
    for m in _KV.finditer(head):
        kv[m.group(1)] = m.group(2)
    leftover = _KV.sub("", head).strip()
    if leftover:
        raise ParseError(f"unexpected {leftover!r}", pbase + head.find(leftover))
    try:
        a, b, c = int(kv.get("a", "1")), int(kv.get("b", "0")), int(kv.get("c", "0"))
        cert = SupportCert(a, b, c)
    except ValueError as exc:
        raise ParseError(str(exc), pbase) from None
    tbody = payload[tpos + 6: payload.rstrip().rfind("}")]
    table = _parse_table(tbody, pbase + tpos + 6, field)
    if "period" in kv:
        M, _, N = kv["period"].partition(",")
        period = PeriodCert(int(M), int(N or 0))
    else:
        longest = max((len(w) for _, ws in table for w, _ in ws), default=0)
        period = PeriodCert(1, longest + 1)
    spec.update(cert=cert, period=period, table=table)


def parse_input(text: str, default_field: str | None = None) -> JobSpec:
    """Parse a job; errors carry the character offset of the problem."""
    stmts = _split_statements(text)
    spec: dict = {}
    field: FieldDesc | None = None
    command_at: tuple[str, int, str] | None = None
    for chunk, base in stmts:
        s, b = _strip(chunk, base)
        word, _, rest = s.partition(" ")
        rest_base = b + len(word) + 1
        if word == "field":
            try:
                field = field_from_string(rest.strip())
            except HahnError as exc:
                exc.pos = rest_base
                raise
        elif word == "window":
            parts = rest.replace(",", " ").split()
            if len(parts) != 2:
                raise ParseError("window takes r and E", rest_base)
            try:
                spec["window"] = (Fraction(parts[0]), int(parts[1]))
            except (ValueError, ZeroDivisionError):
                raise ParseError("bad window", rest_base) from None
        elif word == "bounds":
            parts = rest.replace(",", " ").split()
            if len(parts) != 2 or not all(x.isdigit() for x in parts):
                raise ParseError("bounds takes M and N", rest_base)
            spec["bounds"] = (int(parts[0]), int(parts[1]))
        elif word == "budget":
            if not rest.strip().isdigit():
                raise ParseError("budget takes a nonnegative integer", rest_base)
            spec["budget"] = int(rest)
        elif word == "format":
            if rest.strip() not in ("text", "json"):
                raise ParseError("format is text or json", rest_base)
            spec["fmt"] = rest.strip()
        elif word in ("roots", "as-solve", "eval", "certify"):
            if command_at is not None:
                raise ParseError("only one command per job", b)
            command_at = (word, rest_base, rest)
        else:
            raise ParseError(f"unknown statement {word!r}", b)
    if field is None:
        if default_field is None:
            raise ParseError("no field given", 0)
        field = field_from_string(default_field)
    if command_at is None:
        raise ParseError("no command given", len(text))
    cmd, cbase, rest = command_at
    if cmd == "roots":
        terms, _ = _sum(rest, cbase, field, True)
        if not terms or max(k for _, _, k in terms) < 1:
            raise ParseError("polynomial must have degree at least 1", cbase)
        spec["terms"] = terms
    elif cmd == "as-solve":
        spec["terms"], _ = _sum(rest, cbase, field, False) if rest.strip() else ((), 0)
    elif cmd == "eval":
        m = re.search(r"\bat\b", rest)
        if not m:
            raise ParseError("expected 'at'", cbase + len(rest))
        terms, _ = _sum(rest[:m.start()], cbase, field, True)
        if not terms or max(k for _, _, k in terms) < 1:
            raise ParseError("polynomial must have degree at least 1", cbase)
        spec["terms"] = terms
        at_text = rest[m.end():]
        spec["at"] = _sum(at_text, cbase + m.end(), field, False)[0] if at_text.strip() else ()
    else:
        _parse_certify(rest.strip(), cbase + len(rest) - len(rest.lstrip()), field, spec)
    return JobSpec(field=field, command=cmd, **spec)


# -- printing ------------------------------------------------------------------------------

def _coef_str(c: FqElem) -> str:
    s = str(c)
    return s if c.field.d == 1 or s.isdigit() else f"({s})"


def _terms_str(terms, with_x: bool) -> str:
    if not terms:
        return "0"
    out = []
    for c, e, k in terms:
        piece = f"{_coef_str(c)}*t^({format_exp(e)})"
        if with_x and k:
            piece += "*x" if k == 1 else f"*x^{k}"
        out.append(piece)
    return " + ".join(out)


def format_job(job: JobSpec) -> str:
    f = job.field
    parts = [f"field {f.p}^{f.d}"]
    if job.command == "roots":
        parts.append("roots " + _terms_str(job.terms, True))
    elif job.command == "as-solve":
        parts.append("as-solve " + _terms_str(job.terms, False))
    elif job.command == "eval":
        parts.append(f"eval {_terms_str(job.terms, True)} at {_terms_str(job.at, False)}")
    elif isinstance(job.seq, str) and job.seq == "squares" and job.cert is None:
        parts.append("certify seq squares")
    elif job.cert is None:
        pre, per = job.seq
        parts.append("certify seq " + ",".join(map(str, pre)) + "|" + ",".join(map(str, per)))
    else:
        c = job.cert
        entries = ", ".join(f"{m}:{''.join(map(str, w)) or '-'}={v}" for m, ws in job.table for w, v in ws)
        parts.append(f"certify series a={c.a} b={c.b} c={c.c} period={job.period.M},{job.period.N} "
                     f"table{{{entries}}}")
    r, E = job.window
    parts.append(f"window {format_exp(r)} {E}")
    parts.append(f"bounds {job.bounds[0]} {job.bounds[1]}")
    parts.append(f"budget {job.budget}")
    if job.fmt != "text":
        parts.append(f"format {job.fmt}")
    return "; ".join(parts)


# -- running ---------------------------------------------------------------------------------

def _series(field: FieldDesc, terms, power: int | None = None) -> FiniteSeries:
    data: dict[Fraction, FqElem] = {}
    for c, e, k in terms:
        if power is None or k == power:
            data[e] = data.get(e, field.zero) + c
    return FiniteSeries(field, data)


def _poly(job: JobSpec) -> SeriesPoly:
    D = max(k for _, _, k in job.terms)
    return SeriesPoly(tuple(_series(job.field, job.terms, k) for k in range(D + 1)))


def _seq_series(job: JobSpec) -> OracleSeries:
    field, p = job.field, job.field.p
    if job.seq == "squares":
        def x(i: int) -> FqElem:
            return field.one if math.isqrt(i) ** 2 == i else field.zero
    else:
        pre, per = job.seq

        def x(i: int) -> FqElem:
            k = i - 1
            return pre[k] if k < len(pre) else per[(k - len(pre)) % len(per)]

    def coeff(e: Fraction) -> FqElem:
        if e.numerator != -1 or e.denominator == 1:
            return field.zero
        i = round(math.log(e.denominator, p))
        return x(i) if p ** i == e.denominator else field.zero

    return OracleSeries(field, SupportCert(1, 0, 1), coeff, "literal")


def _certify(job: JobSpec, report: dict) -> int:
    M_max, N_max = job.bounds
    r, E = job.window
    if job.cert is None:
        x = _seq_series(job)
        tr = detect_tr(x, M_max, N_max, 0, 100, zero_tail=True)
        if tr is None:
            report["result"] = "NotFound"
            return 2
    else:
        funcs = {m: CoeffFunction(job.field, job.cert.c, job.period, dict(ws)) for m, ws in job.table}
        tr = make_tr(job.field, job.cert, funcs)
    report["tr"] = tr.to_dict()
    try:
        wit = algebraicity_witness(tr, window=(r, E), M_max=M_max, N_max=N_max)
    except PeriodUnverified as exc:
        report["result"] = "Unverified"
        report["error"] = {"code": exc.code, "message": str(exc)}
        return 2
    report["witness"] = wit.to_dict()
    report["result"] = "Verified"
    return 0


def run(job: JobSpec) -> tuple[dict, int]:
    """Execute a job; returns the report and the exit status."""
    r, E = job.window
    M_max, N_max = job.bounds
    report: dict = {"job": format_job(job), "field": str(job.field)}
    if job.command == "roots":
        P = _poly(job)
        roots = find_roots(P, r, E, M_max=M_max, N_max=N_max, budget=job.budget)
        report["roots"] = [res.to_dict() for res in roots]
        ok = all(res.verification is not None and res.verification.ok for res in roots)
        return report, 0 if ok else 2
    if job.command == "as-solve":
        y = _series(job.field, job.terms)
        x = as_solve(y)
        report["solution"] = series_to_dict(x, r, E)
        tr = detect_tr(x, M_max, N_max)
        report["period"] = None if tr is None else str(tr.period)
        ok = window_equal(twist(x, "up", 1) - x, y, r, E)
        report["verified"] = ok
        return report, 0 if ok else 2
    if job.command == "eval":
        P = _poly(job)
        s = _series(job.field, job.at)
        rep = verify_root(P, s, r, E)
        report["verification"] = rep.to_dict()
        return report, 0 if rep.ok else 2
    return report, _certify(job, report)


def _text(report: dict) -> str:
    lines = [f"job: {report['job']}"]
    if "roots" in report:
        for i, res in enumerate(report["roots"], 1):
            terms = " + ".join(f"{c}*t^({e})" for e, c in res["terms"]) or "0"
            lines.append(f"root {i}: status={res['status']} multiplicity={res['multiplicity']} "
                         f"period={res['period'] or '-'} cert=S({','.join(map(str, res['cert']))})")
            lines.append(f"  {terms}")
            v = res["verification"]
            lines.append(f"  verify ({v['window'][0]}, {v['window'][1]}): "
                         + ("ok" if not v["nonzero"] else f"{len(v['nonzero'])} nonzero"))
    if "solution" in report:
        sol = report["solution"]
        terms = " + ".join(f"{c}*t^({e})" for e, c in sol["terms"]) or "0"
        lines.append(f"solution cert=S({','.join(map(str, sol['cert']))}) period={report['period'] or '-'}")
        lines.append(f"  {terms}")
        lines.append(f"  verified: {report['verified']}")
    if "verification" in report:
        v = report["verification"]
        lines.append("P(s): " + (" + ".join(f"{c}*t^({e})" for e, c in v["nonzero"]) or "0 on window"))
    if "result" in report:
        lines.append(f"result: {report['result']}")
        if "tr" in report:
            lines.append(f"  period={report['tr']['period']} cert=S({','.join(map(str, report['tr']['cert']))})")
        for step in report.get("witness", {}).get("chain", []):
            lines.append(f"  step spec={step['spec']} cert=S({','.join(map(str, step['cert']))})")
        if "error" in report:
            lines.append(f"  {report['error']['code']}: {report['error']['message']}")
    return "\n".join(lines)


def _selfcheck(n: int, seed: int, field: FieldDesc) -> tuple[dict, int]:
    """Random Artin-Schreier round trips on finite right-hand sides."""
    rng = random.Random(seed)
    p = field.p
    fails = 0
    for _ in range(n):
        terms = {Fraction(rng.randint(-3 * p, 3 * p), p ** rng.randint(0, 2)): field.random(rng, True)
                 for _ in range(rng.randint(0, 3))}
        terms.pop(Fraction(0), None)
        y = FiniteSeries(field, terms)
        x = as_solve(y)
        if not window_equal(twist(x, "up", 1) - x, y, 2, 6):
            fails += 1
    return {"selfcheck": n, "seed": seed, "failures": fails}, 0 if not fails else 2


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="hahnfq", description="Roots and certificates for series over F_q.")
    ap.add_argument("job", nargs="?", help="job text, or - to read it from stdin")
    ap.add_argument("--field", help="default field p^d (else $%s)" % ENV_FIELD)
    ap.add_argument("--window", help="r,E")
    ap.add_argument("--period-bounds", help="M,N")
    ap.add_argument("--budget", type=int)
    ap.add_argument("--format", choices=("text", "json"))
    ap.add_argument("--seed", type=int, help="run N random round trips (N from --budget, default 20)")
    args = ap.parse_args(argv)
    default_field = args.field or os.environ.get(ENV_FIELD)
    try:
        if args.seed is not None and not args.job:
            field = field_from_string(default_field or "2^1")
            report, code = _selfcheck(args.budget or 20, args.seed, field)
            print(json.dumps(report, indent=2) if args.format == "json" else
                  f"selfcheck {report['selfcheck']} seed={report['seed']} failures={report['failures']}")
            return code
        if not args.job:
            ap.error("a job is required")
        text = sys.stdin.read() if args.job == "-" else args.job
        job = parse_input(text, default_field)
        if args.window:
            rs, _, es = args.window.partition(",")
            job = replace(job, window=(Fraction(rs), int(es)))
        if args.period_bounds:
            ms, _, ns = args.period_bounds.partition(",")
            job = replace(job, bounds=(int(ms), int(ns)))
        if args.budget is not None:
            job = replace(job, budget=args.budget)
        if args.format:
            job = replace(job, fmt=args.format)
        report, code = run(job)
    except HahnError as exc:
        err = {"error": {"code": exc.code, "message": str(exc)}}
        pos = getattr(exc, "pos", None)
        if pos is not None:
            err["error"]["position"] = pos
        if args.format == "json":
            print(json.dumps(err, indent=2))
        else:
            print(f"error {exc.code}: {exc}", file=sys.stderr)
        return 1
    if job.fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print(_text(report))
    return code
