"""Twist-recurrent series over finite fields.

A series supported on S_{a,b,c} is described by functions f_m on
T_c = S_{1,0,c} ∩ (-1, 0] with f_m(z) the coefficient at (m + z)/a.  Write
-z in base p: the digit word is a few nonzero digits separated by runs of
zeros.  Growing a single run while the rest of the word stays fixed gives a
*tail sequence*; over F_q the function is twist-recurrent exactly when all
these sequences are eventually periodic with a common (M, N).  Then only
runs shorter than N + M matter: a longer run can be shortened by a multiple
of M without changing the value, and the function is a finite table.

The empty word (z = 0) belongs to the domain; it carries the coefficient at
m/a itself.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import (
    FieldTooSmall,
    IncompatibleDenominator,
    InconsistentDomain,
    NotInDomain,
    PeriodUnverified,
    SpecMismatch,
)
from .exponents import SupportCert, as_exp, base_p_digit_sum, cert_contains, format_exp, to_digits, word_value
from .ffield import FieldDesc, FqElem, frobenius, poly_roots, pth_root
from .lrr import LRRSpec, PeriodCert, detect_period, period_to_lrr, zero_offset
from .series import FiniteSeries, OracleSeries, Series, window_equal

__all__ = [
    "CoeffFunction",
    "TRSeries",
    "TRSeriesHandle",
    "Witness",
    "WitnessStep",
    "canonical_word",
    "canonical_words",
    "eval_coeff_function",
    "build_tr",
    "decompose",
    "twist_operator",
    "algebraicity_witness",
    "as_solve",
    "as_solve_parts",
    "detect_tr",
    "uniform_period",
]

Word = tuple[int, ...]


# -- digit words -----------------------------------------------------------------

def _split(word: Word) -> tuple[list[int], list[int]]:
    """Zero-run lengths before each nonzero digit, and the digits."""
    runs, digits = [], []
    run = 0
    for b in word:
        if b:
            runs.append(run)
            digits.append(b)
            run = 0
        else:
            run += 1
    if run:
        raise ValueError(f"digit word {word} has trailing zeros")
    return runs, digits


def _join(runs: Sequence[int], digits: Sequence[int]) -> Word:
    out: list[int] = []
    for r, b in zip(runs, digits):
        out.extend([0] * r)
        out.append(b)
    return tuple(out)


def _collapse(run: int, period: PeriodCert) -> int:
    M, N = period.M, period.N
    if run < N + M:
        return run
    return N + (run - N) % M


def canonical_word(word: Sequence[int], period: PeriodCert) -> Word:
    runs, digits = _split(tuple(word))
    return _join([_collapse(r, period) for r in runs], digits)


def _digit_patterns(p: int, c: int) -> Iterator[tuple[int, ...]]:
    """Nonempty sequences of nonzero digits with sum <= c."""
    def rec(prefix: tuple[int, ...], budget: int):
        for b in range(1, min(p - 1, budget) + 1):
            yield prefix + (b,)
            yield from rec(prefix + (b,), budget - b)
    yield from rec((), c)


def canonical_words(p: int, c: int, period: PeriodCert) -> Iterator[Word]:
    """Every canonical word of digit sum <= c, the empty word first."""
    yield ()
    R = period.N + period.M
    for digits in _digit_patterns(p, c):
        for runs in itertools.product(range(R), repeat=len(digits)):
            yield _join(runs, digits)


# -- coefficient functions ----------------------------------------------------------

class CoeffFunction:
    """A function on T_c given by its values on canonical digit words.

    Words missing from the table map to zero.
    """

    __slots__ = ("field", "c", "period", "table")

    def __init__(self, field: FieldDesc, c: int, period: PeriodCert,
                 table: Mapping[Sequence[int], FqElem] | None = None):
        self.field = field
        self.c = c
        self.period = period
        tab: dict[Word, FqElem] = {}
        for word, val in (table or {}).items():
            word = tuple(word)
            if any(not 0 <= b < field.p for b in word) or sum(word) > c:
                raise InconsistentDomain(f"word {word} is not in T_{c} for p={field.p}")
            if isinstance(val, int):
                val = field(val)
            key = canonical_word(word, period)
            if key in tab and tab[key] != val:
                raise InconsistentDomain(f"words collapsing to {key} carry different values")
            tab[key] = val
        self.table = {k: v for k, v in tab.items() if v}

    @property
    def p(self) -> int:
        return self.field.p

    def eval_word(self, word: Sequence[int]) -> FqElem:
        return self.table.get(canonical_word(word, self.period), self.field.zero)

    def __call__(self, z) -> FqElem:
        return eval_coeff_function(self, z)

    def is_zero(self) -> bool:
        return not self.table

    def retabulate(self, period: PeriodCert) -> CoeffFunction:
        """The same function tabulated for a coarser period certificate."""
        if period.M % self.period.M or period.N < self.period.N:
            raise ValueError(f"period {period} does not refine {self.period}")
        tab = {w: self.eval_word(w) for w in canonical_words(self.p, self.c, period)}
        return CoeffFunction(self.field, self.c, period, tab)

    def values(self, period: PeriodCert, c: int | None = None) -> list[FqElem]:
        return [self.eval_word(w) for w in canonical_words(self.p, self.c if c is None else c, period)]

    def key(self):
        return (self.c, self.period, tuple(sorted((w, v.v) for w, v in self.table.items())))

    def __eq__(self, other):
        return isinstance(other, CoeffFunction) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "period": str(self.period),
            "table": {_word_str(w): str(v) for w, v in sorted(self.table.items())},
        }

    def __repr__(self) -> str:
        return f"CoeffFunction(c={self.c}, period={self.period}, {len(self.table)} entries)"


def _word_str(word: Word) -> str:
    return "".join(str(b) for b in word) or "-"


def eval_coeff_function(f: CoeffFunction, z) -> FqElem:
    z = as_exp(z)
    if not -1 < z <= 0:
        raise NotInDomain(f"{format_exp(z)} is not in (-1, 0]")
    try:
        w = to_digits(z, 1, f.p)
    except IncompatibleDenominator:
        raise NotInDomain(f"{format_exp(z)} does not have a power of {f.p} as denominator") from None
    if w.digit_sum > f.c:
        raise NotInDomain(f"{format_exp(z)} has digit sum {w.digit_sum} > {f.c}")
    return f.eval_word(w.word())


def uniform_period(periods) -> PeriodCert:
    M, N = 1, 0
    for per in periods:
        M = M * per.M // math.gcd(M, per.M)
        N = max(N, per.N)
    return PeriodCert(M, N)


# -- twist-recurrent series ----------------------------------------------------------

@dataclass(frozen=True)
class TRSeries:
    """Exact finite description of a twist-recurrent series.

    ``assignment[i]`` is the index into ``funcs`` of f_m for m = -b + i (None
    for the zero function).  Beyond the stored range the assignment repeats
    with period ``tail`` in m, or is zero when ``tail`` is 0.
    """

    field: FieldDesc
    cert: SupportCert
    funcs: tuple[CoeffFunction, ...]
    assignment: tuple[int | None, ...]
    tail: int = 0
    candidate: bool = False

    @property
    def m_lo(self) -> int:
        return -self.cert.b

    @property
    def m_hi(self) -> int:
        return self.m_lo + len(self.assignment) - 1

    def func_for(self, m: int) -> CoeffFunction | None:
        i = m - self.m_lo
        n = len(self.assignment)
        if i < 0:
            return None
        if i >= n:
            if not self.tail:
                return None
            base = n - self.tail
            i = base + (i - base) % self.tail
        idx = self.assignment[i]
        return None if idx is None else self.funcs[idx]

    @property
    def period(self) -> PeriodCert:
        return uniform_period(f.period for f in self.funcs)

    @property
    def basis_rank(self) -> int:
        return len(_coordinates([f.values(self.period, self.cert.c) for f in self.funcs])[0])

    def coeff(self, e) -> FqElem:
        e = as_exp(e)
        if not cert_contains(self.cert, e, self.field.p):
            return self.field.zero
        w = to_digits(e, self.cert.a, self.field.p)
        f = self.func_for(w.n)
        return f.eval_word(w.word()) if f is not None else self.field.zero

    def to_dict(self) -> dict:
        return {
            "cert": [self.cert.a, self.cert.b, self.cert.c],
            "period": str(self.period),
            "funcs": [f.to_dict() for f in self.funcs],
            "assignment": {str(self.m_lo + i): idx for i, idx in enumerate(self.assignment) if idx is not None},
            "tail": "zero" if not self.tail else f"periodic {self.tail}",
            "candidate": self.candidate,
        }


def make_tr(field: FieldDesc, cert: SupportCert, funcs: Mapping[int, CoeffFunction],
            tail: int = 0, candidate: bool = False) -> TRSeries:
    """Collect f_m into a :class:`TRSeries`, sharing equal functions."""
    m_lo = -cert.b
    for m, f in funcs.items():
        if m < m_lo:
            raise InconsistentDomain(f"f_{m} given but the certificate starts at m = {m_lo}")
        if f.field != field:
            raise InconsistentDomain(f"f_{m} lives over {f.field!r}, expected {field!r}")
        if f.c > cert.c:
            raise InconsistentDomain(f"f_{m} is defined on T_{f.c} but the certificate has c = {cert.c}")
    live = {m: f for m, f in funcs.items() if not f.is_zero()}
    if tail and not funcs:
        raise InconsistentDomain("a periodic tail needs stored functions")
    hi = max(funcs) if tail else (max(live) if live else m_lo - 1)
    per = uniform_period(f.period for f in live.values())
    uniq: list[CoeffFunction] = []
    index: dict[CoeffFunction, int] = {}
    assignment: list[int | None] = []
    for m in range(m_lo, hi + 1):
        f = live.get(m)
        if f is None:
            assignment.append(None)
            continue
        g = CoeffFunction(field, cert.c, per, {w: f.eval_word(w) for w in canonical_words(field.p, f.c, per)})
        if g not in index:
            index[g] = len(uniq)
            uniq.append(g)
        assignment.append(index[g])
    if tail and tail > len(assignment):
        raise InconsistentDomain("tail period longer than the stored range")
    return TRSeries(field, cert, tuple(uniq), tuple(assignment), tail, candidate)


class TRSeriesHandle(Series):
    provenance = "tr"

    def __init__(self, tr: TRSeries):
        super().__init__(tr.field, tr.cert)
        self.tr = tr

    def _coeff(self, e):
        return self.tr.coeff(e)


def build_tr(cert: SupportCert | TRSeries, funcs: Mapping[int, CoeffFunction] | None = None,
             tail: int = 0, field: FieldDesc | None = None) -> TRSeriesHandle:
    """Series with coefficient f_m(z) at (m + z)/a."""
    if isinstance(cert, TRSeries):
        return TRSeriesHandle(cert)
    funcs = funcs or {}
    if field is None:
        if not funcs:
            raise InconsistentDomain("cannot infer the field of an empty family")
        field = next(iter(funcs.values())).field
    return TRSeriesHandle(make_tr(field, cert, funcs, tail))


def _coordinates(vectors: Sequence[Sequence[FqElem]]) -> tuple[list[int], list[dict[int, FqElem]]]:
    """Greedy basis among ``vectors`` and each vector's coordinates in it."""
    rows: list[tuple[int, list[FqElem], dict[int, FqElem]]] = []
    basis: list[int] = []
    coords: list[dict[int, FqElem]] = []
    for vi, v in enumerate(vectors):
        res = list(v)
        comb: dict[int, FqElem] = {}
        for piv, row, rcomb in rows:
            if res[piv]:
                f = res[piv] / row[piv]
                res = [a - f * b for a, b in zip(res, row)]
                for k, cval in rcomb.items():
                    comb[k] = comb.get(k, f.field.zero) + f * cval
        piv = next((i for i, a in enumerate(res) if a), None)
        if piv is None:
            coords.append({k: cv for k, cv in comb.items() if cv})
            continue
        b = len(basis)
        basis.append(vi)
        one = res[piv].field.one
        rows.append((piv, res, {b: one, **{k: -cv for k, cv in comb.items()}}))
        coords.append({b: one})
    return basis, coords


def decompose(x: TRSeries | TRSeriesHandle) -> list[tuple[Series, TRSeries]]:
    """Write x = sum_j L_j * g_j with g_j supported on (1/a) T_c.

    L_j is a series in t^(1/a) with integral exponents over a; the g_j are a
    basis of the span of the f_m, taken greedily in order of m.
    """
    tr = x.tr if isinstance(x, TRSeriesHandle) else x
    field, cert = tr.field, tr.cert
    if not tr.funcs:
        return []
    per = tr.period
    vecs = [f.values(per, cert.c) for f in tr.funcs]
    basis, coords = _coordinates(vecs)
    out = []
    for j, fi in enumerate(basis):
        piece = TRSeries(field, SupportCert(cert.a, 0, cert.c), (tr.funcs[fi],), (0,))
        coef = {}
        for i, idx in enumerate(tr.assignment):
            if idx is not None and j in coords[idx]:
                coef[i] = coords[idx][j]
        if tr.tail:
            lo, n, P, a = tr.m_lo, len(tr.assignment), tr.tail, cert.a

            def lc(e, coef=coef, lo=lo, n=n, P=P, a=a):
                m = e * a
                if m.denominator != 1:
                    return field.zero
                i = int(m) - lo
                if i >= n:
                    i = n - P + (i - (n - P)) % P
                return coef.get(i, field.zero)

            laurent: Series = OracleSeries(field, SupportCert(cert.a, cert.b, 0), lc, "laurent")
        else:
            laurent = FiniteSeries(field, {Fraction(tr.m_lo + i, cert.a): v for i, v in coef.items()})
        out.append((laurent, piece))
    return out


# -- the twist operator -------------------------------------------------------------------

def _single_function(x) -> tuple[CoeffFunction, int]:
    """The function and scale of a series supported on (1/a) T_c."""
    if isinstance(x, CoeffFunction):
        return x, 1
    tr = x.tr if isinstance(x, TRSeriesHandle) else x
    if not isinstance(tr, TRSeries):
        raise TypeError("expected a TRSeries or CoeffFunction")
    if tr.cert.b or tr.tail or any(idx is not None for idx in tr.assignment[1:]):
        raise ValueError("the twist operator acts on series supported on (1/a) T_c")
    f = tr.func_for(0)
    if f is None:
        f = CoeffFunction(tr.field, tr.cert.c, PeriodCert(1, 0))
    return f, tr.cert.a


def _check_tails(f: CoeffFunction, spec: LRRSpec, depth: int) -> None:
    """Check the relation along the leading-run tails of every canonical word."""
    k = spec.order
    per = f.period
    _check_seq(spec, [f.eval_word(())] * (k + 1), ())
    extra = per.N + per.M + k + depth
    for word in canonical_words(f.p, f.c, per):
        if not word or word[0] == 0:
            continue
        seq = [f.eval_word((0,) * g + word) for g in range(extra)]
        for n in range(len(seq) - k):
            _check_seq(spec, seq[n:n + k + 1], word)


def _check_seq(spec: LRRSpec, seq: Sequence[FqElem], word: Word) -> None:
    acc = seq[0].field.zero
    for i, d in enumerate(spec.coeffs):
        acc = acc + d * frobenius(seq[i], i)
    if acc:
        raise SpecMismatch(f"relation {spec} fails on the tail of word {_word_str(word)}")


def twist_operator(x, spec: LRRSpec, *, check_depth: int = 4, corrected: bool = True) -> Series:
    """y with y^(p^k) = sum d_i x^(p^i), i.e. y = sum d_i^(1/p^k) x^(1/p^(k-i)).

    When every tail sequence of x satisfies the relation, all exponents whose
    first k digits vanish cancel and y is supported on
    S_{a p^k, p^k - 1, c - 1}.  With ``corrected=False`` the uncancelled
    certificate S_{a p^k, p^k - 1, c} is attached instead.
    """
    f, a = _single_function(x)
    field, p = f.field, f.p
    if f.c < 1 and corrected:
        raise ValueError("the twist operator needs c >= 1")
    spec = zero_offset(spec.embedded(field))
    k = spec.order
    _check_tails(f, spec, check_depth)
    D = [pth_root(d, k) for d in spec.coeffs]
    xs = TRSeriesHandle(TRSeries(field, SupportCert(a, 0, f.c), (f,), (0,)))
    pk = p ** k

    def coeff(w: Fraction) -> FqElem:
        acc = field.zero
        for i, Di in enumerate(D):
            if Di:
                j = k - i
                acc = acc + Di * pth_root(xs.coeff(w * p ** j), j)
        return acc

    cert = SupportCert(a * pk, pk - 1, f.c - 1 if corrected else f.c)
    return OracleSeries(field, cert, coeff, "twist-operator")


@dataclass
class WitnessStep:
    spec: LRRSpec
    cert: SupportCert
    outputs: tuple[Series, ...]
    detected: tuple[TRSeries, ...]
    window: tuple[Fraction, int]

    def to_dict(self) -> dict:
        return {"spec": str(self.spec), "cert": [self.cert.a, self.cert.b, self.cert.c],
                "window": [format_exp(self.window[0]), self.window[1]],
                "periods": [str(t.period) for t in self.detected]}


@dataclass
class Witness:
    """Twist-operator chain taking digit-sum bound c down to 0."""

    chain: list[WitnessStep]
    terminal: tuple[Series, ...]
    decomposition: list[tuple[Series, TRSeries]] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"chain": [s.to_dict() for s in self.chain],
                "terminal_certs": [[t.cert.a, t.cert.b, t.cert.c] for t in self.terminal]}


def algebraicity_witness(x: TRSeries | TRSeriesHandle, *, window=(1, 10), M_max: int = 8,
                         N_max: int = 8, samples: int = 40) -> Witness:
    """Reduce the digit-sum bound one twist operator at a time.

    Each step applies one relation (from the common period certificate of the
    current pieces) to every piece, checks on ``window`` that the uncancelled
    output equals the output under the corrected certificate, recovers the
    output's tables, and checks those against the output.  Any failure raises
    :class:`PeriodUnverified`.
    """
    tr = x.tr if isinstance(x, TRSeriesHandle) else x
    r, E = as_exp(window[0]), window[1]
    field = tr.field
    parts = decompose(tr)
    pieces = [g for _, g in parts]
    c = tr.cert.c
    chain: list[WitnessStep] = []
    outputs: list[Series] = [TRSeriesHandle(tr)]
    while c > 0 and pieces:
        per = uniform_period(g.period for g in pieces)
        spec = period_to_lrr(per, field)
        outs, found, nxt = [], [], []
        for g in pieces:
            try:
                y = twist_operator(g, spec)
            except SpecMismatch as exc:
                raise PeriodUnverified(str(exc)) from exc
            raw = twist_operator(g, spec, corrected=False)
            if not window_equal(raw, y, r, E):
                raise PeriodUnverified(f"cancellation fails on window ({format_exp(r)}, {E})")
            Y = detect_tr(y, M_max=M_max, N_max=N_max, m_max=0, samples=samples, zero_tail=True)
            if Y is None:
                raise PeriodUnverified("no period certificate for a twisted piece")
            if not window_equal(TRSeriesHandle(Y), y, r, E):
                raise PeriodUnverified(f"recovered tables disagree on window ({format_exp(r)}, {E})")
            outs.append(y)
            found.append(Y)
            nxt.extend(piece for _, piece in decompose(Y))
        chain.append(WitnessStep(spec, outs[0].cert if outs else SupportCert(), tuple(outs), tuple(found), (r, E)))
        outputs = outs
        pieces = nxt
        c -= 1
    return Witness(chain, tuple(outputs), parts)


# -- Artin-Schreier equations --------------------------------------------------------------

def as_solve_parts(y: Series) -> tuple[Series, FqElem, Series]:
    """Negative part, constant term and positive part of the principal
    solution of x^p - x = y."""
    field, p = y.field, y.field.p
    a, b, c = y.cert.a, y.cert.b, y.cert.c
    low = y.cert.lower_bound()

    def neg(e: Fraction) -> FqElem:
        if e >= 0:
            return field.zero
        acc = field.zero
        n, f = 1, e * p
        while f > low:
            v = y.coeff(f)
            if v:
                acc = acc + pth_root(v, n)
            n += 1
            f *= p
        return acc

    stop = Fraction(1, p ** (c + 1))

    def pos(e: Fraction) -> FqElem:
        if e <= 0:
            return field.zero
        acc = field.zero
        n, f = 0, e
        while a * f >= stop:
            v = y.coeff(f)
            if v:
                acc = acc - frobenius(v, n)
            n += 1
            f /= p
        return acc

    y0 = y.coeff(0)
    poly = [-y0, -field.one] + [field.zero] * (p - 2) + [field.one]
    roots = poly_roots(poly)
    if not roots:
        raise FieldTooSmall(field.d * p, f"x^{p} - x = {y0} has no root in {field!r}")
    const = roots[0][0]
    # -(|m| + f)/p^n keeps the digits of |m| + f, whose digit sum is at most
    # s_p(|m|) + c; this never exceeds b + c
    c_neg = c + max((base_p_digit_sum(k, p) for k in range(b + 1)), default=0)
    return (OracleSeries(field, SupportCert(a, b, c_neg), neg, "as-solution"),
            const,
            OracleSeries(field, SupportCert(a, 0, c), pos, "as-solution"))


def as_solve(y: Series) -> Series:
    """The principal solution of x^p - x = y; the others add elements of F_p."""
    neg, const, pos = as_solve_parts(y)
    field = y.field

    def coeff(e: Fraction) -> FqElem:
        if e < 0:
            return neg.coeff(e)
        if e > 0:
            return pos.coeff(e)
        return const

    cert = neg.cert
    return OracleSeries(field, cert, coeff, "as-solution")


# -- detection ------------------------------------------------------------------------------

def detect_tr(x: Series, M_max: int = 8, N_max: int = 8, m_max: int | None = 8, samples: int = 100,
              *, limit=None, zero_tail: bool = False) -> TRSeries | None:
    """Look for a twist-recurrent description of x.

    For each m in [-b, m_max] every tail sequence (one zero run growing, the
    others below the common N + M found so far) is tested for eventual
    periodicity.  With
    ``limit`` only exponents below it are trusted: sequences stop there,
    short ones that fail are skipped, and table entries above it are zero.
    Returns None when a fully sampled sequence has no period within the
    bounds.  The result is a candidate until checked against the defining
    equation.
    """
    field, p = x.field, x.field.p
    a, b, c = x.cert.a, x.cert.b, x.cert.c
    lim = None if limit is None else as_exp(limit)
    m_lo = -b
    m_hi = m_lo + 8 if m_max is None else m_max
    if lim is not None:
        m_hi = min(m_hi, math.ceil(a * lim))
        zero_tail = True
    if m_hi < m_lo:
        return TRSeries(field, SupportCert(a, b, c), (), (), 0, True)
    R = N_max + M_max
    samples = max(samples, N_max + 2 * M_max)

    def known(e: Fraction) -> bool:
        return lim is None or e < lim

    def value(m: int, word: Word) -> FqElem:
        e = (m - word_value(word, p)) / a
        if not known(e):
            return field.zero
        return x.coeff(e)

    # the other runs only need to reach the current N + M; widen until stable
    periods: list[PeriodCert] = []
    seen: set = set()
    reach = 1
    while True:
        for m in range(m_lo, m_hi + 1):
            for digits in _digit_patterns(p, c):
                s = len(digits)
                for j in range(s):
                    for others in itertools.product(range(reach), repeat=s - 1):
                        key = (m, digits, j, others)
                        if key in seen:
                            continue
                        seen.add(key)
                        seq = []
                        for g in range(samples):
                            runs = list(others[:j]) + [g] + list(others[j:])
                            e = (m - word_value(_join(runs, digits), p)) / a
                            if not known(e):
                                break
                            seq.append(x.coeff(e))
                        if len(seq) < 2:
                            continue
                        per = detect_period(seq, M_max, N_max, len(seq))
                        if per is None:
                            if len(seq) >= samples:
                                return None
                            continue
                        periods.append(per)
        per = uniform_period(periods)
        if per.N + per.M <= reach or reach >= R:
            break
        reach = min(per.N + per.M, R)
    per = uniform_period(periods)
    funcs: dict[int, CoeffFunction] = {}
    for m in range(m_lo, m_hi + 1):
        tab = {w: value(m, w) for w in canonical_words(p, c, per)}
        funcs[m] = CoeffFunction(field, c, per, tab)
    tail = 0
    if not zero_tail:
        ms = list(range(m_lo, m_hi + 1))
        if not all(funcs[m].is_zero() for m in ms[-2:]):
            keys = [funcs[m].key() for m in ms]
            ids = {k: i for i, k in enumerate(dict.fromkeys(keys))}
            seq = [ids[k] for k in keys]
            found = None
            for N in range(len(seq)):
                for M in range(1, M_max + 1):
                    if len(seq) < N + 2 * M:
                        break
                    if all(seq[n + M] == seq[n] for n in range(N, len(seq) - M)):
                        found = M
                        break
                if found:
                    break
            if not found:
                return None
            if not all(funcs[m].is_zero() for m in ms[-found:]):
                tail = found
    return make_tr(field, SupportCert(a, b, c), funcs, tail, candidate=True)
