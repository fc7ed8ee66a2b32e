"""Roots of polynomials with series coefficients.

Roots are expanded one term at a time.  The Newton polygon of the current
polynomial gives the valuation mu of the next term, the residual polynomial
its coefficient c, and the polynomial is translated by c*t^mu before the
next step.  Branches split at every distinct residual root and carry the
root's multiplicity.

Supports of roots accumulate (the root of x^2 + x + t^-1 has a term at
-1/2^e for every e), so a branch also stops once the next exponent is
deeper than the depth bound E.  At that point the known coefficients are
searched for a twist-recurrent pattern; if one is found the polynomial is
translated by the whole extrapolated series and the expansion carries on
past the accumulation point.  Nothing is declared exact until the periodic
description has been recovered and the polynomial vanishes on a larger
window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, FieldTooSmall, UnresolvedValuation
from .exponents import as_exp, depth, format_exp
from .ffield import FieldDesc, FqElem, embed, poly_roots, splitting_degree
from .lrr import PeriodCert
from .series import (
    FiniteSeries,
    OracleSeries,
    Series,
    ValuationAtLeast,
    add,
    format_terms,
    materialize,
    monomial,
    mul,
    scale,
    twist,
    valuation,
    window_equal,
    zero_series,
)
from .twistrec import TRSeries, TRSeriesHandle, as_solve, detect_tr

__all__ = [
    "SeriesPoly",
    "Segment",
    "NewtonPolygon",
    "RootResult",
    "VerifyReport",
    "newton_polygon",
    "residual_poly",
    "translate",
    "inseparable_reduce",
    "expand_root",
    "as_fast_path",
    "verify_root",
    "find_roots",
    "embed_series",
]

EXACT = "ExactPeriodic"
WINDOW = "WindowOnly"


def _is_zero(s: Series) -> bool:
    return isinstance(s, FiniteSeries) and not s.data


def embed_series(x: Series, target: FieldDesc) -> Series:
    if x.field == target:
        return x
    if isinstance(x, FiniteSeries):
        return FiniteSeries(target, {e: embed(c, target) for e, c in x.data.items()}, x.cert, x.provenance)
    return OracleSeries(target, x.cert, lambda e: embed(x.coeff(e), target), x.provenance)


@dataclass(frozen=True)
class SeriesPoly:
    """a_0 + a_1 x + ... + a_D x^D with series coefficients."""

    coeffs: tuple[Series, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("a polynomial needs degree at least 1")
        if _is_zero(self.coeffs[-1]):
            raise ValueError("leading coefficient is zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def field(self) -> FieldDesc:
        return self.coeffs[0].field

    def embedded(self, ambient: FieldDesc) -> SeriesPoly:
        return SeriesPoly(tuple(embed_series(a, ambient) for a in self.coeffs))

    def eval(self, x: Series) -> Series:
        acc: Series = self.coeffs[-1]
        for a in reversed(self.coeffs[:-1]):
            acc = add(mul(acc, x), a)
        return acc

    def __str__(self) -> str:
        parts = []
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            body = format_terms(a.all_terms()) if isinstance(a, FiniteSeries) else repr(a)
            parts.append(f"({body})*x^{i}")
        return " + ".join(parts)


@dataclass(frozen=True)
class Segment:
    i1: int
    v1: Fraction
    i2: int
    v2: Fraction

    @property
    def length(self) -> int:
        return self.i2 - self.i1

    @property
    def mu(self) -> Fraction:
        """Valuation of the roots attached to this segment."""
        return (self.v1 - self.v2) / (self.i2 - self.i1)


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple[tuple[int, Fraction | ValuationAtLeast | None], ...]
    hull: tuple[tuple[int, Fraction], ...]
    segments: tuple[Segment, ...]

    @property
    def slopes(self) -> list[tuple[Fraction, int]]:
        """(root valuation, number of roots) per segment, hull order."""
        return [(s.mu, s.length) for s in self.segments]


def _lower_hull(pts: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for pt in sorted(pts):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _points(P: SeriesPoly, r, E: int) -> list[Fraction | ValuationAtLeast | None]:
    out = []
    for a in P.coeffs:
        out.append(None if _is_zero(a) else valuation(a, r, E))
    return out


def _polygon(points, start: int = 0) -> NewtonPolygon:
    pts = [(i, v) for i, v in enumerate(points) if i >= start and isinstance(v, Fraction)]
    hull = _lower_hull(pts)
    segs = tuple(Segment(i1, v1, i2, v2) for (i1, v1), (i2, v2) in zip(hull, hull[1:]))
    return NewtonPolygon(tuple(enumerate(points)), tuple(hull), segs)


def newton_polygon(P: SeriesPoly, search=(8, 8)) -> NewtonPolygon:
    """Lower hull of (i, val a_i); zero coefficients are left out."""
    r, E = as_exp(search[0]), search[1]
    points = _points(P, r, E)
    for i, v in enumerate(points):
        if isinstance(v, ValuationAtLeast):
            raise UnresolvedValuation(f"valuation of a_{i} not found below {format_exp(r)} at depth {E}")
    return _polygon(points)


def residual_poly(P: SeriesPoly, seg: Segment) -> list[FqElem]:
    """sum over points on the segment of lc(a_i) c^(i - i1), low degree first."""
    mu = seg.mu
    field = P.field
    out = [field.zero] * (seg.length + 1)
    for i in range(seg.i1, seg.i2 + 1):
        v = seg.v1 - mu * (i - seg.i1)
        out[i - seg.i1] = P.coeffs[i].coeff(v)
    return out


def translate(P: SeriesPoly, s: Series) -> SeriesPoly:
    """P(x + s), expanded binomially."""
    if _is_zero(s):
        return P
    D, p = P.degree, P.field.p
    powers: list[Series] = [monomial(P.field, 1, 0)]
    for _ in range(D):
        powers.append(mul(powers[-1], s))
    out = []
    for j in range(D + 1):
        acc: Series = zero_series(P.field)
        for i in range(j, D + 1):
            b = math.comb(i, j) % p
            if b and not _is_zero(P.coeffs[i]):
                term = P.coeffs[i] if i == j else mul(P.coeffs[i], powers[i - j])
                acc = add(acc, scale(term, P.field(b)))
        out.append(acc)
    return SeriesPoly(tuple(out))


def inseparable_reduce(P: SeriesPoly) -> tuple[SeriesPoly, int]:
    """(Q, e) with P(x) = Q(x^(p^e)) and e maximal."""
    p = P.field.p
    idx = [i for i, a in enumerate(P.coeffs) if i and not _is_zero(a)]
    e = 0
    while all(i % p ** (e + 1) == 0 for i in idx):
        e += 1
    if e == 0:
        return P, 0
    step = p ** e
    return SeriesPoly(tuple(P.coeffs[::step])), e


@dataclass
class VerifyReport:
    r: Fraction
    E: int
    nonzero: tuple[tuple[Fraction, FqElem], ...]
    exact: bool = False

    @property
    def ok(self) -> bool:
        return not self.nonzero

    def to_dict(self) -> dict:
        return {"window": [format_exp(self.r), self.E], "exact": self.exact,
                "nonzero": [[format_exp(e), str(c)] for e, c in self.nonzero]}


def verify_root(P: SeriesPoly, x: Series, r, E: int) -> VerifyReport:
    """Materialize P(x) on the window (r, E) and list what survives.

    ``exact`` is set only when x and every coefficient are finite, in which
    case P(x) was computed in full.
    """
    r = as_exp(r)
    val = P.eval(x)
    if isinstance(val, FiniteSeries):
        return VerifyReport(r, E, tuple((e, c) for e, c in val.all_terms() if e < r and depth(e, P.field.p) <= E),
                            exact=not val.data)
    return VerifyReport(r, E, materialize(val, r, E).terms)


@dataclass
class RootResult:
    series: Series
    multiplicity: int
    status: str
    window: tuple[Fraction, int]
    verification: VerifyReport | None = None
    period: PeriodCert | None = None
    tr: TRSeries | None = None
    path: tuple = ()

    def to_dict(self, r=None, E=None) -> dict:
        r = self.window[0] if r is None else r
        E = self.window[1] if E is None else E
        w = materialize(self.series, r, E)
        c = self.series.cert
        return {
            "terms": [[format_exp(e), str(v)] for e, v in w.terms],
            "cert": [c.a, c.b, c.c],
            "period": None if self.period is None else str(self.period),
            "multiplicity": self.multiplicity,
            "status": self.status,
            "window": [format_exp(self.window[0]), self.window[1]],
            "verification": None if self.verification is None else self.verification.to_dict(),
        }


@dataclass
class _Job:
    P: SeriesPoly
    r: Fraction
    E: int
    r_val: Fraction
    E_val: int
    M_max: int
    N_max: int
    samples: int
    budget: int
    extrapolate: bool
    steps: int = 0
    found: list = dc_field(default_factory=list)


def _tick(job: _Job) -> None:
    job.steps += 1
    if job.steps > job.budget:
        raise BudgetExceeded(f"more than {job.budget} expansion steps")


def _extrapolate(job: _Job, s: Series, mu: Fraction) -> Series | None:
    cand = detect_tr(s, job.M_max, job.N_max, None, job.samples, limit=mu)
    if cand is None or not cand.funcs:
        return None
    xt = TRSeriesHandle(cand)
    if not window_equal(xt, s, mu, job.E):
        return None
    if window_equal(xt, s, job.r_val, job.E_val):
        return None
    return xt


def _explore(job: _Job, Q: SeriesPoly, s: Series, floor: Fraction | None, strict: bool,
             extrapolated: bool, path: tuple) -> None:
    _tick(job)
    points = _points(Q, job.r_val, job.E_val)
    D = Q.degree
    if not isinstance(points[D], Fraction):
        raise UnresolvedValuation("leading coefficient has no term in the search window")
    j = 0
    while not isinstance(points[j], Fraction):
        j += 1
    if j:
        exact = isinstance(s, FiniteSeries) and all(_is_zero(a) for a in Q.coeffs[:j])
        job.found.append((path + ((1, 0),), s, j, exact, True))
    poly = _polygon(points, j)
    segs = [g for g in poly.segments
            if floor is None or g.mu > floor or (not strict and g.mu == floor)]
    for seg in sorted(segs, key=lambda g: g.mu):
        mu = seg.mu
        here = path + ((0, mu),)
        if mu >= job.r:
            job.found.append((here, s, seg.length, False, False))
            continue
        if depth(mu, Q.field.p) > job.E:
            if job.extrapolate and not extrapolated:
                xt = _extrapolate(job, s, mu)
                if xt is not None:
                    _explore(job, translate(job.P, xt), xt, mu, False, True, here)
                    continue
            job.found.append((here, s, seg.length, False, False))
            continue
        res = residual_poly(Q, seg)
        roots = poly_roots(res)
        if sum(m for _, m in roots) < seg.length:
            raise FieldTooSmall(splitting_degree(res),
                                f"residual polynomial at valuation {format_exp(mu)} does not split")
        for c, _m in roots:
            term = monomial(Q.field, c, mu)
            _explore(job, translate(Q, term), add(s, term), mu, True, extrapolated,
                     here + ((c.sort_key(),),))


def _finish(P: SeriesPoly, s: Series, mult: int, exact: bool, zero_root: bool, r: Fraction, E: int,
            M_max: int, N_max: int, samples: int, path: tuple) -> RootResult:
    if exact:
        rep = verify_root(P, s, r, E)
        cand = detect_tr(s, M_max, N_max, None, samples)
        period = cand.period if cand is not None else PeriodCert(1, 0)
        return RootResult(s, mult, EXACT, (r, E), rep, period, cand, path)
    if zero_root:
        cand = detect_tr(s, M_max, N_max, None, samples)
        if cand is not None:
            xt = TRSeriesHandle(cand)
            if window_equal(xt, s, r, E):
                big = verify_root(P, xt, r + 1, E + 2)
                if big.ok:
                    return RootResult(xt, mult, EXACT, (r, E), verify_root(P, xt, r, E), cand.period, cand, path)
    return RootResult(s, mult, WINDOW, (r, E), verify_root(P, s, r, E), None, None, path)


def expand_root(P: SeriesPoly, r=2, E: int = 8, ambient: FieldDesc | None = None, *,
                M_max: int = 8, N_max: int = 8, samples: int = 40, budget: int = 2000,
                extrapolate: bool = True) -> list[RootResult]:
    """All roots of P, expanded on the window (r, E), in branch order."""
    r = as_exp(r)
    if ambient is not None:
        P = P.embedded(ambient)
    Q, e = inseparable_reduce(P)
    if e:
        pe = Q.field.p ** e
        inner = expand_root(Q, r * pe, E, M_max=M_max, N_max=N_max, samples=samples,
                            budget=budget, extrapolate=extrapolate)
        out = []
        for res in inner:
            x = twist(res.series, "down", e)
            out.append(_finish(P, x, res.multiplicity * pe, res.status == EXACT and isinstance(x, FiniteSeries),
                               res.status == EXACT, r, E, M_max, N_max, samples, res.path))
        return out
    D = P.degree
    r_val = D * max(r, 0) + D + 1
    job = _Job(P, r, E, r_val, E + 1, M_max, N_max, samples, budget, extrapolate)
    _explore(job, P, zero_series(P.field), None, False, False, ())
    return [_finish(P, s, mult, exact, zr, r, E, M_max, N_max, samples, path)
            for path, s, mult, exact, zr in job.found]


def as_fast_path(P: SeriesPoly, r=2, E: int = 8, *, M_max: int = 8, N_max: int = 8,
                 samples: int = 40) -> list[RootResult] | None:
    """Roots of u*(x^p - x - y) straight from the Artin-Schreier formulas."""
    field = P.field
    p = field.p
    if P.degree != p:
        return None
    lead, lin = P.coeffs[p], P.coeffs[1]
    if not (isinstance(lead, FiniteSeries) and list(lead.data) == [0]):
        return None
    u = lead.data[Fraction(0)]
    if not (isinstance(lin, FiniteSeries) and lin.data == {Fraction(0): -u}):
        return None
    if any(not _is_zero(a) for a in P.coeffs[2:p]):
        return None
    y = scale(P.coeffs[0], -u.inverse())
    x0 = as_solve(y)
    r = as_exp(r)
    out = []
    for k in range(p):
        x = add(x0, monomial(field, k, 0)) if k else x0
        out.append(_finish(P, x, 1, False, True, r, E, M_max, N_max, samples, ((k,),)))
    return out


def find_roots(P: SeriesPoly, r=2, E: int = 8, ambient: FieldDesc | None = None, **kw) -> list[RootResult]:
    """Artin-Schreier shortcut when it applies, Newton expansion otherwise."""
    if ambient is not None:
        P = P.embedded(ambient)
    fast = as_fast_path(P, r, E, **{k: v for k, v in kw.items() if k in ("M_max", "N_max", "samples")})
    if fast is not None:
        return fast
    return expand_root(P, r, E, **kw)
