"""Generalized power series as coefficient oracles with support certificates.

A :class:`Series` answers ``coeff(e)`` exactly for any rational exponent and
carries a :class:`~hahnfq.exponents.SupportCert` (a, b, c) such that every
nonzero coefficient sits on S_{a,b,c}.  Coefficients off the certificate are
zero and never reach the oracle.

Supports accumulate (t^-1/2 + t^-1/4 + ... has infinitely many terms below
0), so the finite view is a *window* (r, E): all exponents below r whose
denominator has p-adic depth at most E.  No operation here ever concludes
that a series is zero from a window; :func:`valuation` reports
:class:`ValuationAtLeast` instead.

Finite series are stored explicitly and combine exactly; everything else is
lazy and memoized (memo tables are internal and never change an answer).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DuplicateExponent
from .exponents import (
    SupportCert,
    as_exp,
    carry_slack,
    cert_contains,
    cert_join,
    cert_transform,
    cert_window,
    depth,
    format_exp,
    split_denominator,
    split_representations,
    to_digits,
    vp,
)
from .ffield import FieldDesc, FqElem, frobenius, pth_root

__all__ = [
    "Series",
    "FiniteSeries",
    "OracleSeries",
    "Window",
    "ValuationAtLeast",
    "from_terms",
    "monomial",
    "zero_series",
    "coeff",
    "add",
    "negate",
    "mul",
    "twist",
    "valuation",
    "truncate_below",
    "materialize",
    "window_equal",
    "minimal_cert",
]

Term = tuple[Fraction, FqElem]


@dataclass(frozen=True)
class Window:
    r: Fraction
    E: int
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return format_terms(self.terms)

    def to_dict(self) -> dict:
        return {
            "r": format_exp(self.r),
            "E": self.E,
            "terms": [[format_exp(e), str(c)] for e, c in self.terms],
        }


@dataclass(frozen=True)
class ValuationAtLeast:
    """No nonzero coefficient in the searched window (r, E)."""

    r: Fraction
    E: int

    def __str__(self) -> str:
        return f">= {format_exp(self.r)} (searched to depth {self.E})"


def format_terms(terms: Iterable[Term]) -> str:
    parts = [f"{c}*t^({format_exp(e)})" if c.field.d == 1 or "+" not in str(c)
             else f"({c})*t^({format_exp(e)})" for e, c in terms]
    return " + ".join(parts) if parts else "0"


class Series:
    """Base class: a lazily evaluated series over a finite field."""

    provenance = "oracle"

    def __init__(self, field: FieldDesc, cert: SupportCert):
        self.field = field
        self.cert = cert
        self._memo: dict[Fraction, FqElem] = {}
        self._windows: dict[tuple[Fraction, int], tuple[Term, ...]] = {}
        self._lock = threading.Lock()

    @property
    def p(self) -> int:
        return self.field.p

    def is_finite(self) -> bool:
        return False

    # -- coefficient access -----------------------------------------------

    def coeff(self, e) -> FqElem:
        e = as_exp(e)
        hit = self._memo.get(e)
        if hit is not None:
            return hit
        if not cert_contains(self.cert, e, self.field.p):
            val = self.field.zero
        else:
            val = self._coeff(e)
        with self._lock:
            self._memo[e] = val
        return val

    def _coeff(self, e: Fraction) -> FqElem:
        raise NotImplementedError

    def terms(self, r, E: int) -> tuple[Term, ...]:
        """Nonzero terms on the window (r, E), ascending."""
        r = as_exp(r)
        E = max(E, 0)
        key = (r, E)
        hit = self._windows.get(key)
        if hit is not None:
            return hit
        for (r2, E2), ts in list(self._windows.items()):
            if r2 >= r and E2 >= E:
                out = tuple((e, c) for e, c in ts if e < r and depth(e, self.p) <= E)
                break
        else:
            out = self._terms(r, E)
        with self._lock:
            self._windows[key] = out
        return out

    def _terms(self, r: Fraction, E: int) -> tuple[Term, ...]:
        out = []
        for e in cert_window(self.cert, r, E, self.p):
            c = self.coeff(e)
            if c:
                out.append((e, c))
        return tuple(out)

    # -- operators -------------------------------------------------------------

    def _lift(self, other) -> Series:
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, FqElem)):
            return monomial(self.field, self.field(other) if isinstance(other, int) else other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return add(self, negate(other))

    def __rsub__(self, other):
        return add(negate(self), self._lift(other))

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            return scale(self, self.field(other) if isinstance(other, int) else other)
        if isinstance(other, Series):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("series inversion is not supported")
        result: Series = monomial(self.field, self.field.one, 0)
        base: Series = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.provenance} {self.cert}>"


class FiniteSeries(Series):
    """Explicit finitely supported series."""

    provenance = "literal"

    def __init__(self, field: FieldDesc, terms: dict[Fraction, FqElem], cert: SupportCert | None = None,
                 provenance: str | None = None):
        self.data = {e: c for e, c in terms.items() if c}
        super().__init__(field, cert or minimal_cert(self.data, field.p))
        if provenance:
            self.provenance = provenance

    def is_finite(self) -> bool:
        return True

    def _coeff(self, e):
        return self.data.get(e, self.field.zero)

    def coeff(self, e) -> FqElem:
        return self.data.get(as_exp(e), self.field.zero)

    def _terms(self, r, E):
        p = self.p
        return tuple(sorted(((e, c) for e, c in self.data.items() if e < r and depth(e, p) <= E),
                            key=lambda t: t[0]))

    def all_terms(self) -> tuple[Term, ...]:
        return tuple(sorted(self.data.items(), key=lambda t: t[0]))

    def valuation_exact(self) -> Fraction | None:
        return min(self.data) if self.data else None

    def __str__(self) -> str:
        return format_terms(self.all_terms())


class OracleSeries(Series):
    """A series given by a coefficient function and a certificate."""

    def __init__(self, field: FieldDesc, cert: SupportCert, func: Callable[[Fraction], FqElem],
                 provenance: str = "oracle"):
        super().__init__(field, cert)
        self.func = func
        self.provenance = provenance

    def _coeff(self, e):
        return self.func(e)


def minimal_cert(data: dict[Fraction, FqElem] | Iterable[Fraction], p: int) -> SupportCert:
    """Smallest (a, b, c) covering the given exponents, with a prime to p."""
    exps = list(data)
    if not exps:
        return SupportCert(1, 0, 0)
    a = 1
    for e in exps:
        den = split_denominator(as_exp(e), p)[0]
        a = a * den // math.gcd(a, den)
    b = c = 0
    for e in exps:
        w = to_digits(e, a, p)
        b = max(b, -w.n)
        c = max(c, w.digit_sum)
    return SupportCert(a, b, c)


def from_terms(field: FieldDesc, terms: Sequence[tuple]) -> FiniteSeries:
    data: dict[Fraction, FqElem] = {}
    for e, c in terms:
        e = as_exp(e)
        if e in data:
            raise DuplicateExponent(f"exponent {format_exp(e)} given twice")
        data[e] = field(c) if isinstance(c, int) else c
    return FiniteSeries(field, data)


def monomial(field: FieldDesc, c: FqElem | int, e) -> FiniteSeries:
    c = field(c) if isinstance(c, int) else c
    return FiniteSeries(field, {as_exp(e): c})


def zero_series(field: FieldDesc) -> FiniteSeries:
    return FiniteSeries(field, {})


def coeff(x: Series, e) -> FqElem:
    return x.coeff(e)


# -- ring operations ---------------------------------------------------------------

class _Sum(Series):
    provenance = "sum"

    def __init__(self, parts: Sequence[Series]):
        field = parts[0].field
        cert = parts[0].cert
        for s in parts[1:]:
            cert = cert_join(cert, s.cert, field.p)
        super().__init__(field, cert)
        self.parts = tuple(parts)

    def _coeff(self, e):
        acc = self.field.zero
        for s in self.parts:
            acc = acc + s.coeff(e)
        return acc

    def _terms(self, r, E):
        acc: dict[Fraction, FqElem] = {}
        for s in self.parts:
            for e, c in s.terms(r, E):
                acc[e] = acc.get(e, self.field.zero) + c
        return tuple(sorted(((e, c) for e, c in acc.items() if c), key=lambda t: t[0]))


class _Scaled(Series):
    provenance = "scale"

    def __init__(self, x: Series, c: FqElem):
        super().__init__(x.field, x.cert)
        self.x, self.c = x, c

    def _coeff(self, e):
        return self.c * self.x.coeff(e)

    def _terms(self, r, E):
        return tuple((e, self.c * v) for e, v in self.x.terms(r, E))


def add(x: Series, y: Series) -> Series:
    if isinstance(x, FiniteSeries) and isinstance(y, FiniteSeries):
        data = dict(x.data)
        for e, c in y.data.items():
            data[e] = data.get(e, x.field.zero) + c
        return FiniteSeries(x.field, data, provenance="sum")
    parts = []
    for s in (x, y):
        parts.extend(s.parts if isinstance(s, _Sum) else (s,))
    parts = [s for s in parts if not (isinstance(s, FiniteSeries) and not s.data)]
    if not parts:
        return zero_series(x.field)
    if len(parts) == 1:
        return parts[0]
    return _Sum(parts)


def scale(x: Series, c: FqElem) -> Series:
    if not c:
        return zero_series(x.field)
    if c == x.field.one:
        return x
    if isinstance(x, FiniteSeries):
        return FiniteSeries(x.field, {e: c * v for e, v in x.data.items()}, x.cert, "scale")
    return _Scaled(x, c)


def negate(x: Series) -> Series:
    return scale(x, -x.field.one)


class _Product(Series):
    provenance = "product"

    def __init__(self, x: Series, y: Series):
        super().__init__(x.field, cert_transform(x.cert, y.cert, "mul", x.field.p))
        self.x, self.y = x, y

    def _coeff(self, k):
        x, y = self.x, self.y
        acc = self.field.zero
        if isinstance(x, FiniteSeries) or isinstance(y, FiniteSeries):
            fin, other = (x, y) if isinstance(x, FiniteSeries) else (y, x)
            for e, c in fin.data.items():
                acc = acc + c * other.coeff(k - e)
            return acc
        for i, j in split_representations(x.cert, y.cert, k, self.p):
            xi = x.coeff(i)
            if xi:
                acc = acc + xi * y.coeff(j)
        return acc

    def _terms(self, r, E):
        x, y, p = self.x, self.y, self.p
        if isinstance(x, FiniteSeries) or isinstance(y, FiniteSeries):
            fin, other = (x, y) if isinstance(x, FiniteSeries) else (y, x)
            if not fin.data:
                return ()
            lo = min(fin.data)
            dmax = max(depth(e, p) for e in fin.data)
            xs = fin.all_terms()
            ys = other.terms(r - lo, max(E, dmax))
        else:
            A = x.cert.a * y.cert.a // math.gcd(x.cert.a, y.cert.a)
            cx = cert_transform(x.cert, None, "rescale", p, L=A)
            cy = cert_transform(y.cert, None, "rescale", p, L=A)
            slack = carry_slack(cx, cy, p) + vp(A, p)
            xs = x.terms(r - y.cert.lower_bound(), E + slack)
            ys = y.terms(r - x.cert.lower_bound(), E + slack)
        acc: dict[Fraction, FqElem] = {}
        for i, a in xs:
            for j, b in ys:
                k = i + j
                if k >= r:
                    break
                if depth(k, p) <= E:
                    acc[k] = acc.get(k, self.field.zero) + a * b
        return tuple(sorted(((k, c) for k, c in acc.items() if c), key=lambda t: t[0]))


def mul(x: Series, y: Series) -> Series:
    if isinstance(x, FiniteSeries) and isinstance(y, FiniteSeries):
        data: dict[Fraction, FqElem] = {}
        zero = x.field.zero
        for i, a in x.data.items():
            for j, b in y.data.items():
                data[i + j] = data.get(i + j, zero) + a * b
        return FiniteSeries(x.field, data, provenance="product")
    for s, t in ((x, y), (y, x)):
        if isinstance(s, FiniteSeries):
            if not s.data:
                return zero_series(x.field)
            if len(s.data) == 1 and 0 in s.data:
                return scale(t, s.data[Fraction(0)])
    return _Product(x, y)


class _Twist(Series):
    provenance = "twist"

    def __init__(self, x: Series, direction: str, n: int):
        op = "twist_down" if direction == "down" else "twist_up"
        super().__init__(x.field, cert_transform(x.cert, None, op, x.field.p, n=n))
        self.x, self.direction, self.n = x, direction, n

    def _coeff(self, e):
        pn = self.p ** self.n
        if self.direction == "down":
            return pth_root(self.x.coeff(e * pn), self.n)
        return frobenius(self.x.coeff(e / pn), self.n)

    def _terms(self, r, E):
        p, n = self.p, self.n
        pn = p ** n
        if self.direction == "down":
            src = self.x.terms(r * pn, max(E - n, 0))
            out = ((e / pn, pth_root(c, n)) for e, c in src)
        else:
            src = self.x.terms(r / pn, E + n)
            out = ((e * pn, frobenius(c, n)) for e, c in src)
        return tuple((e, c) for e, c in out if depth(e, p) <= E)


def twist(x: Series, direction: str, n: int = 1) -> Series:
    """x^(1/p^n) for ``direction='down'``, x^(p^n) for ``'up'``."""
    if direction not in ("up", "down"):
        raise ValueError(f"unknown direction {direction!r}")
    if n == 0:
        return x
    if isinstance(x, FiniteSeries):
        pn = x.p ** n
        if direction == "down":
            data = {e / pn: pth_root(c, n) for e, c in x.data.items()}
        else:
            data = {e * pn: frobenius(c, n) for e, c in x.data.items()}
        return FiniteSeries(x.field, data, provenance="twist")
    return _Twist(x, direction, n)


class _Truncated(Series):
    provenance = "truncation"

    def __init__(self, x: Series, j: Fraction):
        super().__init__(x.field, x.cert)
        self.x, self.j = x, j

    def _coeff(self, e):
        return self.x.coeff(e) if e < self.j else self.field.zero

    def _terms(self, r, E):
        return self.x.terms(min(r, self.j), E)


def truncate_below(x: Series, j) -> Series:
    """Keep the terms with exponent < j; ``j=None`` means +infinity."""
    if j is None:
        return x
    j = as_exp(j)
    if isinstance(x, FiniteSeries):
        return FiniteSeries(x.field, {e: c for e, c in x.data.items() if e < j}, x.cert, "truncation")
    return _Truncated(x, j)


def valuation(x: Series, search_r, search_E: int) -> Fraction | ValuationAtLeast:
    if isinstance(x, FiniteSeries):
        v = x.valuation_exact()
        if v is not None and v < as_exp(search_r):
            return v
        if v is not None:
            return ValuationAtLeast(as_exp(search_r), search_E)
    ts = x.terms(search_r, search_E)
    if ts:
        return ts[0][0]
    return ValuationAtLeast(as_exp(search_r), search_E)


def materialize(x: Series, r, E: int) -> Window:
    r = as_exp(r)
    return Window(r, E, x.terms(r, E))


def window_equal(x: Series, y: Series, r, E: int) -> bool:
    return x.terms(r, E) == y.terms(r, E)


def series_to_dict(x: Series, r, E: int) -> dict:
    w = materialize(x, r, E)
    return {"cert": [x.cert.a, x.cert.b, x.cert.c], "provenance": x.provenance, **w.to_dict()}
