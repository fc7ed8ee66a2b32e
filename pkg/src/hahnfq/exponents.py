"""Rational exponents, base-p digit words and the support sets S_{a,b,c}.

An exponent is a :class:`fractions.Fraction`.  Its *depth* is the exponent of
p in its (reduced) denominator.  The set

    S_{a,b,c} = { (1/a)(n - b_1 p^-1 - b_2 p^-2 - ...) :
                  n >= -b, 0 <= b_i < p, sum b_i <= c }

is described by a :class:`SupportCert`.  Every element has a unique such
expression with finitely many nonzero digits: ``n`` is the ceiling of
``a*x`` and the digits are those of ``n - a*x`` in [0, 1).

>>> x = Fraction(1, 4)
>>> to_digits(x, 1, 2)
DigitWord(a=1, n=1, digits=((1, 1), (2, 1)))
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import IncompatibleDenominator

ExpQ = Fraction

__all__ = [
    "ExpQ",
    "DigitWord",
    "SupportCert",
    "as_exp",
    "depth",
    "split_denominator",
    "format_exp",
    "parse_exp",
    "to_digits",
    "from_word",
    "word_value",
    "digit_sum",
    "cert_contains",
    "cert_window",
    "cert_transform",
    "cert_join",
    "split_representations",
    "tail_exponents",
]


def as_exp(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_denominator(x: Fraction, p: int) -> tuple[int, int]:
    """Return (a, e) with denominator(x) = a * p^e and p not dividing a."""
    den = x.denominator
    e = 0
    while den % p == 0:
        den //= p
        e += 1
    return den, e


def depth(x: Fraction, p: int) -> int:
    return split_denominator(x, p)[1]


def format_exp(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_exp(text: str) -> Fraction:
    return Fraction(text.strip().strip("()"))


def base_p_digit_sum(n: int, p: int) -> int:
    s = 0
    n = abs(n)
    while n:
        s += n % p
        n //= p
    return s


@dataclass(frozen=True)
class DigitWord:
    """(1/a)(n - sum b_i p^-i); ``digits`` holds (position, nonzero digit)."""

    a: int
    n: int
    digits: tuple[tuple[int, int], ...]

    @property
    def digit_sum(self) -> int:
        return sum(b for _, b in self.digits)

    def value(self, p: int) -> Fraction:
        frac = sum((Fraction(b, p ** i) for i, b in self.digits), Fraction(0))
        return (self.n - frac) / self.a

    def word(self) -> tuple[int, ...]:
        """Dense digit tuple (b_1, ..., b_L) with b_L != 0."""
        if not self.digits:
            return ()
        out = [0] * self.digits[-1][0]
        for i, b in self.digits:
            out[i - 1] = b
        return tuple(out)

    def debug(self, p: int) -> str:
        terms = " - ".join(f"{b}*{p}^-{i}" for i, b in self.digits)
        inner = f"{self.n} - {terms}" if terms else str(self.n)
        return f"(1/{self.a})({inner})"


def to_digits(x, a: int, p: int) -> DigitWord:
    y = as_exp(x) * a
    num, den = y.numerator, y.denominator
    e, rest = 0, den
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise IncompatibleDenominator(f"{a}*{x} has a denominator that is not a power of {p}")
    n = -(-num // den)
    F = n * den - num  # integer in [0, p^e)
    digits = []
    pos = e
    while F:
        F, b = divmod(F, p)
        if b:
            digits.append((pos, b))
        pos -= 1
    digits.reverse()
    return DigitWord(a, n, tuple(digits))


def word_value(word: Sequence[int], p: int) -> Fraction:
    """sum b_i p^-i for a dense digit tuple."""
    num = 0
    for b in word:
        num = num * p + b
    return Fraction(num, p ** len(word))


def from_word(m: int, word: Sequence[int], a: int, p: int) -> Fraction:
    """(1/a)(m - sum b_i p^-i)."""
    return (m - word_value(word, p)) / a


def digit_sum(x, a: int, p: int) -> int:
    return to_digits(x, a, p).digit_sum


@dataclass(frozen=True)
class SupportCert:
    """Parameters (a, b, c) of the set S_{a,b,c}."""

    a: int = 1
    b: int = 0
    c: int = 0

    def __post_init__(self):
        if self.a < 1 or self.b < 0 or self.c < 0:
            raise ValueError(f"invalid certificate {self}")

    def contains(self, x, p: int) -> bool:
        return cert_contains(self, x, p)

    def lower_bound(self) -> Fraction:
        """A strict lower bound for every element of the set."""
        return Fraction(-self.b - 1, self.a)

    def __str__(self) -> str:
        return f"S({self.a},{self.b},{self.c})"


def cert_contains(cert: SupportCert, x, p: int) -> bool:
    try:
        w = to_digits(x, cert.a, p)
    except IncompatibleDenominator:
        return False
    return w.n >= -cert.b and w.digit_sum <= cert.c


@functools.lru_cache(maxsize=4096)
def _fractions(p: int, length: int, c: int) -> tuple[tuple[Fraction, int], ...]:
    """All (f, last position) with f = sum_{i<=length} b_i p^-i of digit
    sum <= c, sorted by f descending."""
    out = []

    def rec(pos: int, num: int, budget: int, last: int):
        if pos > length:
            out.append((Fraction(num, p ** length), last))
            return
        for b in range(0, min(p - 1, budget) + 1):
            rec(pos + 1, num + b * p ** (length - pos), budget - b, pos if b else last)

    rec(1, 0, c, 0)
    out.sort(key=lambda t: t[0], reverse=True)
    return tuple(out)


def cert_window(cert: SupportCert, r, E: int, p: int) -> list[Fraction]:
    """Elements of S_{a,b,c} below r with depth <= E, ascending."""
    r = as_exp(r)
    a = cert.a
    v = vp(a, p)
    length = max(E - v, 0)
    fracs = _fractions(p, length, cert.c) if cert.c else ((Fraction(0), 0),)
    ar = a * r
    out = []
    for n in range(-cert.b, math.ceil(ar) + 1):
        for f, last in fracs:
            y = n - f
            if y >= ar:
                continue
            if last == 0:
                if n == 0:
                    d = 0
                else:
                    d = max(0, v - vp(n, p))
                if d > E:
                    continue
            elif last + v > E:
                continue
            out.append(y / a)
    return out


def _rescale(cert: SupportCert, L: int, p: int) -> SupportCert:
    if L % cert.a:
        raise ValueError(f"{cert.a} does not divide {L}")
    u = L // cert.a
    if u == 1:
        return cert
    b = u * cert.b + (u - 1 if cert.c else 0)
    return SupportCert(L, b, cert.c * base_p_digit_sum(u, p))


def cert_join(cx: SupportCert, cy: SupportCert, p: int) -> SupportCert:
    """A certificate containing both sets (the add transform)."""
    L = cx.a * cy.a // math.gcd(cx.a, cy.a)
    x, y = _rescale(cx, L, p), _rescale(cy, L, p)
    return SupportCert(L, max(x.b, y.b), max(x.c, y.c))


def cert_transform(cx: SupportCert, cy: SupportCert | None, op: str, p: int,
                   n: int = 0, L: int | None = None) -> SupportCert:
    """Certificate for the support of a series operation.

    ``op`` is one of ``add``, ``mul``, ``twist_down``, ``twist_up`` or
    ``rescale``; the unary operations ignore ``cy``.
    """
    if op == "add":
        return cert_join(cx, cy, p)
    if op == "mul":
        M = cx.a * cy.a // math.gcd(cx.a, cy.a)
        x, y = _rescale(cx, M, p), _rescale(cy, M, p)
        # two fractional parts can carry into the integer part only when
        # their digit sums reach p
        carry = 1 if x.c + y.c >= p else 0
        return SupportCert(M, x.b + y.b + carry, x.c + y.c)
    if op == "twist_down":
        return SupportCert(cx.a * p ** n, cx.b, cx.c)
    if op == "twist_up":
        a, k = cx.a, n
        while k and a % p == 0:
            a //= p
            k -= 1
        if k == 0:
            return SupportCert(a, cx.b, cx.c)
        pk = p ** k
        return SupportCert(a, pk * cx.b + (pk - 1 if cx.c else 0), cx.c)
    if op == "rescale":
        return _rescale(cx, L, p)
    raise ValueError(f"unknown certificate operation {op!r}")


def carry_slack(cx: SupportCert, cy: SupportCert, p: int) -> int:
    """Extra depth needed on the factors to see every product term."""
    return (cx.c + cy.c) // (p - 1)


def split_representations(cx: SupportCert, cy: SupportCert, k, p: int) -> list[tuple[Fraction, Fraction]]:
    """Every (i, j) with i in S_x, j in S_y and i + j = k, ascending in i.

    Each carry out of a digit position costs p - 1 of the combined digit sum,
    so the summands are at most (c_x + c_y)//(p-1) levels deeper than k.
    """
    k = as_exp(k)
    A = cx.a * cy.a // math.gcd(cx.a, cy.a)
    x, y = _rescale(cx, A, p), _rescale(cy, A, p)
    K = k * A
    dK = depth(K, p)
    if K.denominator != p ** dK:
        return []
    E = dK + carry_slack(x, y, p)
    sx = SupportCert(1, x.b, x.c)
    sy = SupportCert(1, y.b, y.c)
    out = []
    for I in cert_window(sx, K + y.b + 1, E, p):
        i, j = I / A, (K - I) / A
        if cert_contains(sy, K - I, p) and cert_contains(cx, i, p) and cert_contains(cy, j, p):
            out.append((i, j))
    return out


def tail_exponents(m: int, prefix: Sequence[tuple[int, int]], tail: Sequence[tuple[int, int]],
                   a: int, p: int) -> Iterator[Fraction]:
    """The exponents (1/a)(m - prefix - p^-n * tail) for n = 0, 1, 2, ...

    ``prefix`` and ``tail`` are (position, digit) pairs; tail positions
    follow the prefix ones.
    """
    head = sum((Fraction(b, p ** i) for i, b in prefix), Fraction(0))
    rest = sum((Fraction(b, p ** i) for i, b in tail), Fraction(0))
    n = 0
    while True:
        yield (m - head - rest / p ** n) / a
        n += 1
