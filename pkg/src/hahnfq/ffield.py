"""Finite fields F_{p^d}.

Elements of ``F_{p^d} = F_p[g]/(m(g))`` are stored as a single integer
``v = c_0 + c_1 p + ... + c_{d-1} p^{d-1}`` (the coefficient vector read in
base p).  Multiplication, inversion and the Frobenius maps go through
discrete log tables, which are built lazily once per field; this keeps
every operation O(1) at the desk-scale sizes (q up to about 2^16) the rest of
the package works with.

>>> F4 = GF(2, 2)
>>> g = F4.gen
>>> g * g
1+g
>>> frobenius(g, 1) == g + 1
True
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DivisionByZero, FieldTooSmall, MixedFields, NotASubfield, UnsupportedField

__all__ = [
    "FieldDesc",
    "FqElem",
    "GF",
    "field_from_string",
    "fq_arith",
    "frobenius",
    "pth_root",
    "poly_eval",
    "poly_roots",
    "poly_divmod",
    "splitting_degree",
    "embed",
]

MAX_ORDER = 1 << 16


# -- arithmetic over F_p on coefficient lists (low degree first) -------------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], m: Sequence[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(f) - 1 >= dm:
        c = f[-1] * inv % p
        shift = len(f) - 1 - dm
        for i, mc in enumerate(m):
            f[shift + i] = (f[shift + i] - c * mc) % p
        _trim(f)
    return f


def _pmulmod(f: Sequence[int], g: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _pmod(out, m, p)


def _ppowmod(f: Sequence[int], n: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(list(f), m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _trim([c % p for c in f]), _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    d = len(m) - 1
    if d == 1:
        return True
    xpow = [0, 1]
    for _ in range(d // 2):
        xpow = _ppowmod(xpow, p, m, p)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] -= 1
        if len(_pgcd(list(m), diff, p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _canonical_modulus(p: int, d: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=d):
        m = low + (1,)
        if _is_irreducible(m, p):
            return m
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- field descriptors --------------------------------------------------------

@dataclass(frozen=True)
class FieldDesc:
    """The field F_{p^d} with its canonical defining polynomial.

    ``modulus`` lists the coefficients of the monic modulus, lowest degree
    first, leading 1 included.  Use :func:`GF` rather than constructing this
    directly.
    """

    p: int
    d: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.d

    @property
    def zero(self) -> FqElem:
        return FqElem(self, 0)

    @property
    def one(self) -> FqElem:
        return FqElem(self, 1)

    @property
    def gen(self) -> FqElem:
        """The class of g in F_p[g]/(modulus); zero for prime fields."""
        if self.d == 1:
            return FqElem(self, (-self.modulus[0]) % self.p)
        return FqElem(self, self.p)

    def __call__(self, value: int | Sequence[int] | FqElem) -> FqElem:
        if isinstance(value, FqElem):
            if value.field != self:
                raise MixedFields(f"{value!r} is not in {self}")
            return value
        if isinstance(value, int):
            return FqElem(self, value % self.p)
        coeffs = list(value)
        if len(coeffs) > self.d:
            coeffs = _pmod(coeffs, self.modulus, self.p)
        return FqElem(self, _encode(coeffs, self.p))

    def elements(self) -> Iterator[FqElem]:
        for v in range(self.q):
            yield FqElem(self, v)

    def nonzero_elements(self) -> Iterator[FqElem]:
        for v in range(1, self.q):
            yield FqElem(self, v)

    def prime_subfield(self) -> list[FqElem]:
        return [FqElem(self, v) for v in range(self.p)]

    def random(self, rng: random.Random, nonzero: bool = False) -> FqElem:
        lo = 1 if nonzero else 0
        return FqElem(self, rng.randrange(lo, self.q))

    def parse(self, text: str) -> FqElem:
        return parse_element(self, text)

    def __str__(self) -> str:
        return f"{self.p}^{self.d}:" + ",".join(map(str, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}, {self.d})"


def GF(p: int, d: int = 1) -> FieldDesc:
    """Return the field with p^d elements (cached, so instances are shared)."""
    return _gf(p, d)


@functools.lru_cache(maxsize=None)
def _gf(p: int, d: int) -> FieldDesc:
    if not _is_prime(p):
        raise UnsupportedField(f"{p} is not prime")
    if d < 1 or p ** d > MAX_ORDER:
        raise UnsupportedField(f"unsupported field size {p}^{d}")
    return FieldDesc(p, d, _canonical_modulus(p, d))


def field_from_string(text: str) -> FieldDesc:
    """Parse ``p^d`` or the serialized form ``p^d:m_0,...,m_d``."""
    head, _, tail = text.strip().partition(":")
    try:
        if "^" in head:
            ps, ds = head.split("^")
            p, d = int(ps), int(ds)
        else:
            p, d = int(head), 1
    except ValueError:
        raise UnsupportedField(f"cannot parse field {text!r}") from None
    field = GF(p, d)
    if tail and tuple(int(c) for c in tail.split(",")) != field.modulus:
        raise UnsupportedField(f"{text!r} does not use the canonical modulus {field}")
    return field


def _encode(coeffs: Iterable[int], p: int) -> int:
    v = 0
    for c in reversed(list(coeffs)):
        v = v * p + c % p
    return v


class _Tables:
    """Lookup tables for one field: digits, log/antilog and addition."""

    def __init__(self, field: FieldDesc):
        p, d, q = field.p, field.d, field.q
        self.p, self.q = p, q
        self.digits = [tuple((v // p ** i) % p for i in range(d)) for v in range(q)]
        self.neg = [_encode(tuple(-c for c in dg), p) for dg in self.digits]
        self.add_table = None
        if p != 2 and q <= 729:
            self.add_table = [
                [_encode(tuple(a + b for a, b in zip(da, db)), p) for db in self.digits]
                for da in self.digits
            ]
        self.exp, self.log = self._discrete_log(field)

    def _discrete_log(self, field: FieldDesc) -> tuple[list[int], list[int]]:
        p, q, m = field.p, field.q, field.modulus
        if q == 2:
            return [1], [0, 0]
        for cand in range(2, q) if field.d > 1 else range(1, q):
            base = list(self.digits[cand])
            exp = [1]
            cur = [1]
            for _ in range(q - 2):
                cur = _pmulmod(cur, base, m, p)
                v = _encode(cur, p)
                if v == 1:
                    break
                exp.append(v)
            if len(exp) == q - 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                return exp, log
        raise AssertionError("no primitive element")  # pragma: no cover

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.add_table is not None:
            return self.add_table[a][b]
        p = self.p
        return _encode(tuple(x + y for x, y in zip(self.digits[a], self.digits[b])), p)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if n == 0 else 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]


@functools.lru_cache(maxsize=None)
def _tables(field: FieldDesc) -> _Tables:
    return _Tables(field)


# -- elements -------------------------------------------------------------------

class FqElem:
    """An element of a finite field; immutable and hashable."""

    __slots__ = ("field", "v")

    def __init__(self, field: FieldDesc, v: int):
        self.field = field
        self.v = v

    @property
    def coeffs(self) -> tuple[int, ...]:
        return _tables(self.field).digits[self.v]

    def sort_key(self) -> tuple[int, ...]:
        """Lexicographic key on coefficients, lowest degree first."""
        return self.coeffs

    def _coerce(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field is not self.field and other.field != self.field:
                raise MixedFields(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FqElem(self.field, _tables(self.field).add(self.v, w))

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, _tables(self.field).neg[self.v])

    def __sub__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        t = _tables(self.field)
        return FqElem(self.field, t.add(self.v, t.neg[w]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        return FqElem(self.field, _tables(self.field).mul(self.v, w))

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._coerce(other)
        if w is NotImplemented:
            return w
        if w == 0:
            raise DivisionByZero("division by zero in " + repr(self.field))
        t = _tables(self.field)
        return FqElem(self.field, t.mul(self.v, t.inv(w)))

    def __rtruediv__(self, other):
        return FqElem(self.field, self._coerce(other)) / self

    def inverse(self) -> FqElem:
        if self.v == 0:
            raise DivisionByZero("0 has no inverse")
        return FqElem(self.field, _tables(self.field).inv(self.v))

    def __pow__(self, n: int):
        return FqElem(self.field, _tables(self.field).power(self.v, n))

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FqElem):
            return self.v == other.v and (self.field is other.field or self.field == other.field)
        if isinstance(other, int):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.d, self.v))

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return format_element(self)


def format_element(x: FqElem) -> str:
    """Text form: an integer for prime fields, ``c0+c1*g+c2*g^2`` otherwise."""
    if x.field.d == 1:
        return str(x.v)
    parts = []
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "g" if i == 1 else f"g^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts) or "0"


def parse_element(field: FieldDesc, text: str) -> FqElem:
    """Inverse of :func:`format_element`; also accepts ``-`` and nested terms."""
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty field element")
    total = field.zero
    i = 0
    sign = 1
    term = ""
    terms = []
    while i <= len(s):
        ch = s[i] if i < len(s) else "+"
        if ch in "+-" and term:
            terms.append((sign, term))
            term = ""
            sign = 1 if ch == "+" else -1
        elif ch in "+-":
            sign = sign * (1 if ch == "+" else -1)
        else:
            term += ch
        i += 1
    for sign, t in terms:
        coef, power = 1, 0
        for factor in t.split("*"):
            if factor == "g":
                power += 1
            elif factor.startswith("g^"):
                power += int(factor[2:])
            elif factor.isdigit():
                coef *= int(factor)
            else:
                raise ValueError(f"bad field element term {t!r}")
        total = total + field(coef * sign) * (field.gen ** power if power else field.one)
    return total


def fq_arith(x: FqElem, y: FqElem, op: str) -> FqElem:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def frobenius(x: FqElem, n: int = 1) -> FqElem:
    """x^(p^n)."""
    if n == 0 or x.v == 0:
        return x
    t = _tables(x.field)
    q1 = t.q - 1
    return FqElem(x.field, t.exp[(t.log[x.v] * pow(x.field.p, n, q1)) % q1]) if q1 > 1 else x


def pth_root(x: FqElem, n: int = 1) -> FqElem:
    """The unique y with y^(p^n) = x."""
    d = x.field.d
    return frobenius(x, (-n) % d)


# -- univariate polynomials over F_q, coefficient lists low degree first ---------

def _ptrim(f: list[FqElem]) -> list[FqElem]:
    while f and not f[-1]:
        f.pop()
    return f


def poly_eval(f: Sequence[FqElem], x: FqElem) -> FqElem:
    acc = x.field.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_divmod(f: Sequence[FqElem], g: Sequence[FqElem]) -> tuple[list[FqElem], list[FqElem]]:
    g = _ptrim(list(g))
    if not g:
        raise DivisionByZero("polynomial division by zero")
    r = _ptrim(list(f))
    field = g[0].field
    if len(r) < len(g):
        return [], r
    qt = [field.zero] * (len(r) - len(g) + 1)
    inv = g[-1].inverse()
    while len(r) >= len(g):
        c = r[-1] * inv
        shift = len(r) - len(g)
        qt[shift] = c
        for i, gc in enumerate(g):
            r[shift + i] = r[shift + i] - c * gc
        r.pop()
        _ptrim(r)
    return qt, r


def _pmul(f: Sequence[FqElem], g: Sequence[FqElem]) -> list[FqElem]:
    if not f or not g:
        return []
    field = f[0].field
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return _ptrim(out)


def _pgcd_q(f: list[FqElem], g: list[FqElem]) -> list[FqElem]:
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, poly_divmod(f, g)[1]
    return f


def poly_roots(f: Sequence[FqElem]) -> list[tuple[FqElem, int]]:
    """All roots of f in its coefficient field, with multiplicities.

    Exhaustive scan over the field; multiplicity by repeated synthetic
    division.  Roots come back in lexicographic order of their coefficients.
    """
    f = _ptrim(list(f))
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    field = f[0].field
    out = []
    for x in field.elements():
        if poly_eval(f, x):
            continue
        mult = 0
        g = list(f)
        while len(g) > 1:
            qt, r = poly_divmod(g, [-x, field.one])
            if r:
                break
            mult += 1
            g = qt
        out.append((x, mult))
    out.sort(key=lambda rm: rm[0].sort_key())
    return out


def splitting_degree(f: Sequence[FqElem]) -> int:
    """Degree over F_p of the smallest extension of the coefficient field
    in which f splits completely."""
    f = _ptrim(list(f))
    field = f[0].field
    q = field.q
    rest = f
    need = 1
    k = 0
    x = [field.zero, field.one]
    h = list(x)
    while len(rest) > 1:
        k += 1
        # h = x^(q^k) mod rest
        for _ in range(field.d):
            h = _poly_powmod(h, field.p, rest)
        diff = list(h) + [field.zero] * max(0, 2 - len(h))
        diff[1] = diff[1] - field.one
        g = _pgcd_q(rest, _ptrim(diff))
        if len(g) > 1:
            need = need * k // math.gcd(need, k)
            while True:
                qt, r = poly_divmod(rest, g)
                if r:
                    break
                rest = qt
                g2 = _pgcd_q(rest, g)
                if len(g2) <= 1:
                    break
                g = g2
            h = poly_divmod(h, rest)[1] if len(rest) > 1 else h
        if k > len(f) * 2 + 2:  # pragma: no cover - defensive
            break
    return field.d * need


def _poly_powmod(base: list[FqElem], n: int, mod: list[FqElem]) -> list[FqElem]:
    field = mod[0].field
    result = [field.one]
    b = poly_divmod(base, mod)[1]
    while n:
        if n & 1:
            result = poly_divmod(_pmul(result, b), mod)[1]
        b = poly_divmod(_pmul(b, b), mod)[1]
        n >>= 1
    return result


def require_roots(f: Sequence[FqElem]) -> list[tuple[FqElem, int]]:
    """Like :func:`poly_roots` but raise FieldTooSmall unless f splits."""
    roots = poly_roots(f)
    deg = len(_ptrim(list(f))) - 1
    if sum(m for _, m in roots) < deg:
        raise FieldTooSmall(splitting_degree(f))
    return roots


# -- embeddings -----------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _generator_image(source: FieldDesc, target: FieldDesc) -> FqElem:
    mod = [target(c) for c in source.modulus]
    roots = poly_roots(mod)
    if not roots:  # pragma: no cover - impossible when the degree divides
        raise NotASubfield(f"{source!r} does not embed in {target!r}")
    return roots[0][0]


def embed(x: FqElem, target: FieldDesc) -> FqElem:
    """Map x into ``target`` along the canonical embedding.

    The generator of the source goes to the lexicographically least root of
    its modulus in the target.
    """
    source = x.field
    if source.p != target.p or target.d % source.d:
        raise NotASubfield(f"{source!r} is not a subfield of {target!r}")
    if source == target:
        return x
    if source.d == 1:
        return target(x.v)
    h = _generator_image(source, target)
    acc = target.zero
    for c in reversed(x.coeffs):
        acc = acc * h + c
    return acc


def in_subfield(x: FqElem, degree: int) -> bool:
    """True when x lies in the subfield F_{p^degree}."""
    return frobenius(x, degree) == x
