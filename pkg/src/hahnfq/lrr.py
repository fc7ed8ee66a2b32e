"""Additive polynomials and linearized recurrence relations.

A relation with coefficients d_0, ..., d_k reads

    d_0 c_n + d_1 c_{n+1}^p + ... + d_k c_{n+k}^(p^k) = 0      (n >= N0)

and is paired with the additive polynomial P(x) = sum d_i x^(p^i).  When
d_0 d_k != 0 the kernel of P is a k-dimensional F_p-space with basis z_i and
the solutions are exactly c_n = sum z_i * lambda_i^(1/p^n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import FieldTooSmall, SingularSystem
from .ffield import FieldDesc, FqElem, embed, frobenius, pth_root, splitting_degree

__all__ = [
    "LRRSpec",
    "PeriodCert",
    "additive_eval",
    "additive_poly",
    "kernel_basis",
    "moore_det",
    "solve_scalars",
    "closed_form",
    "extend_sequence",
    "sequence",
    "annihilates",
    "subspace_poly",
    "combine",
    "as_shift",
    "period_to_lrr",
    "detect_period",
    "lrr_to_period",
    "zero_offset",
]


@dataclass(frozen=True)
class LRRSpec:
    coeffs: tuple[FqElem, ...]
    start_offset: int = 0

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("an LRR needs at least one coefficient")
        if not self.coeffs[-1]:
            raise ValueError("leading coefficient d_k must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def field(self) -> FieldDesc:
        return self.coeffs[0].field

    def embedded(self, ambient: FieldDesc) -> LRRSpec:
        return LRRSpec(tuple(embed(d, ambient) for d in self.coeffs), self.start_offset)

    def __str__(self) -> str:
        return "[" + ",".join(str(d) for d in self.coeffs) + f"]@{self.start_offset}"


@dataclass(frozen=True)
class PeriodCert:
    """Period M after N terms: c_{n+M} = c_n for all n >= N."""

    M: int
    N: int

    def __str__(self) -> str:
        return f"{self.M},{self.N}"


def additive_eval(spec: LRRSpec, x: FqElem) -> FqElem:
    acc = x.field.zero
    for i, d in enumerate(spec.coeffs):
        acc = acc + d * frobenius(x, i)
    return acc


def additive_poly(spec: LRRSpec) -> list[FqElem]:
    """Dense coefficient list of sum d_i x^(p^i)."""
    p = spec.field.p
    out = [spec.field.zero] * (p ** spec.order + 1)
    for i, d in enumerate(spec.coeffs):
        out[p ** i] = d
    return out


def _span(vectors: Sequence[FqElem], p: int) -> set[FqElem]:
    span = {vectors[0].field.zero} if vectors else set()
    for v in vectors:
        span = {s + v * c for s in span for c in range(p)}
    return span


def _independent_subset(vectors: Iterable[FqElem], p: int) -> list[FqElem]:
    basis: list[FqElem] = []
    span: set[FqElem] | None = None
    for v in vectors:
        if span is None:
            span = {v.field.zero}
        if v in span:
            continue
        basis.append(v)
        span = {s + v * c for s in span for c in range(p)}
    return basis


def kernel_basis(spec: LRRSpec, ambient: FieldDesc) -> tuple[FqElem, ...]:
    """An F_p-basis of the roots of P in ``ambient`` (exhaustive scan)."""
    spec = spec.embedded(ambient)
    if not spec.coeffs[0]:
        raise ValueError("kernel_basis needs d_0 != 0")
    roots = [x for x in ambient.elements() if not additive_eval(spec, x)]
    basis = _independent_subset(roots, ambient.p)
    if len(basis) < spec.order:
        raise FieldTooSmall(splitting_degree(additive_poly(spec)),
                            f"kernel of {spec} has dimension {len(basis)} < {spec.order} in {ambient!r}")
    return tuple(basis)


def _det(rows: list[list[FqElem]]) -> FqElem:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    field = m[0][0].field
    det = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def _moore_rows(z: Sequence[FqElem]) -> list[list[FqElem]]:
    return [[frobenius(x, i) for x in z] for i in range(len(z))]


def moore_det(z: Sequence[FqElem]) -> FqElem:
    """det(z_j^(p^i)); nonzero exactly when the z_j are F_p-independent."""
    return _det(_moore_rows(z))


def solve_linear(rows: list[list[FqElem]], rhs: list[FqElem]) -> list[FqElem]:
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularSystem("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [a * inv for a in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def solve_scalars(basis: Sequence[FqElem], initial: Sequence[FqElem]) -> tuple[FqElem, ...]:
    """lambda_i with c_n = sum z_i lambda_i^(1/p^n) for n < k.

    Raising the n-th equation to the p^n-th power makes it linear in the
    lambda_i, with the Moore matrix as system matrix.
    """
    k = len(basis)
    if k == 0:
        return ()
    rhs = [frobenius(initial[n], n) for n in range(k)]
    return tuple(solve_linear(_moore_rows(basis), rhs))


def closed_form(basis: Sequence[FqElem], scalars: Sequence[FqElem], n: int) -> FqElem:
    acc = basis[0].field.zero if basis else None
    for z, lam in zip(basis, scalars):
        acc = acc + z * pth_root(lam, n)
    return acc


def sequence(spec: LRRSpec, initial: Sequence[FqElem]) -> Iterator[FqElem]:
    """Generate c_0, c_1, ... from c_0 .. c_{N0+k-1}."""
    k, N0 = spec.order, spec.start_offset
    field = spec.field
    need = N0 + k
    window = list(initial[:need])
    if len(window) < need:
        raise ValueError(f"need {need} initial terms")
    yield from window
    neg_inv = -spec.coeffs[-1].inverse()
    if k == 0:
        while True:
            yield field.zero
    while True:
        base = len(window) - k
        acc = field.zero
        for i in range(k):
            acc = acc + spec.coeffs[i] * frobenius(window[base + i], i)
        nxt = pth_root(neg_inv * acc, k)
        window.append(nxt)
        if len(window) > 4 * k + need:
            del window[: len(window) - k]
        yield nxt


def extend_sequence(spec: LRRSpec, initial: Sequence[FqElem], n: int) -> FqElem:
    return next(itertools.islice(sequence(spec, initial), n, None))


def annihilates(spec: LRRSpec, terms: Sequence[FqElem], start: int | None = None) -> bool:
    """Check the relation on every full window inside ``terms``."""
    k = spec.order
    lo = spec.start_offset if start is None else start
    for n in range(lo, len(terms) - k):
        acc = terms[n].field.zero
        for i, d in enumerate(spec.coeffs):
            acc = acc + d * frobenius(terms[n + i], i)
        if acc:
            return False
    return True


def subspace_poly(vectors: Sequence[FqElem], ambient: FieldDesc) -> LRRSpec:
    """The monic additive polynomial whose roots are exactly span(vectors).

    Built one vector at a time: L_{V+<v>}(x) = L_V(x)^p - L_V(v)^(p-1) L_V(x).
    """
    p = ambient.p
    coeffs = [ambient.one]
    for v in vectors:
        v = embed(v, ambient)
        spec = LRRSpec(tuple(coeffs))
        w = additive_eval(spec, v)
        if not w:
            continue
        s = w ** (p - 1)
        new = [ambient.zero] * (len(coeffs) + 1)
        for i, d in enumerate(coeffs):
            new[i + 1] = new[i + 1] + frobenius(d, 1)
            new[i] = new[i] - s * d
        coeffs = new
    return LRRSpec(tuple(coeffs))


def combine(spec1: LRRSpec, spec2: LRRSpec, mode: str, ambient: FieldDesc) -> LRRSpec:
    """An LRR satisfied by termwise sums (``mode='sum'``) or products
    (``mode='product'``) of solutions of the two inputs."""
    z = kernel_basis(spec1, ambient)
    y = kernel_basis(spec2, ambient)
    if mode == "sum":
        vecs = list(z) + list(y)
    elif mode == "product":
        vecs = [a * b for a in z for b in y]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = subspace_poly(vecs, ambient)
    return LRRSpec(out.coeffs, max(spec1.start_offset, spec2.start_offset))


def as_shift(spec: LRRSpec) -> LRRSpec:
    """If {c_{n+1}^p - c_n} satisfies ``spec`` then {c_n} satisfies the result.

    Expanding the telescoped relation gives the order k+1 coefficient list
    (-d_0, d_0 - d_1, ..., d_{k-1} - d_k, d_k).
    """
    d = spec.coeffs
    out = [-d[0]] + [d[i - 1] - d[i] for i in range(1, len(d))] + [d[-1]]
    return LRRSpec(tuple(out), spec.start_offset)


def period_to_lrr(cert: PeriodCert, field: FieldDesc) -> LRRSpec:
    """c_{n+N}^(p^N) - c_{n+N+Md}^(p^(N+Md)) = 0, order N + M d.

    Frobenius^(Md) is the identity on F_q, so every sequence over F_q with
    period M after N terms satisfies it.
    """
    k = cert.N + cert.M * field.d
    coeffs = [field.zero] * (k + 1)
    coeffs[cert.N] = field.one
    coeffs[k] = coeffs[k] - field.one
    return LRRSpec(tuple(coeffs))


def detect_period(stream: Iterable[FqElem], M_max: int, N_max: int, samples: int) -> PeriodCert | None:
    """Least (N, then M) with c_{n+M} = c_n on every sampled n >= N.

    A semi-decision: the answer only speaks for the sampled prefix, and a
    candidate is accepted only when its period is seen at least twice.
    Returns None when nothing within the bounds fits.
    """
    terms = list(itertools.islice(stream, samples))
    L = len(terms)
    for N in range(N_max + 1):
        for M in range(1, M_max + 1):
            if L < N + 2 * M:
                break
            if all(terms[n + M] == terms[n] for n in range(N, L - M)):
                return PeriodCert(M, N)
    return None


def lrr_to_period(spec: LRRSpec, initial: Sequence[FqElem]) -> PeriodCert:
    """Exact minimal (M, N) of the generated sequence.

    The sequence from index N0 on is determined by any k consecutive terms,
    so it repeats as soon as such a window does; that happens within q^k
    steps.
    """
    k, N0 = spec.order, spec.start_offset
    seen: dict[tuple, int] = {}
    gen = sequence(spec, initial)
    hist: list[FqElem] = []
    width = max(k, 1)
    for idx, c in enumerate(gen):
        hist.append(c)
        start = idx - width + 1
        if start < N0:
            continue
        state = tuple(hist[start: idx + 1])
        if state in seen:
            i = seen[state]
            return _minimal_period(hist, i, start - i)
        seen[state] = start


def _minimal_period(hist: list[FqElem], N: int, M: int) -> PeriodCert:
    # the state recurrence gives a valid (M, N); shrink N while it stays valid
    while N > 0 and hist[N - 1] == hist[N - 1 + M]:
        N -= 1
    for m in range(1, M + 1):
        if M % m == 0 and all(hist[n] == hist[n + m] for n in range(N, len(hist) - m)):
            return PeriodCert(m, N)
    return PeriodCert(M, N)  # pragma: no cover


def zero_offset(spec: LRRSpec) -> LRRSpec:
    """An equivalent relation asserted from n = 0.

    The relation at n + N0 raised to the p^N0-th power is a relation of
    order k + N0 whose first N0 coefficients vanish.
    """
    N0 = spec.start_offset
    if N0 == 0:
        return spec
    zero = spec.field.zero
    return LRRSpec(tuple([zero] * N0 + [frobenius(d, N0) for d in spec.coeffs]))
