import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from hahnfq.errors import InconsistentDomain, NotInDomain, SpecMismatch
from hahnfq.exponents import SupportCert, cert_contains, cert_window, from_word
from hahnfq.ffield import GF, pth_root
from hahnfq.lrr import LRRSpec, PeriodCert, period_to_lrr
from hahnfq.series import FiniteSeries, OracleSeries, materialize, monomial, twist, window_equal
from hahnfq.twistrec import (
    CoeffFunction, TRSeriesHandle, algebraicity_witness, as_solve, as_solve_parts, build_tr,
    canonical_word, canonical_words, decompose, detect_tr, make_tr, twist_operator,
)

from conftest import tr_series

F2, F3, F4 = GF(2), GF(3), GF(2, 2)
g = F4.gen


def ones(field, c=1):
    """f = 1 on the words 0...01 (single digit 1), 0 elsewhere."""
    return CoeffFunction(field, c, PeriodCert(1, 0), {(1,): 1})


def chevalley_tr(p):
    return build_tr(SupportCert(1, 1, 1), {0: ones(GF(p))})


def test_canonical_words():
    per = PeriodCert(2, 1)
    assert canonical_word((0, 0, 0, 0, 1), per) == (0, 0, 1)
    assert canonical_word((0, 0, 0, 1), per) == (0, 1)
    assert canonical_word((0, 1), per) == (0, 1)
    words = list(canonical_words(2, 1, per))
    assert words == [(), (1,), (0, 1), (0, 0, 1)]


def test_coeff_function_examples():
    f = ones(F2)
    assert f(-Q(1, 2 ** 9)) == F2.one
    alt = CoeffFunction(F4, 1, PeriodCert(2, 0), {(1,): g, (0, 1): g + 1})
    # -2^-5 is the word 00001, a run of 4, which collapses to run 0
    assert alt(-Q(1, 32)) == g
    assert alt(-Q(1, 16)) == g + 1
    with pytest.raises(NotInDomain):
        f(Q(-3, 4))
    with pytest.raises(NotInDomain):
        f(Q(1, 2))
    with pytest.raises(InconsistentDomain):
        CoeffFunction(F2, 1, PeriodCert(1, 0), {(1,): 1, (0, 1): 0})


def test_build_tr_examples():
    x = chevalley_tr(2)
    assert materialize(x, 0, 4).terms == tuple((-Q(1, 2 ** k), F2.one) for k in range(1, 5))
    z = build_tr(SupportCert(1, 0, 1), {0: CoeffFunction(F2, 1, PeriodCert(1, 0))})
    assert materialize(z, 3, 3).terms == ()
    ps = build_tr(SupportCert(1, 0, 0), {m: CoeffFunction(F3, 0, PeriodCert(1, 0), {(): m % 3}) for m in range(4)})
    # f_m(0) = m mod 3 for m < 4: the power series t + 2t^2
    assert materialize(ps, 10, 2).terms == ((Q(1), F3(1)), (Q(2), F3(2)))


def test_decompose_examples():
    f = CoeffFunction(F2, 1, PeriodCert(1, 1), {(1,): 1})
    x = make_tr(F2, SupportCert(1, 0, 1), {0: f, 1: f})
    (L, piece), = decompose(x)
    assert isinstance(L, FiniteSeries) and L.all_terms() == ((Q(0), F2.one), (Q(1), F2.one))
    assert materialize(TRSeriesHandle(piece), 2, 4).terms == ((Q(-1, 2), F2.one),)
    same = make_tr(F2, SupportCert(1, 0, 1), {m: ones(F2) for m in range(3)})
    assert len(decompose(same)) == 1
    assert decompose(make_tr(F2, SupportCert(1, 0, 1), {})) == []


@pytest.mark.parametrize("p", [2, 3])
def test_twist_operator_chevalley(p):
    F = GF(p)
    piece = make_tr(F, SupportCert(1, 0, 1), {0: ones(F)})
    y = twist_operator(piece, LRRSpec((F.one, -F.one)))
    assert materialize(y, 2, 8).terms == ((-Q(1, p), -F.one),)
    assert y.cert == SupportCert(p, p - 1, 0)


def test_twist_operator_zero_and_mismatch():
    zero = make_tr(F2, SupportCert(1, 0, 1), {0: CoeffFunction(F2, 1, PeriodCert(1, 0))})
    y = twist_operator(zero, LRRSpec((F2.one, F2.one)))
    assert materialize(y, 2, 6).terms == ()
    # a lone t^(-1/2) does not satisfy c_n = c_{n+1}^p along its tail
    single = make_tr(F2, SupportCert(1, 0, 1), {0: CoeffFunction(F2, 1, PeriodCert(1, 1), {(1,): 1})})
    with pytest.raises(SpecMismatch):
        twist_operator(single, LRRSpec((F2.one, F2.one)))
    # the unchecked twisted sum keeps both shallow terms
    x = monomial(F2, 1, Q(-1, 2))
    raw = twist(x, "down", 1) - x
    assert materialize(raw, 2, 6).terms == ((Q(-1, 2), F2.one), (Q(-1, 4), F2.one))


def test_witness_examples():
    w = algebraicity_witness(chevalley_tr(2))
    assert len(w.chain) == 1
    assert w.chain[0].spec.coeffs == (F2.one, F2.one)
    (y,) = w.terminal
    assert materialize(y, 1, 10).terms == ((Q(-1, 2), F2.one),)
    flat = make_tr(F2, SupportCert(1, 0, 0), {0: CoeffFunction(F2, 0, PeriodCert(1, 0), {(): 1})})
    assert algebraicity_witness(flat).chain == []


def test_witness_eventually_periodic_sequence():
    # x_i for i = 1.. : 0, 1, g, 1, g, ...  (N = 1, M = 2)
    tab = {(1,): 0, (0, 1): 1, (0, 0, 1): g, (0, 0, 0, 1): 1}
    f = CoeffFunction(F4, 1, PeriodCert(2, 1), tab)
    x = make_tr(F4, SupportCert(1, 0, 1), {0: f})
    w = algebraicity_witness(x)
    assert len(w.chain) == 1
    assert w.chain[0].spec == period_to_lrr(PeriodCert(2, 1), F4)


def test_as_solve_examples():
    x = as_solve(monomial(F2, 1, -1))
    assert materialize(x, 2, 6).terms == tuple(sorted((-Q(1, 2 ** k), F2.one) for k in range(1, 7)))
    for p in (2, 3):
        F = GF(p)
        x = as_solve(monomial(F, 1, 1))
        assert materialize(x, 30, 0).terms == tuple((Q(p ** k), -F.one) for k in range(5) if p ** k < 30)
    assert materialize(as_solve(FiniteSeries(F3, {})), 5, 5).terms == ()


def test_as_solve_constant_needs_extension():
    from hahnfq.errors import FieldTooSmall
    with pytest.raises(FieldTooSmall) as exc:
        as_solve(monomial(F2, 1, 0))
    assert exc.value.required_degree == 2
    x = as_solve(monomial(F4, 1, 0))
    c = x.coeff(0)
    assert c * c - c == F4.one and c == g


def test_detect_tr_examples():
    t = detect_tr(as_solve(monomial(F2, 1, -1)))
    assert t is not None and t.period == PeriodCert(1, 0) and t.basis_rank == 1

    def squares(e):
        if e.numerator != -1 or e.denominator == 1:
            return F2.zero
        i = e.denominator.bit_length() - 1
        return F2.one if int(i ** 0.5) ** 2 == i else F2.zero

    sq = OracleSeries(F2, SupportCert(1, 0, 1), squares)
    assert detect_tr(sq, 8, 8, 0, 100) is None
    fin = detect_tr(FiniteSeries(F2, {Q(-1, 2): F2.one, Q(1): F2.one}))
    assert fin is not None and fin.tail == 0
    assert window_equal(TRSeriesHandle(fin), FiniteSeries(F2, {Q(-1, 2): F2.one, Q(1): F2.one}), 4, 6)


# -- properties ---------------------------------------------------------------------------

FIELDS = [F2, F3, F4]


@st.composite
def field_tr(draw, **kw):
    f = draw(st.sampled_from(FIELDS))
    return f, draw(tr_series(f, **kw))


@settings(max_examples=25)
@given(field_tr(), st.randoms(use_true_random=False))
def test_detect_round_trip(ft, rnd):
    f, tr = ft
    x = TRSeriesHandle(tr)
    got = detect_tr(x, 4, 4, tr.m_hi + 2, 12)
    assert got is not None
    y = TRSeriesHandle(got)
    words = list(canonical_words(f.p, tr.cert.c, PeriodCert(2, 2)))
    for _ in range(500):
        m = rnd.randint(tr.m_lo, tr.m_hi + 2)
        w = list(rnd.choice(words))
        if w and rnd.random() < 0.5:
            w = [0] * rnd.randint(0, 12) + w
        e = from_word(m, w, tr.cert.a, f.p)
        assert x.coeff(e) == y.coeff(e)


@settings(max_examples=25)
@given(field_tr())
def test_twist_support_reduction(ft):
    f, tr = ft
    p = f.p
    for _, piece in decompose(tr):
        spec = period_to_lrr(piece.period, f)
        k = spec.order
        y = twist_operator(piece, spec)
        pk = p ** k
        target = SupportCert(pk, pk - 1, piece.cert.c - 1)
        # independent evaluation from the twisted sum
        xs = TRSeriesHandle(piece)
        raw = FiniteSeries(f, {})
        for i, d in enumerate(spec.coeffs):
            if d:
                raw = raw + twist(xs, "down", k - i) * pth_root(d, k)
        for e, _ in materialize(raw, 1, k + 5).terms:
            assert cert_contains(target, e, p)
        assert window_equal(raw, y, 1, k + 5)


@st.composite
def as_input(draw):
    f = draw(st.sampled_from([F2, F3, F4]))
    if draw(st.booleans()):
        n = draw(st.integers(0, 4))
        data = {Q(draw(st.integers(-8, 8)), f.p ** draw(st.integers(0, 2))): draw(st.sampled_from(list(f.elements())))
                for _ in range(n)}
        data.pop(Q(0), None)
        return f, FiniteSeries(f, data)
    tr = draw(tr_series(f, c=draw(st.integers(1, 2))))
    return f, TRSeriesHandle(tr)


@settings(max_examples=30)
@given(as_input())
def test_as_solve_round_trip(fy):
    f, y = fy
    if y.coeff(0):
        y = y - FiniteSeries(f, {Q(0): y.coeff(0)})
    neg, const, pos = as_solve_parts(y)
    x = as_solve(y)
    assert window_equal(twist(x, "up", 1) - x, y, 3, 8)
    a, b, c = y.cert.a, y.cert.b, y.cert.c
    for e, _ in materialize(neg, 0, 8).terms:
        assert cert_contains(SupportCert(a, b, b + c), e, f.p)


@settings(max_examples=20)
@given(as_input(), as_input())
def test_as_solve_linear(u, v):
    f1, y1 = u
    f2, y2 = v
    if f1 != f2:
        return
    for y in (y1, y2):
        if y.coeff(0):
            return
    d = as_solve(y1 + y2) - as_solve(y1) - as_solve(y2)
    terms = materialize(d, 3, 6).terms
    assert all(e == 0 and c.v < f1.p for e, c in terms)


@settings(max_examples=25)
@given(field_tr())
def test_decompose_reconstruction(ft):
    f, tr = ft
    total = FiniteSeries(f, {})
    for L, piece in decompose(tr):
        total = total + L * TRSeriesHandle(piece)
    assert window_equal(total, TRSeriesHandle(tr), 2, 6)
