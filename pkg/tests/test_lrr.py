from itertools import islice, product

import pytest
from hypothesis import given, strategies as st

from hahnfq.errors import FieldTooSmall
from hahnfq.ffield import GF, frobenius
from hahnfq.lrr import (
    LRRSpec, PeriodCert, additive_eval, annihilates, as_shift, closed_form, combine,
    detect_period, extend_sequence, kernel_basis, lrr_to_period, moore_det, period_to_lrr,
    sequence, solve_scalars, subspace_poly, zero_offset,
)

from conftest import elements

F2, F4, F8 = GF(2), GF(2, 2), GF(2, 3)
g = F4.gen


def spec(field, *ds, offset=0):
    return LRRSpec(tuple(field(d) if isinstance(d, int) else d for d in ds), offset)


def test_additive_eval_examples():
    assert additive_eval(spec(F2, 1, 1), F2.one) == F2.zero
    assert additive_eval(spec(F4, 1, 1), g) == F4.one
    assert additive_eval(spec(F4, 1, 1), F4.zero) == F4.zero


def test_kernel_basis_examples():
    assert kernel_basis(spec(F2, 1, 1), F2) == (F2.one,)
    assert kernel_basis(spec(F2, 1, 1), F4) == (F4.one,)
    basis = kernel_basis(spec(F2, 1, 0, 1), F4)
    assert len(basis) == 2 and moore_det(list(basis))
    with pytest.raises(FieldTooSmall) as exc:
        kernel_basis(spec(F2, 1, 0, 1), F2)
    assert exc.value.required_degree == 2


def test_moore_examples():
    assert moore_det([F2.one]) == F2.one
    assert moore_det([F4.one, g]) == F4.one
    assert moore_det([F4.one, F4.one]) == F4.zero


def test_solve_scalars_examples():
    assert solve_scalars([F2.one], [F2.one]) == (F2.one,)
    lam = solve_scalars([F4.one], [g])
    assert lam == (g,)
    assert [closed_form([F4.one], lam, n) for n in range(4)] == [g, g + 1, g, g + 1]
    assert solve_scalars([F4.one, g], [F4.zero, F4.zero]) == (F4.zero, F4.zero)


def test_extend_sequence_examples():
    assert [extend_sequence(spec(F2, 1, 1), [F2.one], n) for n in range(5)] == [F2.one] * 5
    assert list(islice(sequence(spec(F4, 1, 1), [g]), 4)) == [g, g + 1, g, g + 1]
    assert list(islice(sequence(spec(F4, 1, g, 1), [F4.zero, F4.zero]), 6)) == [F4.zero] * 6


def test_subspace_poly_examples():
    assert subspace_poly([F2.one], F2) == spec(F2, 1, 1)
    assert subspace_poly([], F2) == spec(F2, 1)
    assert subspace_poly([F4.one, g], F4) == spec(F4, 1, 0, 1)


def test_combine_examples():
    s = spec(F2, 1, 1)
    assert combine(s, s, "sum", F2) == s
    assert combine(s, s, "product", F2) == s
    # x^4 + x (order 2, kernel F_4) plus x^2 + x gives back x^4 + x
    assert combine(spec(F4, 1, 0, 1), spec(F4, 1, 1), "sum", F4) == spec(F4, 1, 0, 1)


def test_as_shift_examples():
    # order 0 relation: c' = 0, so c_{n+1}^p = c_n, which constants satisfy
    sh = as_shift(spec(F2, 1))
    assert sh.order == 1 and annihilates(sh, [F2.one] * 6)
    sh = as_shift(spec(F2, 1, 1))
    assert sh.order == 2
    assert annihilates(sh, [F2.one] * 10)
    assert annihilates(sh, [F2.zero] * 10)


def test_period_to_lrr_examples():
    s = period_to_lrr(PeriodCert(1, 0), F2)
    assert s.order == 1 and annihilates(s, [F2.one] * 5)
    s4 = period_to_lrr(PeriodCert(1, 0), F4)
    assert s4.order == 2
    assert annihilates(s4, [g] * 8)
    assert annihilates(s4, [g, g + 1] * 4)  # x^4 = x on F_4, so period 2 also fits
    assert annihilates(period_to_lrr(PeriodCert(3, 2), F4), [F4.zero] * 20)


def test_detect_period_examples():
    assert detect_period(iter([F2.one] * 50), 8, 8, 50) == PeriodCert(1, 0)
    assert detect_period(iter([g, g + 1] * 25), 8, 8, 50) == PeriodCert(2, 0)
    squares = [F2.one if int(n ** 0.5) ** 2 == n else F2.zero for n in range(100)]
    assert detect_period(iter(squares), 8, 8, 100) is None


def test_lrr_to_period_examples():
    assert lrr_to_period(spec(F2, 1, 1), [F2.one]) == PeriodCert(1, 0)
    assert lrr_to_period(spec(F4, 1, 1), [g]) == PeriodCert(2, 0)
    assert lrr_to_period(spec(F2, 1, 1), [F2.zero]) == PeriodCert(1, 0)


def random_spec(data, field, max_order=3):
    k = data.draw(st.integers(0, max_order))
    ds = [data.draw(elements(field)) for _ in range(k + 1)]
    if not ds[0]:
        ds[0] = field.one
    if not ds[-1]:
        ds[-1] = field.one
    return LRRSpec(tuple(ds))


@given(st.data())
def test_kernel_dimension(data):
    field = data.draw(st.sampled_from([F2, F4, F8, GF(3, 2)]))
    s = random_spec(data, field, 2)
    try:
        basis = kernel_basis(s, field)
    except FieldTooSmall:
        return
    kernel = [x for x in field.elements() if not additive_eval(s, x)]
    assert len(kernel) == field.p ** s.order == field.p ** len(basis)


@given(st.data())
def test_closed_form_matches_recurrence(data):
    field = data.draw(st.sampled_from([F4, F8, GF(3, 2)]))
    s = random_spec(data, field, 2)
    try:
        basis = kernel_basis(s, field)
    except FieldTooSmall:
        return
    init = [data.draw(elements(field)) for _ in range(s.order)]
    lam = solve_scalars(basis, init)
    seq = list(islice(sequence(s, init), 12))
    if s.order:
        assert [closed_form(basis, lam, n) for n in range(12)] == seq
    assert annihilates(s, seq)


@given(st.data())
def test_lrr_period_round_trip(data):
    field = data.draw(st.sampled_from([F2, F4, GF(3)]))
    M, N = data.draw(st.integers(1, 3)), data.draw(st.integers(0, 2))
    pre = [data.draw(elements(field)) for _ in range(N)]
    block = [data.draw(elements(field)) for _ in range(M)]
    seq = (pre + block * 40)[:60]
    s = period_to_lrr(PeriodCert(M, N), field)
    assert annihilates(s, seq)
    found = detect_period(iter(seq), 3, 2, 60)
    assert found is not None and found.M <= M and found.N <= N
    exact = lrr_to_period(s, seq[: s.order])
    assert exact == found


@given(st.data())
def test_as_shift_property(data):
    field = data.draw(st.sampled_from([F2, F4, GF(3)]))
    s = random_spec(data, field, 2)
    c = [data.draw(elements(field)) for _ in range(s.order + 1)]
    # c' satisfies s; build c with c_{n+1}^p - c_n = c'_n from c_0
    cp = list(islice(sequence(s, c[1:]), 20)) if s.order else [field.zero] * 20
    seq = [c[0]]
    for n in range(19):
        seq.append(frobenius(seq[-1] + cp[n], field.d - 1) if field.d > 1 else seq[-1] + cp[n])
    assert annihilates(as_shift(s), seq)


@given(st.data())
def test_zero_offset_equivalent(data):
    field = data.draw(st.sampled_from([F2, F4]))
    s = random_spec(data, field, 2)
    N0 = data.draw(st.integers(1, 3))
    shifted = LRRSpec(s.coeffs, N0)
    junk = [data.draw(elements(field)) for _ in range(N0)]
    init = [data.draw(elements(field)) for _ in range(s.order)]
    seq = junk + list(islice(sequence(s, init), 15))
    assert annihilates(shifted, seq)
    assert annihilates(zero_offset(shifted), seq, 0)


def test_combine_exhaustive_small():
    for ds1, ds2 in product(product(range(1, 4), repeat=2), repeat=2):
        elems = list(F4.elements())
        a, b = spec(F4, *[elems[d] for d in ds1]), spec(F4, *[elems[d] for d in ds2])
        for mode in ("sum", "product"):
            try:
                c = combine(a, b, mode, F4)
            except FieldTooSmall:
                continue
            for u0 in F4.elements():
                for v0 in F4.elements():
                    su = list(islice(sequence(a, [u0]), 12))
                    sv = list(islice(sequence(b, [v0]), 12))
                    op = (lambda x, y: x + y) if mode == "sum" else (lambda x, y: x * y)
                    assert annihilates(c, [op(x, y) for x, y in zip(su, sv)])
