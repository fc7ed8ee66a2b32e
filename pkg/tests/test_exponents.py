from fractions import Fraction as Q
from itertools import islice

import pytest
from hypothesis import assume, given, strategies as st

from hahnfq.errors import IncompatibleDenominator
from hahnfq.exponents import (
    SupportCert, cert_contains, cert_transform, cert_window, depth, format_exp, from_word,
    parse_exp, split_representations, tail_exponents, to_digits,
)

from conftest import pexp


def test_to_digits_examples():
    w = to_digits(Q(-1, 3), 1, 3)
    assert (w.n, w.digits) == (0, ((1, 1),))
    w = to_digits(Q(1, 4), 1, 2)
    assert (w.n, w.digits) == (1, ((1, 1), (2, 1)))
    w = to_digits(Q(-1), 1, 2)
    assert (w.n, w.digits) == (-1, ())
    with pytest.raises(IncompatibleDenominator):
        to_digits(Q(1, 3), 1, 2)


def test_cert_contains_examples():
    for p in (2, 3, 5):
        assert cert_contains(SupportCert(1, 1, 1), Q(-1, p), p)
        assert not cert_contains(SupportCert(1, 0, 1), Q(-1) - Q(1, p), p)
    assert not cert_contains(SupportCert(1, 0, 1), Q(-3, 4), 2)


def test_cert_window_examples():
    assert cert_window(SupportCert(1, 0, 1), 0, 3, 2) == [Q(-1, 2), Q(-1, 4), Q(-1, 8)]
    assert cert_window(SupportCert(1, 0, 0), 3, 5, 2) == [0, 1, 2]
    # n in {-1, 0} with at most one digit of depth <= 2; the listed example
    # omits -3/2 and -5/4, which are members as well
    assert cert_window(SupportCert(1, 1, 1), 0, 2, 2) == [Q(-3, 2), Q(-5, 4), Q(-1), Q(-1, 2), Q(-1, 4)]


def test_cert_transform_examples():
    c = cert_transform(SupportCert(1, 0, 1), SupportCert(1, 0, 1), "mul", 3)
    assert c == SupportCert(1, 0, 2)
    assert cert_contains(c, Q(-1, 3) + Q(-1, 9), 3)
    # p = 2: -1/2 + -1/2 = -1 carries into the integer part
    c2 = cert_transform(SupportCert(1, 0, 1), SupportCert(1, 0, 1), "mul", 2)
    assert cert_contains(c2, Q(-1), 2) and cert_contains(c2, Q(-3, 4), 2)
    c = cert_transform(SupportCert(1, 1, 1), None, "twist_down", 2, n=1)
    assert c == SupportCert(2, 1, 1) and cert_contains(c, Q(-1, 2), 2)
    c = cert_transform(SupportCert(1, 0, 1), None, "twist_up", 2, n=1)
    assert c == SupportCert(1, 1, 1) and cert_contains(c, Q(-1), 2)


def test_split_representations_examples():
    S01, S00 = SupportCert(1, 0, 1), SupportCert(1, 0, 0)
    assert split_representations(S01, S01, -1, 2) == [(Q(-1, 2), Q(-1, 2))]
    assert split_representations(S00, S00, 5, 2) == [(Q(i), Q(5 - i)) for i in range(6)]
    assert split_representations(S01, S01, Q(-3, 4), 2) == [(Q(-1, 2), Q(-1, 4)), (Q(-1, 4), Q(-1, 2))]


def test_tail_exponents_examples():
    for p in (2, 3):
        assert list(islice(tail_exponents(0, [], [(1, 1)], 1, p), 4)) == [-Q(1, p ** k) for k in range(1, 5)]
    got = list(islice(tail_exponents(0, [(1, 2)], [(2, 1)], 1, 3), 3))
    assert got == [Q(-2, 3) - Q(1, 9) / 3 ** n for n in range(3)]
    assert list(islice(tail_exponents(2, [(1, 1)], [], 1, 2), 3)) == [Q(3, 2)] * 3


@given(st.sampled_from([2, 3, 5]), st.data())
def test_digit_round_trip(p, data):
    a = data.draw(st.integers(1, 6))
    x = data.draw(pexp(p)) / a
    try:
        w = to_digits(x, a, p)
    except IncompatibleDenominator:
        assume(False)
    assert w.value(p) == x
    assert from_word(w.n, w.word(), a, p) == x
    assert all(0 < b < p for _, b in w.digits)
    c = SupportCert(a, max(-w.n, 0), w.digit_sum)
    assert cert_contains(c, x, p)
    if w.digit_sum:
        assert not cert_contains(SupportCert(a, max(-w.n, 0), w.digit_sum - 1), x, p)


@given(st.sampled_from([2, 3]), st.integers(1, 4), st.integers(0, 2), st.integers(0, 3), st.integers(0, 4))
def test_cert_window_sound_and_complete(p, a, b, c, E):
    r = Q(2)
    win = cert_window(SupportCert(a, b, c), r, E, p)
    assert win == sorted(set(win))
    for x in win:
        assert x < r and depth(x, p) <= E and cert_contains(SupportCert(a, b, c), x, p)
    # brute force over the lattice (1/(a p^E)) Z between the bounds
    lo = SupportCert(a, b, c).lower_bound()
    den = a * p ** E
    brute = [Q(k, den) for k in range(int(lo * den), int(r * den))
             if Q(k, den) < r and depth(Q(k, den), p) <= E and cert_contains(SupportCert(a, b, c), Q(k, den), p)]
    assert win == brute


@given(st.sampled_from([2, 3]), st.data())
def test_mul_cert_sound(p, data):
    cx = SupportCert(data.draw(st.integers(1, 3)), data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2)))
    cy = SupportCert(data.draw(st.integers(1, 3)), data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2)))
    out = cert_transform(cx, cy, "mul", p)
    for x in cert_window(cx, 1, 2, p):
        for y in cert_window(cy, 1, 2, p):
            assert cert_contains(out, x + y, p)
    add = cert_transform(cx, cy, "add", p)
    for x in cert_window(cx, 1, 2, p) + cert_window(cy, 1, 2, p):
        assert cert_contains(add, x, p)


@given(st.sampled_from([2, 3]), st.integers(1, 4), st.integers(0, 2), st.integers(0, 2), st.integers(1, 2))
def test_twist_certs_sound(p, a, b, c, n):
    cx = SupportCert(a, b, c)
    down = cert_transform(cx, None, "twist_down", p, n=n)
    up = cert_transform(cx, None, "twist_up", p, n=n)
    resc = cert_transform(cx, None, "rescale", p, L=a * 6)
    for x in cert_window(cx, 2, 3, p):
        assert cert_contains(down, x / p ** n, p)
        assert cert_contains(up, x * p ** n, p)
        assert cert_contains(resc, x, p)


@given(st.sampled_from([2, 3]), st.data())
def test_split_representations_complete(p, data):
    cx = SupportCert(1, data.draw(st.integers(0, 1)), data.draw(st.integers(0, 2)))
    cy = SupportCert(data.draw(st.integers(1, 2)), data.draw(st.integers(0, 1)), data.draw(st.integers(0, 2)))
    xs, ys = cert_window(cx, 1, 4, p), cert_window(cy, 1, 4, p)
    sums = {x + y for x in xs for y in ys if x + y < 0 and depth(x + y, p) <= 1}
    for k in sums:
        got = set(split_representations(cx, cy, k, p))
        expect = {(x, y) for x in xs for y in ys if x + y == k}
        assert expect <= got
        for x, y in got:
            assert x + y == k and cert_contains(cx, x, p) and cert_contains(cy, y, p)


@given(pexp(3))
def test_format_parse_exp(x):
    assert parse_exp(format_exp(x)) == x
