from fractions import Fraction

from hypothesis import settings, strategies as st

from hahnfq.ffield import GF

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_FIELDS = [GF(2), GF(3), GF(2, 2), GF(2, 3), GF(3, 2), GF(5)]


@st.composite
def elements(draw, field):
    return field(0) + type(field.one)(field, draw(st.integers(0, field.q - 1)))


@st.composite
def field_and_elements(draw, n=1, fields=SMALL_FIELDS):
    f = draw(st.sampled_from(fields))
    return f, [draw(elements(f)) for _ in range(n)]


def pexp(p, max_depth=3, lo=-3, hi=3):
    """Rationals with p-power denominators."""
    return st.builds(lambda n, k: Fraction(n, p ** k), st.integers(lo * p ** max_depth, hi * p ** max_depth),
                     st.integers(0, max_depth))


@st.composite
def tr_series(draw, field, c=None, b=None, a=None, max_m=2):
    """Random twist-recurrent series with a zero tail in m."""
    from hahnfq.exponents import SupportCert
    from hahnfq.lrr import PeriodCert
    from hahnfq.twistrec import CoeffFunction, canonical_words, make_tr

    c = draw(st.integers(1, 2)) if c is None else c
    b = draw(st.integers(0, 1)) if b is None else b
    a = 1 if a is None else a
    per = PeriodCert(draw(st.integers(1, 2)), draw(st.integers(0, 1)))
    words = list(canonical_words(field.p, c, per))
    funcs = {}
    for m in range(-b, -b + draw(st.integers(1, max_m + 1))):
        tab = {w: draw(elements(field)) for w in words}
        funcs[m] = CoeffFunction(field, c, per, tab)
    return make_tr(field, SupportCert(a, b, c), funcs)
