from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from segreode.errors import DomainError, StructureError
from segreode.scalars import GaussRational
from segreode.series import TriSeries, ULaurent, USeries

fractions = st.fractions(min_value=-4, max_value=4, max_denominator=3)
gauss = st.builds(GaussRational, fractions, fractions)


@st.composite
def useries(draw, trunc=10, max_terms=5):
    terms = draw(st.dictionaries(st.integers(0, trunc - 1), gauss,
                                 max_size=max_terms))
    return USeries("w", trunc, terms)


@st.composite
def triseries(draw, truncs=(4, 4, 5), max_terms=5):
    keys = st.tuples(st.integers(0, truncs[0] - 1), st.integers(0, truncs[1] - 1),
                     st.integers(0, truncs[2] - 1))
    return TriSeries(("z", "xi", "eta"), truncs,
                     draw(st.dictionaries(keys, gauss, max_size=max_terms)))


w = USeries.monomial(1, 1, trunc=10)
one = USeries.constant(1, trunc=10)


# -- spec'd examples ------------------------------------------------------

def test_mul_examples():
    assert ((one + w) * (one - w)) == one - USeries.monomial(2, 1, trunc=10)
    prod = ULaurent.monomial(-1, 1) * ULaurent.monomial(1, 1)
    assert prod.pole == 0 and prod.body.equal_mod(one, 10)
    s = USeries(trunc=10, terms={0: GaussRational(0, 2), 3: GaussRational(-4)})
    assert s + USeries.monomial(3, 4, trunc=10) == \
        USeries.constant(GaussRational(0, 2), trunc=10)


def test_derivative_examples():
    assert USeries.monomial(4, 1, trunc=9).derivative() == \
        USeries.monomial(3, 4, trunc=8)
    assert ULaurent.monomial(-3, 1).derivative() == ULaurent.monomial(-4, -3)
    s = one + USeries.monomial(3, GaussRational(0, Fraction(3, 2)), trunc=10)
    assert s.derivative() == USeries.monomial(
        2, GaussRational(0, Fraction(9, 2)), trunc=9)


def test_invert_examples():
    geom = (one - w).invert_unit()
    assert all(geom.coeff(k) == GaussRational(1) for k in range(10))
    assert USeries.constant(GaussRational(0, 2), trunc=10).invert_unit() == \
        USeries.constant(GaussRational(0, Fraction(-1, 2)), trunc=10)
    s = one + w + USeries.monomial(2, 1, trunc=10)
    assert (s * s.invert_unit()).equal_mod(one)
    with pytest.raises(DomainError):
        w.invert_unit()


def test_exp_log_examples():
    e = w.exp()
    assert e.coeff(2) == GaussRational(Fraction(1, 2))
    assert e.coeff(3) == GaussRational(Fraction(1, 6))
    lg = (one + w).log()
    assert lg.coeff(1) == GaussRational(1)
    assert lg.coeff(2) == GaussRational(Fraction(-1, 2))
    assert lg.coeff(3) == GaussRational(Fraction(1, 3))
    s = one + w + USeries.monomial(5, 1, trunc=10)
    assert s.log().exp() == s
    with pytest.raises(DomainError):
        (one + w).exp()
    with pytest.raises(DomainError):
        w.log()


def test_binomial_pow_examples():
    s = (one + w).pow_binomial(Fraction(-1, 3))
    assert s.coeff(1) == GaussRational(Fraction(-1, 3))
    assert s.coeff(2) == GaussRational(Fraction(2, 9))
    cube = (one + w).pow_binomial(Fraction(3))
    assert cube == one + 3 * w + USeries.monomial(2, 3, trunc=10) + \
        USeries.monomial(3, 1, trunc=10)


def test_substitute_examples():
    sq = USeries.monomial(2, 1, trunc=10)
    t = TriSeries(("z", "xi", "eta"), (4, 4, 6),
                  {(0, 0, 1): 1, (1, 1, 1): 1})          # eta(1 + z xi)
    out = sq.eval_at(t)
    assert out.coeff(0, 0, 2) == GaussRational(1)
    assert out.coeff(1, 1, 2) == GaussRational(2)
    assert out.coeff(2, 2, 2) == GaussRational(1)

    geom = (one - w).invert_unit()
    comp = geom.eval_at(USeries.monomial(2, 1, trunc=10))
    assert [comp.coeff(k) for k in range(5)] == \
        [GaussRational(1), GaussRational(0), GaussRational(1), GaussRational(0),
         GaussRational(1)]

    assert w.exp().eval_at((one + w).log()).equal_mod(one + w)


def test_variable_mismatch():
    with pytest.raises(StructureError):
        USeries.monomial(1, 1, var="w") + USeries.monomial(1, 1, var="t")


def test_divide_monomial():
    assert USeries.monomial(3, 2, trunc=9).divide_monomial(3) == \
        USeries.constant(2, trunc=6)
    with pytest.raises(DomainError):
        (one + w).divide_monomial(1)


def test_laurent_normalization_and_pow():
    x = ULaurent(USeries.monomial(2, 3, trunc=10), 5)
    assert x.pole == 3 and x.body.coeff(0) == GaussRational(3)
    y = ULaurent.monomial(-2, 2, trunc=12)
    assert (y.pow_int(-1) * y).truncate_abs(6) == \
        ULaurent.monomial(0, 1, trunc=12).truncate_abs(6)
    z = ULaurent.from_series(one + w)
    assert (z.invert() * z).body.equal_mod(one)


# -- hypothesis property tests --------------------------------------------

@settings(max_examples=60, deadline=None)
@given(useries(), useries(), useries())
def test_ring_axioms_univariate(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(triseries(), triseries(), triseries())
def test_ring_axioms_trivariate(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(useries(), useries())
def test_derivation_rule(a, b):
    lhs = (a * b).derivative()
    rhs = a.derivative() * b + a * b.derivative()
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(useries())
def test_functional_equations(s):
    unit = s + one - USeries.constant(s.coeff(0), trunc=s.trunc)
    assert (unit.invert_unit() * unit).equal_mod(one)
    assert unit.log().exp().equal_mod(unit)
    powed = unit.pow_binomial(Fraction(-1, 3))
    assert (powed.pow_int(3) * unit).equal_mod(one)


@settings(max_examples=40, deadline=None)
@given(triseries())
def test_trivariate_conjugation_involution(t):
    assert t.conjugate().conjugate() == t
    assert t.swap_zx().swap_zx() == t


def test_determinism():
    a = USeries(trunc=10, terms={k: GaussRational(Fraction(1, k + 1), k)
                                 for k in range(8)})
    b = (one + w).pow_binomial(Fraction(5, 7))
    assert (a * b).coeffs == (a * b).coeffs
    r1 = a * b + a.derivative() * b
    r2 = a * b + a.derivative() * b
    assert r1 == r2 and r1.den == r2.den
