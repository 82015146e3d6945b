from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisq.dirichlet import kronecker
from eisq.errors import InvalidArgument, InvalidDiscriminant
from eisq.field import (
    FieldElement,
    FractionalIdeal,
    cf_period_sqrt,
    class_representatives,
    coprime_representative,
    element_sign,
    enumerate_quotient,
    form_cycles,
    genus_characters,
    genus_representatives,
    make_field,
    prime_ideal_above,
    reduced_forms,
)

from conftest import field

DISCS = [5, 13, 17, 21, 29, 33, 37, 41, 57, 65, 85, 105, 229]


def brute_unit(D):
    """Smallest (x + y sqrt D)/2 > 1 with x^2 - D y^2 = +-4, by search over y."""
    y = 1
    while True:
        for s in (-4, 4):
            x2 = D * y * y + s
            x = isqrt(x2) if x2 >= 0 else -1
            if x > 0 and x * x == x2:
                return x, y, s // 4
        y += 1


def brute_reduced_count(D):
    r = D**0.5
    n = 0
    for b in range(1, isqrt(D) + 1):
        for a in range(-D, D + 1):
            if a == 0 or (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if gcd(gcd(a, b), c) == 1 and abs(r - 2 * abs(a)) < b < r:
                n += 1
    return n


def test_make_field_d5(F5):
    assert F5.eps0 == FieldElement(Fraction(1, 2), Fraction(1, 2), 5)
    assert str(F5.eps0) == "(1+1*sqrt(5))/2"
    assert F5.eps0_norm == -1
    assert F5.h_narrow == F5.h_wide == 1
    assert F5.prime_discs == (5,)


@pytest.mark.parametrize("D,msg", [(4, "even"), (45, "squarefree"), (1, "D > 1"), (3, "1 mod 4"), (-3, "D > 1")])
def test_make_field_rejects(D, msg):
    with pytest.raises(InvalidDiscriminant, match=msg):
        make_field(D)


@pytest.mark.parametrize("D", DISCS)
def test_unit_is_minimal_pell_solution(D):
    F = field(D)
    x, y, n = brute_unit(D)
    a, b, den = F.eps0.halves()
    assert (a, b, den) == (x, y, 1)
    assert F.eps0_norm == n
    assert abs(F.eps0.norm()) == 1


@pytest.mark.parametrize("D", DISCS)
def test_period_parity_matches_unit_norm(D):
    _, period = cf_period_sqrt(D)
    assert (len(period) % 2 == 1) == (field(D).eps0_norm == -1)


@pytest.mark.parametrize("D", DISCS)
def test_reduced_form_count_and_class_numbers(D):
    F = field(D)
    assert len(reduced_forms(D)) == brute_reduced_count(D)
    assert sum(len(c) for c in form_cycles(D)) == len(reduced_forms(D))
    assert F.h_wide == (F.h_narrow if F.eps0_norm == -1 else F.h_narrow // 2)
    prod = 1
    for p in F.prime_discs:
        prod *= p
    assert prod == D


@pytest.mark.parametrize("D,hn,hw", [(5, 1, 1), (13, 1, 1), (21, 2, 1), (65, 2, 2), (105, 4, 2), (229, 3, 3)])
def test_known_class_numbers(D, hn, hw):
    F = field(D)
    assert (F.h_narrow, F.h_wide) == (hn, hw)


@st.composite
def elements(draw, D=13):
    x = draw(st.fractions(min_value=-20, max_value=20, max_denominator=6))
    y = draw(st.fractions(min_value=-20, max_value=20, max_denominator=6))
    return FieldElement(x, y, D)


@given(elements(), elements())
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a + b).conj() == a.conj() + b.conj()


@given(elements())
def test_inverse(a):
    if a.is_zero():
        return
    assert a * (1 / a) == FieldElement(Fraction(1), Fraction(0), 13)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_element_sign_exact(p, q):
    e = FieldElement(Fraction(p), Fraction(q), 13)
    expect = (p + q * 13**0.5 > 0) - (p + q * 13**0.5 < 0)
    assert element_sign(e) == expect


def test_ideal_parse_and_norm():
    I = FractionalIdeal.parse("3/2:2:1", 65)
    assert I.norm() == Fraction(9, 4) * 2
    assert str(I) == "3/2:2:1"
    with pytest.raises(InvalidArgument):
        FractionalIdeal.parse("1:2:2", 65)
    with pytest.raises(InvalidArgument):
        FractionalIdeal.parse("garbage", 65)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 13, 65, 105]), st.integers(-9, 9), st.integers(-9, 9), st.integers(0, 3))
def test_norm_of_principal_multiple(D, x, y, which):
    if x == 0 and y == 0:
        return
    F = field(D)
    I = (class_representatives(F) + genus_representatives(F))[which % (F.h_narrow + F.num_genera)]
    lam = FieldElement(Fraction(x), Fraction(y, 2 if (x - y) % 2 == 0 else 1), D)
    J = I.times(lam)
    assert J.norm() == abs(lam.norm()) * I.norm()
    assert all(I.q(e).denominator == 1 for e in I.basis())


@pytest.mark.parametrize("D", [5, 13, 65, 105])
def test_ideal_is_even_lattice_closed_under_ring(D):
    F = field(D)
    w = FieldElement(Fraction(1, 2), Fraction(1, 2), D)
    for I in class_representatives(F) + genus_representatives(F):
        g1, g2 = I.basis()
        for e in (g1, g2, g1 + g2, g1 - 2 * g2):
            assert I.contains(e * w)
            assert I.q(e).denominator == 1
        B = I.q(g1 + g2) - I.q(g1) - I.q(g2)
        assert B.denominator == 1


def test_enumerate_quotient_d5(F5):
    I = F5.unit_ideal()
    els = list(enumerate_quotient(I, 1))
    assert len(els) == 5
    assert sorted(int(5 * e.qvalue) % 5 for e in els) == sorted(t % 5 for t in (0, -1, -4, -4, -1))
    assert len(list(enumerate_quotient(I, 2))) == 20
    inner = list(enumerate_quotient(I, 1, restrict_to_ideal=True))
    assert len(inner) == 1 and inner[0].qvalue == 0


@pytest.mark.parametrize("D,b", [(5, 3), (13, 2), (65, 2), (105, 1)])
def test_enumerate_quotient_invariants(D, b):
    F = field(D)
    for I in genus_representatives(F):
        els = list(enumerate_quotient(I, b))
        assert len(els) == D * b * b
        assert len({e.coords for e in els}) == D * b * b
        assert all((D * e.qvalue).denominator == 1 for e in els)
        for e in enumerate_quotient(I, b, restrict_to_ideal=True):
            assert e.qvalue.denominator == 1


def test_genus_representatives_counts():
    assert len(genus_representatives(field(5))) == 1
    assert len(genus_representatives(field(65))) == 2
    assert len(genus_representatives(field(105))) == 4


@pytest.mark.parametrize("D", [5, 13, 21, 65, 85, 105, 229])
def test_genus_vectors_distinct_and_exhaustive(D):
    F = field(D)
    reps = genus_representatives(F)
    vecs = [genus_characters(F, I) for I in reps]
    assert len(set(vecs)) == len(reps) == F.num_genera
    for I in reps:
        assert gcd(int(I.norm()), D) == 1
        assert I.is_integral()
    for I in class_representatives(F):
        v = genus_characters(F, I)
        assert vecs.count(v) == 1
        prod = 1
        for c in v:
            prod *= c
        assert prod == 1


def test_genus_characters_d65_norm_two(F65):
    P = prime_ideal_above(65, 2)
    assert P.norm() == 2
    assert genus_characters(F65, P) == (kronecker(5, 2), kronecker(13, 2)) == (-1, -1)


@pytest.mark.parametrize("D", [13, 65, 105])
def test_genus_characters_of_principal_ideals(D):
    F = field(D)
    for x in range(1, 12):
        for y in range(-4, 5):
            lam = FieldElement(Fraction(x), Fraction(y), D)
            n = lam.norm()
            if n <= 0 or gcd(int(n), D) != 1:
                continue
            I = F.unit_ideal().times(lam)
            assert genus_characters(F, I) == tuple(kronecker(p, int(n)) for p in F.prime_discs)
            assert all(c == 1 for c in genus_characters(F, I))


def test_coprime_representative_is_equivalent(F65):
    I = FractionalIdeal(65, Fraction(1), 5, 5)
    rep, lam = coprime_representative(F65, I)
    assert gcd(int(rep.norm()), 65) == 1
    assert lam.norm() > 0
    assert rep == I.times(lam)
