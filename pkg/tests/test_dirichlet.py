import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisq.dirichlet import (
    L_derivative,
    L_derivative_at_negative,
    L_exact,
    L_numeric,
    QuadraticCharacter,
    bernoulli_number,
    bernoulli_polynomial,
    class_number_from_L,
    gen_bernoulli,
    hurwitz_zeta,
    is_fundamental_discriminant,
    kronecker,
    l_value,
    zeta_exact,
    zeta_numeric,
)
from eisq.errors import InvalidArgument

from conftest import field


def legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi_by_factoring(a, n):
    """Kronecker symbol for odd n > 0 as a product of Euler-criterion Legendre symbols."""
    out, p, m = 1, 3, n
    while m > 1:
        while m % p == 0:
            out *= legendre(a, p)
            m //= p
        p += 2
    return out


def test_kronecker_examples():
    assert kronecker(5, 2) == -1
    assert kronecker(5, 4) == 1
    assert all(kronecker(D, 1) == 1 for D in range(-30, 30))
    assert kronecker(1, 0) == kronecker(-1, 0) == 1
    assert kronecker(2, 0) == 0
    assert kronecker(-5, -1) == -1 and kronecker(5, -1) == 1


@given(st.integers(-500, 500), st.integers(0, 200))
def test_kronecker_matches_euler_criterion(a, k):
    n = 2 * k + 1
    assert kronecker(a, n) == jacobi_by_factoring(a, n)


@given(st.integers(-300, 300), st.integers(1, 60), st.integers(1, 60))
def test_kronecker_multiplicative_in_denominator(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


@pytest.mark.parametrize("D", [5, 13, 21, 65, 105, 229])
def test_character_period_multiplicative(D):
    chi = QuadraticCharacter(D)
    rng = random.Random(D)
    for _ in range(1000):
        a, b = rng.randrange(-10**4, 10**4), rng.randrange(-10**4, 10**4)
        assert chi(a * b) == chi(a) * chi(b)
        assert chi(a) == chi(a + D)
    assert chi(-1) == 1 and chi.is_even
    for n in range(1, 4 * D):
        prod = 1
        for p in field(D).prime_discs:
            prod *= QuadraticCharacter(p)(n)
        assert chi(n) == prod


def test_fundamental_discriminant():
    assert [d for d in range(-12, 30) if is_fundamental_discriminant(d)] == [-11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]


def test_bernoulli():
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert [bernoulli_number(n) for n in (0, 2, 4, 6)] == [1, Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42)]
    assert bernoulli_polynomial(2, Fraction(1, 3)) == Fraction(1, 9) - Fraction(1, 3) + Fraction(1, 6)


def test_l_values_d5():
    chi = QuadraticCharacter(5)
    assert gen_bernoulli(2, chi) == Fraction(4, 5)
    assert L_exact(2, chi) == Fraction(-2, 5)
    assert zeta_exact(2) * L_exact(2, chi) == Fraction(1, 30)
    assert gen_bernoulli(1, chi) == 0 and L_exact(1, chi) == 0
    # defining sum for B_{4,chi}
    f = 5
    direct = f**3 * sum(chi(a) * bernoulli_polynomial(4, Fraction(a, f)) for a in range(1, f + 1))
    assert L_exact(4, chi) == -direct / 4 == 2


@pytest.mark.parametrize("D", [5, 13, 17, 29, 65, 105, 157, 193])
def test_exact_vs_functional_equation(D):
    chi = QuadraticCharacter(D)
    for n in range(1, 9):
        ex = L_exact(n, chi)
        if n % 2:
            assert ex == 0
            continue
        with mpmath.workprec(160):
            num = L_numeric(1 - n, chi, 128)
            assert abs(num - mpmath.mpf(ex.numerator) / ex.denominator) < mpmath.mpf(2) ** -120 * max(1, abs(num))


def test_l2_functional_equation_d5():
    chi = QuadraticCharacter(5)
    with mpmath.workprec(160):
        lhs = L_numeric(2, chi, 128)
        rhs = -2 * mpmath.pi**2 / mpmath.mpf(5) ** 1.5 * mpmath.mpf(-2) / 5
        assert abs(lhs - rhs) < mpmath.mpf(2) ** -120


def test_l1_class_number(F5):
    with mpmath.workprec(160):
        lhs = L_numeric(1, QuadraticCharacter(5), 128)
        rhs = 2 * F5.h_wide * F5.log_eps0(160) / mpmath.sqrt(5)
        assert abs(lhs - rhs) < 1e-20


@pytest.mark.parametrize("D", [5, 13, 65, 105, 229])
def test_class_number_formula(D):
    F = field(D)
    h = class_number_from_L(D, F.log_eps0(160), 128)
    assert abs(h - F.h_wide) < 1e-30


def test_self_consistency_across_precision():
    chi = QuadraticCharacter(13)
    for s in ("1.5", "2.25", "0.3", "-1.7"):
        a = L_numeric(mpmath.mpf(s), chi, 64)
        b = L_numeric(mpmath.mpf(s), chi, 128)
        assert abs(a - b) <= mpmath.mpf(2) ** -60 * max(1, abs(b))


def test_hurwitz_and_zeta_against_mpmath():
    # mpmath is an oracle here only; the library evaluates by its own Euler-Maclaurin sum
    with mpmath.workprec(140):
        for s, a in (("3", "0.2"), ("2.5", "0.75"), ("1.25", "1")):
            assert abs(hurwitz_zeta(mpmath.mpf(s), mpmath.mpf(a), 128) - mpmath.zeta(mpmath.mpf(s), mpmath.mpf(a))) < 1e-35
        assert abs(zeta_numeric(mpmath.mpf(-1), 128) + mpmath.mpf(1) / 12) < 1e-35
        assert abs(zeta_numeric(mpmath.mpf(3), 128) - mpmath.zeta(3)) < 1e-35


@pytest.mark.parametrize("D,k", [(5, 2), (5, 4), (13, 2), (13, 6), (65, 4)])
def test_l_derivative_at_negative_finite_difference(D, k):
    chi = QuadraticCharacter(D)
    with mpmath.workprec(256 + 32):
        h = mpmath.mpf("1e-6")
        s = 1 - k
        fd = (L_numeric(s + h, chi, 256) - L_numeric(s - h, chi, 256)) / (2 * h)
        val = L_derivative_at_negative(k, chi, 256)
        assert abs(fd - val) <= 1e-8 * abs(val)


def test_l_derivative_positive_side():
    chi = QuadraticCharacter(5)
    with mpmath.workprec(200):
        h = mpmath.mpf("1e-15")
        fd = (L_numeric(3 + h, chi, 160) - L_numeric(3 - h, chi, 160)) / (2 * h)
        assert abs(fd - L_derivative(3, chi, 160)) < 1e-25


def test_l_value_record():
    chi = QuadraticCharacter(5)
    lv = l_value(-1, chi)
    assert lv.exact == Fraction(-2, 5) and lv.error_bound == 0
    lv = l_value(mpmath.mpf(2), chi, 100)
    assert lv.exact is None and lv.error_bound == mpmath.mpf(2) ** -100


def test_invalid_inputs():
    with pytest.raises(InvalidArgument):
        L_derivative_at_negative(3, QuadraticCharacter(5))
    with pytest.raises(InvalidArgument):
        QuadraticCharacter(6)
