"""Representation numbers N_{gamma,n}(b), G^b(a, m, 0) and the divisor sum sigma(a, m, s).

Two counting routes exist:

* enumeration of the D b^2 cosets of a d^{-1} / b a (``count_G``), the
  reference everything else is checked against;
* local densities (``local_count``): with F = D q in a basis of the dual,
  G^b = prod_{p | bD} p^{-e_p} #{(i, j) mod p^{v_p(b)+e_p} : F(i, j) + m = 0},
  e_p = v_p(D), computed p-adically.  This makes sigma available for m in
  the thousands.

sigma is reconstructed from the identity
    sum_b G^b b^{-s} = |m|^{-s/2} zeta(s-1)/L(s, chi_D) sigma(a, m, 1-s)
one prime at a time: the local series Lambda_p(X) = sum_nu g_p(p^nu) X^nu
times (1 - pX)/(1 - chi_D(p) X) must be a polynomial.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import mpmath
import numpy as np

from .dirichlet import L_numeric, QuadraticCharacter, kronecker, zeta_numeric
from .errors import BudgetExceeded, CertificateError, InvalidArgument
from .field import factorize
from .special import DEFAULT_PREC, GUARD_BITS

DEFAULT_BUDGET = 50_000_000


def _valuation(n, p):
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- enumeration ------------------------------------------------------------


def count_G(ideal, m, b, budget=DEFAULT_BUDGET):
    """#{x in a d^{-1} / b a : N(x)/N(a) + m/D is an integer divisible by b}."""
    if b < 1:
        raise InvalidArgument(f"b must be >= 1, got {b}")
    lat = ideal.lattice
    D = ideal.D
    if D * b * b > budget:
        raise BudgetExceeded(f"enumerating {D * b * b} cosets exceeds budget {budget}")
    (h11, _), (_, h22) = lat.hnf
    M = b * D
    A, B, C = (c % M for c in lat.form)
    j = np.arange(b * h22, dtype=np.int64)
    cj = (C * j % M) * j % M
    total = 0
    chunk = max(1, 2_000_000 // len(j))
    for start in range(0, b * h11, chunk):
        i = np.arange(start, min(start + chunk, b * h11), dtype=np.int64)[:, None]
        val = ((A * i % M) * i % M + (B * i % M) * j % M + cj + m) % M
        total += int(np.count_nonzero(val == 0))
    return total


def count_G_slow(ideal, m, b):
    """Pure-Python exact count over enumerate_quotient (small cases only)."""
    from .field import enumerate_quotient

    D = ideal.D
    n = 0
    for e in enumerate_quotient(ideal, b):
        t = e.qvalue + Fraction(m, D)
        if t.denominator == 1 and t.numerator % b == 0:
            n += 1
    return n


def count_N(ideal, gamma, n, b):
    """N_{gamma,n}(b) = #{x in a / b a : N(x - gamma)/N(a) + n = 0 mod b}.

    ``gamma`` is a QuotientElement (or field element of the dual); n is
    rational.  When n + q(gamma) is not an integer the count is 0.
    """
    lat = ideal.lattice
    D = ideal.D
    n = Fraction(n)
    x0 = getattr(gamma, "x", gamma)
    if (ideal.q(x0) + n).denominator != 1:
        return 0
    gi, gj = lat._dual_coords(x0)
    if gi.denominator != 1 or gj.denominator != 1:
        raise InvalidArgument("gamma is not in the dual lattice")
    gi, gj = int(gi), int(gj)
    Dn = n * D
    if Dn.denominator != 1:
        return 0
    Dn = int(Dn)
    M = b * D
    count = 0
    for i, j in product(range(b), repeat=2):
        u, v = lat.ideal_vector(i, j)
        if (lat.F(u - gi, v - gj) + Dn) % M == 0:
            count += 1
    return count


# -- local densities ----------------------------------------------------------


def _roots_mod_p(coeffs, p, budget):
    a, b, c, d, e, f = (x % p for x in coeffs)
    if p * p > budget:
        raise BudgetExceeded(f"root search mod {p} exceeds budget {budget}")
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    val = (a * x * x + b * x * y + c * y * y + d * x + e * y + f) % p
    xs, ys = np.nonzero(val == 0)
    return list(zip(xs.tolist(), ys.tolist()))


@lru_cache(maxsize=65536)
def _count_zeros(coeffs, p, n, budget=DEFAULT_BUDGET):
    """#{(x, y) mod p^n : a x^2 + b xy + c y^2 + d x + e y + f = 0 mod p^n}.

    Roots mod p with nonvanishing gradient lift to exactly p^{n-1} roots
    (Hensel); singular roots recurse on the rescaled polynomial.
    """
    if n == 0:
        return 1
    pn = p**n
    coeffs = tuple(x % pn for x in coeffs)
    if all(x % p == 0 for x in coeffs):
        return p * p * _count_zeros(tuple(x // p for x in coeffs), p, n - 1, budget)
    a, b, c, d, e, f = coeffs
    total = 0
    for x0, y0 in _roots_mod_p(coeffs, p, budget):
        gx = 2 * a * x0 + b * y0 + d
        gy = b * x0 + 2 * c * y0 + e
        if gx % p or gy % p:
            total += p ** (n - 1)
        elif n == 1:
            total += 1
        else:
            f0 = a * x0 * x0 + b * x0 * y0 + c * y0 * y0 + d * x0 + e * y0 + f
            if f0 % (p * p):
                continue
            sub = (a, b, c, gx // p, gy // p, f0 // (p * p))
            total += p * p * _count_zeros(sub, p, n - 2, budget)
    return total


def _count_unimodular(p, chi_p, t, n):
    """#{(x, y) mod p^n : F(x, y) = t mod p^n} for odd p not dividing disc(F),
    chi_p = (disc/p)."""
    if n == 0:
        return 1
    if t % p:
        return p ** (n - 1) * (p - chi_p)
    prim = p ** (n - 1) * (p - 1) * (1 + chi_p)
    if n == 1:
        return prim + 1
    if t % (p * p):
        return prim
    return prim + p * p * _count_unimodular(p, chi_p, t // (p * p), n - 2)


def quadratic_count(form, t, p, n, D, budget=DEFAULT_BUDGET):
    """#{(i, j) mod p^n : F(i, j) = t mod p^n} for the binary form F of
    discriminant D."""
    if p != 2 and D % p:
        return _count_unimodular(p, kronecker(D, p), t, n)
    A, B, C = form
    return _count_zeros((A, B, C, 0, 0, -t), p, n, budget)


def local_count(ideal, m, p, nu, budget=DEFAULT_BUDGET):
    """Local factor g_p(p^nu) of G^b: p^{-e} #{(i, j) mod p^{nu+e} : F + m = 0}."""
    D = ideal.D
    e = 1 if D % p == 0 else 0
    raw = quadratic_count(ideal.lattice.form, -m, p, nu + e, D, budget)
    q, r = divmod(raw, p**e)
    if r:
        raise AssertionError("local count not divisible by p^e")
    return q


def count_G_local(ideal, m, b, budget=DEFAULT_BUDGET):
    """G^b(a, m, 0) as the product of local densities over p | bD."""
    D = ideal.D
    primes = set(factorize(b)) | set(factorize(D))
    total = 1
    for p in sorted(primes):
        nu = _valuation(b, p) if b % p == 0 else 0
        total *= local_count(ideal, m, p, nu, budget)
        if total == 0:
            return 0
    return total


# -- sigma ------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaPolynomial:
    """sigma(a, m, w) = |m|^{(1-w)/2} sum_j coeff_j base_j^{w-1}."""

    m: int
    terms: tuple  # ((Fraction coeff, int base), ...) sorted by base

    @property
    def is_zero(self):
        return not self.terms

    def dirichlet_coefficients(self):
        return dict((b, c) for c, b in self.terms)

    def value(self, w):
        return sigma_value(self, w)

    def numeric(self, w, prec=DEFAULT_PREC):
        with mpmath.workprec(prec + GUARD_BITS):
            w = mpmath.mpf(w)
            am = abs(self.m)
            s = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(b) ** (w - 1) for c, b in self.terms)
            return mpmath.mpf(am) ** ((1 - w) / 2) * s

    def derivative(self, w, prec=DEFAULT_PREC):
        return sigma_derivative(self, w, prec)

    def to_json(self):
        return [{"coeff": _frac_str(c), "base": b} for c, b in self.terms]


def _frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _series_mul(a, b, deg):
    out = [0] * (deg + 1)
    for i, x in enumerate(a[: deg + 1]):
        if x:
            for j, y in enumerate(b[: deg + 1 - i]):
                out[i + j] += x * y
    return out


def local_sigma_factor(ideal, m, p, budget=DEFAULT_BUDGET):
    """Polynomial P_p(X) = Lambda_p(X) (1 - pX) / (1 - chi_D(p) X).

    Lambda_p is built to degree V = v_p(mD) + 3; coefficients beyond
    v_p(mD) + 1 must vanish.  Returns the coefficient list with trailing
    zeros stripped.
    """
    D = ideal.D
    vp = _valuation(m * D, p)
    V = vp + 3
    lam = [local_count(ideal, m, p, nu, budget) for nu in range(V + 1)]
    chi = kronecker(D, p)
    geo = [chi**i for i in range(V + 1)]
    poly = _series_mul(_series_mul(lam, [1, -p], V), geo, V)
    if any(poly[vp + 2 :]):
        raise CertificateError(
            f"local factor not polynomial: D={D}, ideal={ideal}, m={m}, p={p}, "
            f"coefficients {poly}"
        )
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _relevant_primes(m, D):
    return sorted(set(factorize(2 * m * D)))


_sigma_cache = {}
_sigma_lock = threading.Lock()


def sigma_polynomial(field_, ideal, m, budget=DEFAULT_BUDGET):
    """sigma(a, m, .) as a finite Dirichlet polynomial (zero when all G^b vanish)."""
    if m == 0:
        raise InvalidArgument("sigma_polynomial needs m != 0")
    key = (ideal, m)
    with _sigma_lock:
        hit = _sigma_cache.get(key)
    if hit is not None:
        return hit
    D = ideal.D
    coeffs = {1: 1}
    for p in _relevant_primes(m, D):
        poly = local_sigma_factor(ideal, m, p, budget)
        if not poly:
            coeffs = {}
            break
        new = {}
        for n, c in coeffs.items():
            for i, a in enumerate(poly):
                if a:
                    new[n * p**i] = new.get(n * p**i, 0) + c * a
        coeffs = new
    terms = tuple((Fraction(c), n) for n, c in sorted(coeffs.items()) if c)
    result = SigmaPolynomial(m, terms)
    with _sigma_lock:
        _sigma_cache[key] = result
    return result


def sigma_value(poly, w):
    """Exact sigma(a, m, w) at an odd integer w."""
    if int(w) != w or w % 2 == 0:
        raise InvalidArgument(
            f"exact sigma needs an odd integer argument, got {w}; use SigmaPolynomial.numeric"
        )
    w = int(w)
    s = sum((c * Fraction(b) ** (w - 1) for c, b in poly.terms), Fraction(0))
    return Fraction(abs(poly.m)) ** ((1 - w) // 2) * s


def sigma_derivative(poly, w, prec=DEFAULT_PREC):
    """d/dw sigma(a, m, w), evaluated from the exact coefficients."""
    with mpmath.workprec(prec + GUARD_BITS):
        if poly.is_zero:
            return mpmath.mpf(0)
        w = mpmath.mpf(w)
        am = mpmath.mpf(abs(poly.m))
        pref = am ** ((1 - w) / 2)
        logsum = mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(b) ** (w - 1) * mpmath.log(b)
            for c, b in poly.terms
        )
        return pref * logsum - mpmath.log(am) / 2 * poly.numeric(w, prec)


# -- Dirichlet-series identities ----------------------------------------------


@dataclass(frozen=True)
class SeriesComparison:
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    tail_bound: mpmath.mpf
    terms: int

    @property
    def discrepancy(self):
        return abs(self.lhs - self.rhs)

    @property
    def relative_discrepancy(self):
        return self.discrepancy / abs(self.rhs) if self.rhs else self.discrepancy


def truncated_tail_bound(D, s0, B):
    """sum_{b > B} D b^{2 - s0} <= D (B^{3-s0}/(s0-3) + B^{2-s0}) via the integral test."""
    with mpmath.workprec(64):
        s0 = mpmath.mpf(s0)
        return D * (mpmath.mpf(B) ** (3 - s0) / (s0 - 3) + mpmath.mpf(B) ** (2 - s0))


def partial_sum_G(ideal, m, s0, B, method="enumerate", prec=DEFAULT_PREC):
    counter = count_G if method == "enumerate" else count_G_local
    with mpmath.workprec(prec + GUARD_BITS):
        s0 = mpmath.mpf(s0)
        return mpmath.fsum(counter(ideal, m, b) * mpmath.mpf(b) ** (-s0) for b in range(1, B + 1))


def dirichlet_identity(field_, ideal, m, s0, B, method="enumerate", prec=DEFAULT_PREC):
    """Truncated sum_{b <= B} G^b b^{-s0} against the closed form.

    m != 0: |m|^{-s0/2} zeta(s0-1)/L(s0, chi_D) sigma(a, m, 1-s0);
    m == 0: zeta(s0-1) L(s0-1, chi_D)/L(s0, chi_D).
    """
    if s0 <= 3:
        raise InvalidArgument(f"need s0 > 3 for convergence, got {s0}")
    chi = QuadraticCharacter(field_.D)
    with mpmath.workprec(prec + GUARD_BITS):
        lhs = partial_sum_G(ideal, m, s0, B, method, prec)
        s = mpmath.mpf(s0)
        if m == 0:
            rhs = zeta_numeric(s - 1, prec) * L_numeric(s - 1, chi, prec) / L_numeric(s, chi, prec)
        else:
            sig = sigma_polynomial(field_, ideal, m).numeric(1 - s, prec)
            rhs = mpmath.mpf(abs(m)) ** (-s / 2) * zeta_numeric(s - 1, prec) / L_numeric(s, chi, prec) * sig
    return SeriesComparison(lhs, rhs, truncated_tail_bound(field_.D, s0, B), B)


def m_zero_series_check(field_, ideal, s0, B, method="enumerate", prec=DEFAULT_PREC):
    """The m = 0 identity sum_b G^b(a,0,0) b^{-s} = zeta(s-1) L(s-1)/L(s)."""
    return dirichlet_identity(field_, ideal, 0, s0, B, method, prec)
