"""Kronecker symbols, quadratic characters, generalized Bernoulli numbers and
Dirichlet L-values.

Exact values at non-positive integers come from generalized Bernoulli numbers.
Numeric values use the Hurwitz decomposition
    L(s, chi) = f^{-s} sum_{a=1}^{f} chi(a) zeta(s, a/f)
with Euler-Maclaurin tails for s >= 1/2, and the functional equation for
s < 1/2.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from .errors import InvalidArgument, PrecisionError
from .special import DEFAULT_PREC, GUARD_BITS, digamma_half, digamma_ratio


def kronecker(a, n):
    """Kronecker symbol (a/n) with the usual conventions for n = 0, -1, 2."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out 2 from n: (a/2) = 0 for even a, else +1 / -1 for a = +-1 / +-3 mod 8
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d):
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        r = d // 4
        return r % 4 in (2, 3) and _squarefree(abs(r))
    return False


def _squarefree(n):
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class QuadraticCharacter:
    """n -> (d/n) for a fundamental discriminant d (d = 1 is the trivial character)."""

    modulus: int

    def __post_init__(self):
        if self.modulus != 1 and not is_fundamental_discriminant(self.modulus):
            raise InvalidArgument(f"{self.modulus} is not a fundamental discriminant")

    def __call__(self, n):
        return kronecker(self.modulus, n)

    @property
    def conductor(self):
        return abs(self.modulus)

    @property
    def is_even(self):
        return self.modulus > 0

    @property
    def is_trivial(self):
        return self.modulus == 1

    def values(self):
        """[chi(1), ..., chi(f)]."""
        return [self(a) for a in range(1, self.conductor + 1)]


# Bernoulli numbers, B_1 = -1/2.  The cache only ever grows by appending
# under the lock, so readers never see a half-built list.
_bernoulli_cache = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(n):
    if n < len(_bernoulli_cache):
        return _bernoulli_cache[n]
    with _bernoulli_lock:
        while len(_bernoulli_cache) <= n:
            m = len(_bernoulli_cache)
            acc = sum(comb(m + 1, j) * _bernoulli_cache[j] for j in range(m))
            _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[n]


def bernoulli_polynomial(n, x):
    """B_n(x) for rational x, exactly."""
    x = Fraction(x)
    return sum(comb(n, j) * bernoulli_number(j) * x ** (n - j) for j in range(n + 1))


def gen_bernoulli(n, chi):
    """B_{n,chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f)."""
    if n < 1:
        raise InvalidArgument(f"gen_bernoulli needs n >= 1, got {n}")
    if chi.is_trivial:
        raise InvalidArgument("gen_bernoulli needs a nontrivial character")
    f = chi.conductor
    total = Fraction(0)
    for a, c in enumerate(chi.values(), start=1):
        if c:
            total += c * bernoulli_polynomial(n, Fraction(a, f))
    return total * f ** (n - 1)


def L_exact(n, chi):
    """L(1 - n, chi) = -B_{n,chi}/n for n >= 1."""
    if n < 1:
        raise InvalidArgument(f"L_exact is defined at 1 - n with n >= 1, got n = {n}")
    return -gen_bernoulli(n, chi) / n


def zeta_exact(n):
    """zeta(1 - n) = -B_n/n for n >= 2 (and zeta(0) = -1/2)."""
    if n == 1:
        return Fraction(-1, 2)
    return -bernoulli_number(n) / n


@dataclass(frozen=True)
class LValue:
    """L(point, chi), with the exact rational when point is a non-positive integer."""

    character: QuadraticCharacter
    point: object
    exact: Fraction | None
    approx: mpmath.mpf
    error_bound: mpmath.mpf


def l_value(s, chi, prec=DEFAULT_PREC):
    exact = None
    if int(s) == s and s <= 0:
        exact = L_exact(1 - int(s), chi)
        with mpmath.workprec(prec + GUARD_BITS):
            approx = mpmath.mpf(exact.numerator) / exact.denominator
        return LValue(chi, s, exact, approx, mpmath.mpf(0))
    return LValue(chi, s, None, L_numeric(s, chi, prec), mpmath.mpf(2) ** (-prec))


def _pole_difference(x, y, u):
    """(x^u - y^u)/(-u), continuous at u = 0 where it equals -log(x/y)."""
    l = mpmath.log(x / y)
    if u == 0:
        return -l
    return -(y**u) * mpmath.expm1(u * l) / u


def _em_setup(wp, s):
    n0 = max(10, wp // 2)
    return n0, mpmath.mpf(2) ** (-wp)


def _em_tail(s, x, eps, jmax):
    """Euler-Maclaurin correction sum_{j>=1} B_2j/(2j)! (s)_{2j-1} x^{-s-2j+1},
    plus the bound on the remainder (the first omitted term)."""
    total = mpmath.mpf(0)
    rising = s  # (s)_{2j-1}
    xp = x ** (-s - 1)
    x2 = x * x
    for j in range(1, jmax):
        b = bernoulli_number(2 * j)
        term = mpmath.mpf(b.numerator) / b.denominator / mpmath.factorial(2 * j) * rising * xp
        if abs(term) < eps:
            return total, abs(term)
        total += term
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        xp /= x2
    return None, None


def hurwitz_zeta(s, alpha, prec=DEFAULT_PREC, max_terms=200000):
    """zeta(s, alpha) for real s != 1, s > 0, alpha in (0, 1], by Euler-Maclaurin."""
    if s == 1:
        raise InvalidArgument("zeta(s, a) has a pole at s = 1")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        s = mpmath.mpf(s)
        alpha = mpmath.mpf(alpha)
        n0, eps = _em_setup(wp, s)
        while n0 <= max_terms:
            x = n0 + alpha
            tail, _ = _em_tail(s, x, eps, 4 * n0)
            if tail is not None:
                head = mpmath.fsum((n + alpha) ** (-s) for n in range(n0))
                return head + x ** (1 - s) / (s - 1) + x ** (-s) / 2 + tail
            n0 *= 2
        raise PrecisionError(f"zeta({s}, {alpha}) needs more than {max_terms} terms")


def zeta_numeric(s, prec=DEFAULT_PREC):
    """Riemann zeta for real s > 1/2, s != 1; reflection for s < 1/2."""
    if s < 0.5:
        with mpmath.workprec(prec + GUARD_BITS):
            s = mpmath.mpf(s)
            # zeta(s) = pi^{s-1/2} Gamma((1-s)/2)/Gamma(s/2) zeta(1-s)
            return (
                mpmath.pi ** (s - mpmath.mpf(1) / 2)
                * mpmath.gamma((1 - s) / 2)
                * mpmath.rgamma(s / 2)
                * zeta_numeric(1 - s, prec)
            )
    return hurwitz_zeta(s, 1, prec)


def _L_direct(s, chi, wp, max_terms, derivative=False):
    f = chi.conductor
    chis = chi.values()
    residues = [(a, c) for a, c in enumerate(chis, start=1) if c]
    s = mpmath.mpf(s)
    n0, eps = _em_setup(wp, s)
    eps /= f
    while n0 <= max_terms:
        ok = True
        total = mpmath.mpf(0)
        dtotal = mpmath.mpf(0)
        for a, c in residues:
            alpha = mpmath.mpf(a) / f
            x = n0 + alpha
            if derivative:
                tail, dtail = _em_tail_derivative(s, x, eps, 4 * n0)
            else:
                tail, _ = _em_tail(s, x, eps, 4 * n0)
            if tail is None:
                ok = False
                break
            head = mpmath.fsum((n + alpha) ** (-s) for n in range(n0))
            # the pole parts x^{1-s}/(s-1) sum to zero against chi; subtract n0^{1-s}/(s-1)
            pole = _pole_difference(x, mpmath.mpf(n0), 1 - s)
            total += c * (head + pole + x ** (-s) / 2 + tail)
            if derivative:
                lx = mpmath.log(x)
                dhead = -mpmath.fsum(mpmath.log(n + alpha) * (n + alpha) ** (-s) for n in range(n0))
                # d/ds of x^{1-s}/(s-1)
                dpole = -lx * x ** (1 - s) / (s - 1) - x ** (1 - s) / (s - 1) ** 2
                dtotal += c * (dhead + dpole - lx * x ** (-s) / 2 + dtail)
        if ok:
            fs = mpmath.mpf(f) ** (-s)
            if derivative:
                return fs * (dtotal - mpmath.log(f) * total)
            return fs * total
        n0 *= 2
    raise PrecisionError(f"L({s}, chi_{chi.modulus}) needs more than {max_terms} terms")


def _em_tail_derivative(s, x, eps, jmax):
    """Euler-Maclaurin correction for zeta(s, .) and its s-derivative."""
    total = mpmath.mpf(0)
    dtotal = mpmath.mpf(0)
    rising = s
    drising_ratio = 1 / s  # (s)_r'/(s)_r
    lx = mpmath.log(x)
    xp = x ** (-s - 1)
    x2 = x * x
    for j in range(1, jmax):
        b = bernoulli_number(2 * j)
        coeff = mpmath.mpf(b.numerator) / b.denominator / mpmath.factorial(2 * j)
        term = coeff * rising * xp
        dterm = term * (drising_ratio - lx)
        if abs(term) < eps and abs(dterm) < eps:
            return total + 0, dtotal
        total += term
        dtotal += dterm
        drising_ratio += 1 / (s + 2 * j - 1) + 1 / (s + 2 * j)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        xp /= x2
    return None, None


def L_numeric(s, chi, prec=DEFAULT_PREC, max_terms=200000):
    """L(s, chi) for real s and a nontrivial quadratic character.

    Absolute error <= 2^-prec.  s >= 1/2 uses Euler-Maclaurin directly;
    s < 1/2 reflects through
        L(s) = (pi/f)^{s-1/2} Gamma((1-s+e)/2)/Gamma((s+e)/2) L(1-s),
    e = 0 for even and 1 for odd characters.
    """
    if chi.is_trivial:
        raise InvalidArgument("L_numeric needs a nontrivial character; use zeta_numeric")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        s = mpmath.mpf(s)
        if s >= 0.5:
            return _L_direct(s, chi, wp, max_terms)
        e = 0 if chi.is_even else 1
        f = chi.conductor
        factor = (
            (mpmath.pi / f) ** (s - mpmath.mpf(1) / 2)
            * mpmath.gamma((1 - s + e) / 2)
            * mpmath.rgamma((s + e) / 2)
        )
        # the reflected value is bounded by zeta(1/2)-size quantities, the
        # factor can grow like Gamma; widen precision by its size
        extra = max(0, int(mpmath.log(abs(factor) + 1, 2)))
        return factor * L_numeric(1 - s, chi, prec + extra, max_terms)


def L_derivative(s, chi, prec=DEFAULT_PREC, max_terms=200000):
    """L'(s, chi) for real s > 1 by term-wise differentiated Euler-Maclaurin sums."""
    if s <= 1:
        raise InvalidArgument(f"L_derivative direct branch needs s > 1, got {s}")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        return _L_direct(mpmath.mpf(s), chi, wp, max_terms, derivative=True)


def L_derivative_at_negative(k, chi, prec=DEFAULT_PREC):
    """L'(1 - k, chi) for even k >= 2 and an even character.

    Logarithmic differentiation of the functional equation gives
        L'(1-k)/L(1-k) = log(pi/f) - psi(k/2)/2 - psi((1-k)/2)/2 - L'(k)/L(k),
    with psi(k/2) = H_{k/2-1} - gamma and psi((1-k)/2) from the half-integer
    recursion.  L(1-k) is the exact Bernoulli value (nonzero for even k).
    """
    if k < 2 or k % 2:
        raise InvalidArgument(f"k must be an even integer >= 2, got {k}")
    if not chi.is_even:
        raise InvalidArgument("L_derivative_at_negative is implemented for even characters")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        exact = L_exact(k, chi)
        lval = mpmath.mpf(exact.numerator) / exact.denominator
        f = chi.conductor
        logderiv = (
            mpmath.log(mpmath.pi / f)
            - digamma_ratio(k // 2, wp) / 2
            - digamma_half(-(k // 2), wp) / 2
            - L_derivative(k, chi, wp) / L_numeric(k, chi, wp)
        )
        return lval * logderiv


def class_number_from_L(D, log_eps0, prec=DEFAULT_PREC):
    """sqrt(D) L(1, chi_D) / (2 log eps0)."""
    with mpmath.workprec(prec + GUARD_BITS):
        return mpmath.sqrt(D) * L_numeric(1, QuadraticCharacter(D), prec) / (2 * log_eps0)
