"""Whittaker-type functions, incomplete gamma at non-positive order, harmonic
numbers and digamma values.

All real-valued functions take a ``prec`` argument in bits and evaluate with
:data:`GUARD_BITS` extra bits.  Results are :class:`mpmath.mpf`.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, log2

import mpmath

from .errors import InvalidArgument, PrecisionError

GUARD_BITS = 32
DEFAULT_PREC = 128


def harmonic(n):
    """Exact harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0)."""
    if n < 0:
        raise InvalidArgument(f"harmonic number needs n >= 0, got {n}")
    return _harmonic(n)


@lru_cache(maxsize=None)
def _harmonic(n):
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


def digamma_ratio(n, prec=DEFAULT_PREC):
    """Gamma'(n)/Gamma(n) = H_{n-1} - euler_gamma for a positive integer n."""
    if n < 1:
        raise InvalidArgument(f"digamma_ratio needs n >= 1, got {n}")
    with mpmath.workprec(prec + GUARD_BITS):
        h = _harmonic(n - 1)
        return mpmath.mpf(h.numerator) / h.denominator - mpmath.euler


def digamma_half(n, prec=DEFAULT_PREC):
    """psi(n + 1/2) for any integer n, via psi(1/2) = -gamma - 2 log 2 and
    the recursion psi(x + 1) = psi(x) + 1/x."""
    with mpmath.workprec(prec + GUARD_BITS):
        acc = Fraction(0)
        if n >= 0:
            for j in range(n):
                acc += Fraction(2, 2 * j + 1)
        else:
            for j in range(n, 0):
                acc -= Fraction(2, 2 * j + 1)
        base = -mpmath.euler - 2 * mpmath.log(2)
        return base + mpmath.mpf(acc.numerator) / acc.denominator


def _exp_integral_e1(x, eps, max_iter):
    # E1(x) = Gamma(0, x)
    if x < 1:
        # -gamma - log x - sum_{n>=1} (-x)^n / (n n!)
        total = -mpmath.euler - mpmath.log(x)
        term = mpmath.mpf(1)
        for n in range(1, max_iter):
            term *= -x / n
            contrib = term / n
            total -= contrib
            if abs(contrib) < eps:
                return total
        raise PrecisionError(f"E1 series at x={x} did not converge")
    # modified Lentz on E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
    tiny = mpmath.mpf(2) ** (-(mpmath.mp.prec * 4))
    b = x + 1
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, max_iter):
        a = -mpmath.mpf(i) * i
        b += 2
        d = a * d + b
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        h *= delta
        if abs(delta - 1) < eps:
            return h * mpmath.exp(-x)
    raise PrecisionError(f"E1 continued fraction at x={x} did not converge")


def incomplete_gamma_upper(order, x, prec=DEFAULT_PREC, max_iter=100000):
    """Upper incomplete gamma Gamma(order, x) for an integer order <= 0.

    Starts from Gamma(0, x) = E1(x) and applies the downward recurrence
    Gamma(a - 1, x) = (Gamma(a, x) - x^(a-1) e^(-x)) / (a - 1).  The recurrence
    cancels about log2(x) bits per step for large x, so the working precision
    is widened accordingly.
    """
    if order > 0 or int(order) != order:
        raise InvalidArgument(f"order must be an integer <= 0, got {order}")
    order = int(order)
    if x <= 0:
        raise InvalidArgument(f"x must be positive, got {x}")
    extra = int(-order * (log2(float(x) + 2) + 1))
    wp = prec + GUARD_BITS + extra
    with mpmath.workprec(wp):
        x = mpmath.mpf(x)
        eps = mpmath.mpf(2) ** (-wp)
        g = _exp_integral_e1(x, eps, max_iter)
        ex = mpmath.exp(-x)
        for a in range(0, order, -1):
            g = (g - x ** (a - 1) * ex) / (a - 1)
        return g


def whittaker_W0(v, k, prec=DEFAULT_PREC):
    """The s = 0 value: e^{-v/2} for v > 0 and e^{-v/2} Gamma(1-k, |v|) for v < 0."""
    if v == 0:
        raise InvalidArgument("whittaker_W0 is undefined at v = 0")
    with mpmath.workprec(prec + GUARD_BITS):
        v = mpmath.mpf(v)
        if v > 0:
            return mpmath.exp(-v / 2)
        return mpmath.exp(-v / 2) * incomplete_gamma_upper(1 - k, -v, prec)


def w0_prime_terms(k):
    """Integer weights binom(k-1, j) (j-1)! of v^{-j}, j = 1..k-1."""
    return [(j, comb(k - 1, j) * factorial(j - 1)) for j in range(1, k)]


def whittaker_W0_prime(v, k, prec=DEFAULT_PREC):
    """s-derivative at s = 0 of W_s(v) for v > 0: e^{-v/2} sum_j binom(k-1,j)(j-1)!/v^j."""
    if v <= 0:
        raise InvalidArgument(f"whittaker_W0_prime needs v > 0, got {v}")
    with mpmath.workprec(prec + GUARD_BITS):
        v = mpmath.mpf(v)
        total = mpmath.fsum(c / v**j for j, c in w0_prime_terms(k))
        return mpmath.exp(-v / 2) * total


def _quad(f, intervals, prec, what):
    """Tanh-sinh quadrature, raising the degree until the error estimate
    falls below 2^-prec relative to the result."""
    tol = mpmath.mpf(2) ** (-prec)
    for maxdegree in (8, 10, 12, 14):
        val, err = mpmath.quad(f, intervals, error=True, maxdegree=maxdegree)
        if err <= tol * max(abs(val), 1):
            return val
    raise PrecisionError(f"quadrature for {what} did not reach 2^-{prec} (error estimate {err})")


def _quad_endpoint(f, lead, prec, what):
    """int_0^inf f(t) dt where f(t) ~ t^lead near 0 (lead > -1).

    For lead < 0 the piece on [0, 1] is taken after t = u^p, p = 1/(lead+1),
    which turns the endpoint behaviour into u^0.
    """
    if lead >= 0:
        return _quad(f, [0, 1, mpmath.inf], prec, what)
    p = 1 / (lead + 1)
    head = _quad(lambda u: p * u ** (p - 1) * f(u**p), [0, 1], prec, what)
    return head + _quad(f, [1, mpmath.inf], prec, what)


def whittaker_Ws(v, s, k, prec=DEFAULT_PREC):
    """W_s(v) = |v|^{-k/2} W_{sgn(v)k/2, (1-k)/2-s}(|v|) by quadrature.

    v > 0 (needs s > -1) uses the regularized representation
        e^{-v/2} (1 + v^s/Gamma(s) int_0^inf e^{-vt} t^{s-1} ((1+t)^{s+k-1} - 1) dt);
    v < 0 (needs s > -k) uses the Kummer-transformed representation
        e^{-z/2} z^s/Gamma(k+s) int_0^inf e^{-zt} t^{k+s-1} (1+t)^{s-1} dt,  z = |v|.
    """
    if v == 0:
        raise InvalidArgument("W_s is undefined at v = 0")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        v = mpmath.mpf(v)
        s = mpmath.mpf(s)
        if v > 0:
            if s <= -1:
                raise InvalidArgument(f"W_s(v) for v > 0 needs s > -1, got {s}")
            if s == 0:
                return mpmath.exp(-v / 2)
            a = s + k - 1

            def f(t):
                return mpmath.exp(-v * t) * t ** (s - 1) * mpmath.expm1(a * mpmath.log1p(t))

            integral = _quad_endpoint(f, s, wp - 8, f"W_s(v={v}, s={s})")
            return mpmath.exp(-v / 2) * (1 + v**s * mpmath.rgamma(s) * integral)
        z = -v
        if s <= -k:
            raise InvalidArgument(f"W_s(v) for v < 0 needs s > -k, got {s}")

        def g(t):
            return mpmath.exp(-z * t) * t ** (k + s - 1) * (1 + t) ** (s - 1)

        integral = _quad_endpoint(g, k + s - 1, wp - 8, f"W_s(v={v}, s={s})")
        return mpmath.exp(-z / 2) * z**s * mpmath.rgamma(k + s) * integral
