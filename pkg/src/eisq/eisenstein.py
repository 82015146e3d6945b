"""Fourier coefficients of E(tau, s), the holomorphic q-expansion of E(tau, 0)
and the coefficients of E'(tau, 0).

i^k is written (-1)^(k/2) throughout, so every coefficient is real.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath

from .dirichlet import L_derivative_at_negative, L_exact, L_numeric, QuadraticCharacter
from .errors import InvalidArgument
from .field import genus_characters
from .repnum import DEFAULT_BUDGET, sigma_polynomial
from .special import (
    DEFAULT_PREC,
    GUARD_BITS,
    harmonic,
    incomplete_gamma_upper,
    w0_prime_terms,
    whittaker_Ws,
)


def _mpf(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class EisensteinParams:
    field: object
    ideal: object
    k: int
    prec: int = DEFAULT_PREC
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.k < 2 or self.k % 2:
            raise InvalidArgument(f"weight must be an even integer >= 2, got {self.k}")
        if self.ideal.D != self.field.D:
            raise InvalidArgument("ideal belongs to a different field")

    @property
    def chi(self):
        return QuadraticCharacter(self.field.D)

    @property
    def sign(self):
        """i^k for even k."""
        return -1 if self.k % 4 == 2 else 1

    def sigma(self, m):
        return sigma_polynomial(self.field, self.ideal, m, self.budget)

    def L_neg(self):
        """L(1 - k, chi_D), exact."""
        return L_exact(self.k, self.chi)


def holomorphic_coefficient(params, m):
    """2 m^{k/2-1} sigma(a, m, 1-k) / L(1-k, chi_D), exact."""
    if m == 0:
        return Fraction(1)
    k = params.k
    sig = params.sigma(m)
    if sig.is_zero:
        return Fraction(0)
    return 2 * Fraction(abs(m)) ** (k // 2 - 1) * sig.value(1 - k) / params.L_neg()


def coefficient_s(params, m, s, v):
    """c(m, s, v): the coefficient of e(m u) in E(tau, s), tau = u + iv."""
    if v <= 0:
        raise InvalidArgument(f"v must be positive, got {v}")
    k = params.k
    D = params.field.D
    chi = params.chi
    prec = params.prec
    with mpmath.workprec(prec + GUARD_BITS):
        s = mpmath.mpf(s)
        v = mpmath.mpf(v)
        if m == 0:
            first = (D * v) ** s
            if s == 0:
                return first
            second = (
                params.sign
                * mpmath.mpf(2) ** (2 - k - 2 * s)
                * mpmath.pi
                * v ** (1 - k - s)
                * mpmath.mpf(D) ** (-s - k + mpmath.mpf(1) / 2)
                * mpmath.gamma(k + 2 * s - 1)
                * mpmath.rgamma(k + s)
                * mpmath.rgamma(s)
                * L_numeric(k + 2 * s - 1, chi, prec)
                / L_numeric(k + 2 * s, chi, prec)
            )
            return first + second
        sig = params.sigma(m)
        if sig.is_zero:
            return mpmath.mpf(0)
        if m < 0 and s == 0:
            return mpmath.mpf(0)
        w = 1 - 2 * s - k
        if s == 0:
            lval = _mpf(params.L_neg())
            sval = _mpf(sig.value(1 - k))
        else:
            lval = L_numeric(w, chi, prec)
            sval = sig.numeric(w, prec)
        gamma_den = mpmath.rgamma(s + k) if m > 0 else mpmath.rgamma(s)
        return (
            2
            * (D / (4 * mpmath.pi)) ** s
            * mpmath.cospi(s)
            * mpmath.gamma(2 * s + k)
            * gamma_den
            / lval
            * mpmath.mpf(abs(m)) ** (mpmath.mpf(k) / 2 - 1)
            * sval
            * whittaker_Ws(4 * mpmath.pi * m * v, s, k, prec)
        )


@dataclass
class QExpansion:
    D: int
    ideal: str
    k: int
    genus_chars: tuple
    coefficients: dict = field(default_factory=dict)

    def __getitem__(self, m):
        return self.coefficients[m]

    @property
    def max_index(self):
        return max(self.coefficients)

    def to_json(self):
        return {
            "D": self.D,
            "ideal": self.ideal,
            "k": self.k,
            "genus_chars": list(self.genus_chars),
            "coeffs": [
                {"m": m, "num": c.numerator, "den": c.denominator}
                for m, c in sorted(self.coefficients.items())
            ],
        }


def _coefficient_job(args):
    params, m = args
    return m, holomorphic_coefficient(params, m)


def holomorphic_expansion(params, M, workers=1):
    """Exact q-expansion 1 + sum_{m=1}^{M} c(m) q^m of E(tau, 0)."""
    if M < 1:
        raise InvalidArgument(f"number of terms must be >= 1, got {M}")
    coeffs = {0: Fraction(1)}
    jobs = [(params, m) for m in range(1, M + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_coefficient_job, jobs, chunksize=max(1, M // (8 * workers))))
    else:
        results = [_coefficient_job(j) for j in jobs]
    coeffs.update(sorted(results))
    return QExpansion(
        params.field.D,
        str(params.ideal),
        params.k,
        genus_characters(params.field, params.ideal),
        coeffs,
    )


@dataclass(frozen=True)
class DerivativeCoefficient:
    """tilde c(m, v), the coefficient of e(m tau) in E'(tau, 0).

    m > 0:  prefactor * (constant + sum_j weight_j / (4 pi m v)^j)
    m < 0:  prefactor * Gamma(1 - k, 4 pi |m| v)
    m = 0:  log(v D) + constant * v^{1-k}
    """

    m: int
    k: int
    D: int
    prefactor: object
    constant: object
    v_terms: tuple = ()

    def value(self, v, prec=DEFAULT_PREC):
        with mpmath.workprec(prec + GUARD_BITS):
            v = mpmath.mpf(v)
            if self.m == 0:
                return mpmath.log(v * self.D) + self.constant * v ** (1 - self.k)
            if self.prefactor == 0:
                return mpmath.mpf(0)
            if self.m < 0:
                x = 4 * mpmath.pi * abs(self.m) * v
                return self.prefactor * incomplete_gamma_upper(1 - self.k, x, prec)
            x = 4 * mpmath.pi * self.m * v
            return self.prefactor * (self.constant + mpmath.fsum(c / x**j for j, c in self.v_terms))

    def parts(self):
        def num(x):
            return x if isinstance(x, (int, Fraction)) else mpmath.nstr(x, 30)

        if self.m == 0:
            return {"log_vD_coeff": 1, "v_power": 1 - self.k, "v_power_coeff": num(self.constant)}
        if self.m < 0:
            return {"prefactor": num(self.prefactor), "incomplete_gamma_order": 1 - self.k}
        return {
            "prefactor": num(self.prefactor),
            "constant": num(self.constant),
            "v_terms": [{"j": j, "weight": c} for j, c in self.v_terms],
        }


def derivative_coefficient(params, m, use_k2_formula=True):
    """Structured tilde c(m, v).

    For k = 2 the constant term uses h_K log(eps0) / (sqrt(D) pi L(-1, chi_D))
    unless ``use_k2_formula`` is False, in which case the general
    L(k-1)/L(k) expression is evaluated.
    """
    k = params.k
    D = params.field.D
    chi = params.chi
    prec = params.prec
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        if m == 0:
            if k == 2 and use_k2_formula:
                F = params.field
                const = (
                    F.h_wide
                    * F.log_eps0(wp)
                    / (mpmath.sqrt(D) * mpmath.pi * _mpf(params.L_neg()))
                )
            else:
                const = (
                    params.sign
                    * mpmath.mpf(2) ** (2 - k)
                    * mpmath.pi
                    / ((k - 1) * mpmath.mpf(D) ** (k - mpmath.mpf(1) / 2))
                    * L_numeric(k - 1, chi, prec)
                    / L_numeric(k, chi, prec)
                )
            return DerivativeCoefficient(0, k, D, 1, const)
        sig = params.sigma(m)
        if sig.is_zero:
            return DerivativeCoefficient(m, k, D, Fraction(0), Fraction(0))
        hol = holomorphic_coefficient(params, m)
        if m < 0:
            return DerivativeCoefficient(m, k, D, factorial(k - 1) * hol, Fraction(0))
        lneg = _mpf(params.L_neg())
        sval = _mpf(sig.value(1 - k))
        const = (
            mpmath.log(D / (4 * mpmath.pi))
            + _mpf(harmonic(k - 1))
            - mpmath.euler
            + 2 * L_derivative_at_negative(k, chi, prec) / lneg
            - 2 * sig.derivative(1 - k, prec) / sval
        )
        return DerivativeCoefficient(m, k, D, hol, const, tuple(w0_prime_terms(k)))


@dataclass(frozen=True)
class SeriesValue:
    value: object
    tail_bound: object
    terms: int


def coefficient_growth_constant(expansion):
    """2 * max_{m >= 1} |c(m)| / m^k over the stored coefficients."""
    k = expansion.k
    best = Fraction(0)
    for m, c in expansion.coefficients.items():
        if m:
            best = max(best, abs(c) / Fraction(m) ** k)
    return 2 * best


def evaluate_series(expansion, tau, M=None, prec=DEFAULT_PREC):
    """sum_{m <= M} c(m) e(m tau) and a bound on the omitted tail.

    The tail is bounded with |c(m)| <= C m^k, C from
    :func:`coefficient_growth_constant`.
    """
    M = expansion.max_index if M is None else M
    if M > expansion.max_index:
        raise InvalidArgument(f"expansion only has {expansion.max_index} terms, asked for {M}")
    with mpmath.workprec(prec + GUARD_BITS):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise InvalidArgument("tau must lie in the upper half-plane")
        q = mpmath.expjpi(2 * tau)
        total = mpmath.mpc(0)
        qm = mpmath.mpc(1)
        for m in range(M + 1):
            c = expansion.coefficients.get(m, 0)
            if c:
                total += _mpf(c) * qm
            qm *= q
        r = abs(q)
        k = expansion.k
        C = _mpf(coefficient_growth_constant(expansion))
        ratio = r * (1 + mpmath.mpf(1) / (M + 1)) ** k
        if ratio >= 1:
            tail = mpmath.inf
        else:
            tail = C * mpmath.mpf(M + 1) ** k * r ** (M + 1) / (1 - ratio)
        return SeriesValue(total, tail, M)
