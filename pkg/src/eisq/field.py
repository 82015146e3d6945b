"""Arithmetic of Q(sqrt(D)) for odd fundamental D > 1.

Elements are stored as rational coordinates x + y sqrt(D).  Fractional ideals
are kept in the canonical shape  scale * (a Z + (b + sqrt(D))/2 Z)  with
b^2 = D mod 4a and 0 <= b < 2a.  Lattice computations (duals, quotients,
membership) work in integer coordinates with respect to explicit bases.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, isqrt, lcm

import mpmath

from .dirichlet import kronecker
from .errors import InvalidArgument, InvalidDiscriminant


@dataclass(frozen=True)
class FieldElement:
    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def from_halves(cls, a, b, D, den=1):
        """(a + b sqrt(D)) / (2 den)."""
        return cls(Fraction(a, 2 * den), Fraction(b, 2 * den), D)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.D != self.D:
                raise InvalidArgument("elements of different fields")
            return other
        return FieldElement(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(
            self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        c = o.conj() * self
        return FieldElement(c.x / n, c.y / n, self.D)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def conj(self):
        return FieldElement(self.x, -self.y, self.D)

    def norm(self):
        return self.x * self.x - self.D * self.y * self.y

    def trace(self):
        return 2 * self.x

    def is_zero(self):
        return self.x == 0 and self.y == 0

    def is_integral(self):
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def halves(self):
        """(a, b, den) with self = (a + b sqrt(D)) / (2 den), gcd(a, b, den) = 1."""
        a, b = 2 * self.x, 2 * self.y
        den = lcm(a.denominator, b.denominator)
        a, b = int(a * den), int(b * den)
        g = gcd(gcd(a, b), den)
        return a // g, b // g, den // g

    def to_mpf(self):
        return mpmath.mpf(self.x.numerator) / self.x.denominator + (
            mpmath.mpf(self.y.numerator) / self.y.denominator
        ) * mpmath.sqrt(self.D)

    def __float__(self):
        return float(self.to_mpf())

    def __str__(self):
        a, b, den = self.halves()
        d = 2 * den
        return f"({a}{b:+d}*sqrt({self.D}))/{d}"


def _sign_cmp_sqrt(p, q, D):
    """Sign of p + q sqrt(D) for rationals p, q (exact)."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if (p > 0) == (q > 0):
        return 1 if p > 0 else -1
    # opposite signs: compare p^2 with q^2 D
    d = p * p - q * q * D
    if d == 0:
        return 0
    return (1 if p > 0 else -1) if d > 0 else (1 if q > 0 else -1)


def element_sign(e):
    return _sign_cmp_sqrt(e.x, e.y, e.D)


def factorize(n):
    """Prime factorization of |n| as {p: e} by trial division."""
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def validate_discriminant(D):
    if not isinstance(D, int) or isinstance(D, bool):
        raise InvalidDiscriminant(f"D must be an integer, got {D!r}")
    if D <= 1:
        raise InvalidDiscriminant(f"D = {D}: need D > 1")
    if D % 2 == 0:
        raise InvalidDiscriminant(f"D = {D}: not odd fundamental (D is even)")
    if D % 4 != 1:
        raise InvalidDiscriminant(f"D = {D}: not fundamental (D != 1 mod 4)")
    for p, e in factorize(D).items():
        if e > 1:
            raise InvalidDiscriminant(f"D = {D}: not squarefree ({p}^2 divides D)")


# -- continued fractions and units ----------------------------------------


def cf_period_sqrt(D):
    """Partial quotients of sqrt(D): (a0, [period])."""
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise InvalidArgument(f"{D} is a square")
    m, d, a = 0, 1, a0
    period = []
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        period.append(a)
        if a == 2 * a0:
            return a0, period


def fundamental_unit(D):
    """Smallest unit > 1 of the maximal order, via convergents of (1 + sqrt(D))/2.

    Every unit eps = p - q*conj(w) > 1 comes from a convergent p/q of
    w = (1 + sqrt(D))/2 (Legendre's criterion holds for D > 4), so the first
    convergent with N(p - q w) = +-1 gives the fundamental unit.
    """
    # complete quotients (P + sqrt(D))/Q, starting from w = (1 + sqrt(D))/2
    P, Q = 1, 2
    s = isqrt(D)
    p_prev, p = 1, None
    q_prev, q = 0, None
    for _ in range(10 * D + 100):
        a = (P + s) // Q
        if p is None:
            p, q = a, 1
        else:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        # N(p - q w) = p^2 - p q + q^2 (1 - D)/4
        n = p * p - p * q + q * q * (1 - D) // 4
        if n in (1, -1):
            eps = FieldElement(Fraction(2 * p - q, 2), Fraction(q, 2), D)
            return eps, n
        P = a * Q - P
        Q = (D - P * P) // Q
    raise ArithmeticError(f"no unit found for D = {D}")  # unreachable for D > 4


# -- binary quadratic forms ------------------------------------------------


def reduced_forms(D):
    """All reduced forms (a, b, c): b^2 - 4ac = D, |sqrt(D) - 2|a|| < b < sqrt(D)."""
    out = []
    for b in range(1, isqrt(D) + 1):
        if b * b >= D or (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for a_abs in range(1, -ac + 1):
            if ac % a_abs:
                continue
            two_a = 2 * a_abs
            # sqrt(D) - b < 2|a| < sqrt(D) + b
            if (two_a + b) ** 2 <= D:
                continue
            if two_a - b >= 0 and (two_a - b) ** 2 >= D:
                continue
            for a in (a_abs, -a_abs):
                c = ac // a
                if gcd(gcd(a, b), c) == 1:
                    out.append((a, b, c))
    return sorted(out)


def rho(form, D):
    """The reduction operator on reduced indefinite forms."""
    a, b, c = form
    s = isqrt(D)
    m = 2 * abs(c)
    # b' = -b mod 2|c| with sqrt(D) - 2|c| < b' < sqrt(D): take the largest such
    bp = s - ((s + b) % m)
    ap = (bp * bp - D) // (4 * c)
    return (c, bp, ap)


def form_cycles(D):
    forms = reduced_forms(D)
    seen = set()
    cycles = []
    for f in forms:
        if f in seen:
            continue
        cyc = []
        g = f
        while g not in seen:
            seen.add(g)
            cyc.append(g)
            g = rho(g, D)
        cycles.append(cyc)
    return cycles


# -- fractional ideals -----------------------------------------------------


def _hnf_rows(vectors):
    """Row-style Hermite normal form [[h11, h12], [0, h22]] of a full-rank
    lattice in Z^2 given by generating integer vectors."""
    vecs = [list(v) for v in vectors if v != (0, 0) and list(v) != [0, 0]]
    # eliminate first coordinate by a gcd sweep
    pivot = None
    rest = []
    for v in vecs:
        if pivot is None:
            pivot = v
            continue
        while v[0]:
            qt = pivot[0] // v[0]
            pivot = [pivot[0] - qt * v[0], pivot[1] - qt * v[1]]
            pivot, v = v, pivot
        rest.append(v)
    if pivot is None or pivot[0] == 0:
        raise InvalidArgument("lattice is not of full rank")
    if pivot[0] < 0:
        pivot = [-pivot[0], -pivot[1]]
    h22 = 0
    for v in rest:
        h22 = gcd(h22, v[1])
    if h22 == 0:
        raise InvalidArgument("lattice is not of full rank")
    return [[pivot[0], pivot[1] % h22], [0, h22]]


@dataclass(frozen=True)
class FractionalIdeal:
    """scale * (a Z + (b + sqrt(D))/2 Z)."""

    D: int
    scale: Fraction
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0 or self.a <= 0:
            raise InvalidArgument("ideal needs positive scale and a")
        if (self.b * self.b - self.D) % (4 * self.a):
            raise InvalidArgument(f"b^2 != D mod 4a for (a, b) = ({self.a}, {self.b})")
        b = self.b % (2 * self.a)
        object.__setattr__(self, "b", b)

    @classmethod
    def unit(cls, D):
        return cls(D, Fraction(1), 1, 1)

    @classmethod
    def parse(cls, text, D):
        """'q:a:b' with q rational (e.g. 1/2), a, b integers."""
        try:
            q, a, b = text.split(":")
            return cls(D, Fraction(q), int(a), int(b))
        except ValueError as exc:
            raise InvalidArgument(f"cannot parse ideal {text!r}: {exc}") from None

    def __str__(self):
        return f"{self.scale}:{self.a}:{self.b}"

    def norm(self):
        return self.scale * self.scale * self.a

    def basis(self):
        s = self.scale
        return (
            FieldElement(s * self.a, 0, self.D),
            FieldElement(s * Fraction(self.b, 2), s * Fraction(1, 2), self.D),
        )

    @classmethod
    def from_generators(cls, elements):
        """The O_K-module generated over Z by the given elements (must be an ideal)."""
        elements = list(elements)
        D = elements[0].D
        # coordinates in (1, w), w = (1 + sqrt(D))/2:  x + y sqrt(D) = (x - y) + 2y w
        coords = [(e.x - e.y, 2 * e.y) for e in elements]
        den = lcm(*(c.denominator for pair in coords for c in pair))
        ivecs = [(int(u * den), int(v * den)) for u, v in coords]
        # HNF with lattice = Z (A, 0) + Z (B, C): swap coordinates so the w-part leads
        h = _hnf_rows([(v, u) for u, v in ivecs])
        C, B = h[0]
        A = h[1][1]
        if A % C or B % C:
            raise InvalidArgument("generators do not span an O_K-ideal")
        a = A // C
        b = 2 * (B // C) + 1
        return cls(D, Fraction(C, den), a, b)

    def times(self, lam):
        """The ideal lam * self for a nonzero field element lam."""
        if lam.is_zero():
            raise InvalidArgument("cannot scale an ideal by zero")
        w = FieldElement(Fraction(1, 2), Fraction(1, 2), self.D)
        gens = [lam * e for e in self.basis()]
        gens += [lam * e * w for e in self.basis()]
        return FractionalIdeal.from_generators(gens)

    def conjugate(self):
        return FractionalIdeal.from_generators([e.conj() for e in self.basis()])

    def contains(self, x):
        i, j = self.coordinates(x)
        return i.denominator == 1 and j.denominator == 1

    def coordinates(self, x):
        """Rational coordinates of x in :meth:`basis`."""
        s = self.scale
        # x = i s a + j s (b + sqrt D)/2
        j = 2 * x.y / s
        i = (x.x - j * s * Fraction(self.b, 2)) / (s * self.a)
        return i, j

    def is_integral(self):
        return all(e.is_integral() for e in self.basis())

    def q(self, x):
        """q(x) = N(x)/N(a)."""
        return x.norm() / self.norm()

    @cached_property
    def lattice(self):
        return IdealLattice(self)


class IdealLattice:
    """The pair a inside its dual a d^{-1} in integer coordinates.

    ``dual_basis`` is a Z-basis (f1, f2) of a d^{-1}.  ``hnf`` has rows
    generating a in those coordinates; coset representatives of
    a d^{-1} / b a are (i, j), 0 <= i < b*h11, 0 <= j < b*h22.  ``form`` is
    the integral binary form F(i, j) = D * q(i f1 + j f2).
    """

    def __init__(self, ideal):
        self.ideal = ideal
        D = ideal.D
        root = FieldElement(0, 1, D)
        alpha = ideal.basis()
        beta = tuple(a / root for a in alpha)
        self.dual_basis = beta
        # alpha_i = sum_j M_ij beta_j ; alpha_i = sqrt(D) beta_i
        rows = []
        for a in alpha:
            i, j = self._dual_coords(a)
            if i.denominator != 1 or j.denominator != 1:
                raise AssertionError("ideal not contained in its dual")
            rows.append((int(i), int(j)))
        h = _hnf_rows(rows)
        self.hnf = h
        if h[0][0] * h[1][1] != D:
            raise AssertionError("discriminant group order differs from D")
        n = ideal.norm()
        f1, f2 = beta
        A = D * f1.norm() / n
        C = D * f2.norm() / n
        B = D * ((f1 + f2).norm() - f1.norm() - f2.norm()) / n
        if any(t.denominator != 1 for t in (A, B, C)):
            raise AssertionError("D*q is not integral on the dual lattice")
        self.form = (int(A), int(B), int(C))

    def _dual_coords(self, x):
        f1, f2 = self.dual_basis
        # solve x = i f1 + j f2
        det = f1.x * f2.y - f1.y * f2.x
        i = (x.x * f2.y - x.y * f2.x) / det
        j = (f1.x * x.y - f1.y * x.x) / det
        return i, j

    def element(self, i, j):
        f1, f2 = self.dual_basis
        return f1 * i + f2 * j

    def F(self, i, j):
        A, B, C = self.form
        return A * i * i + B * i * j + C * j * j

    def ideal_vector(self, i, j):
        """Dual coordinates of i*g1 + j*g2 where (g1, g2) is the HNF basis of a."""
        (h11, h12), (_, h22) = self.hnf
        return i * h11, i * h12 + j * h22


@dataclass(frozen=True)
class QuotientElement:
    x: FieldElement
    modulus: int
    qvalue: Fraction
    coords: tuple = field(default=(0, 0), compare=False)


def enumerate_quotient(ideal, b, restrict_to_ideal=False):
    """Coset representatives of a d^{-1} / b a (D b^2 elements), or of
    a / b a (b^2 elements) when ``restrict_to_ideal``."""
    if b < 1:
        raise InvalidArgument(f"modulus b must be >= 1, got {b}")
    lat = ideal.lattice
    D = ideal.D
    (h11, _), (_, h22) = lat.hnf
    if restrict_to_ideal:
        for i, j in product(range(b), repeat=2):
            u, v = lat.ideal_vector(i, j)
            yield QuotientElement(lat.element(u, v), b, Fraction(lat.F(u, v), D), (u, v))
    else:
        for i, j in product(range(b * h11), range(b * h22)):
            yield QuotientElement(lat.element(i, j), b, Fraction(lat.F(i, j), D), (i, j))


# -- the field -------------------------------------------------------------


@dataclass(frozen=True)
class RealQuadraticField:
    D: int
    eps0: FieldElement
    eps0_norm: int
    h_narrow: int
    h_wide: int
    prime_discs: tuple

    @property
    def primes(self):
        return tuple(abs(p) for p in self.prime_discs)

    @property
    def num_genera(self):
        return 2 ** (len(self.prime_discs) - 1)

    def element(self, x, y=0):
        return FieldElement(x, y, self.D)

    def unit_ideal(self):
        return FractionalIdeal.unit(self.D)

    def log_eps0(self, prec=128):
        with mpmath.workprec(prec + 32):
            return mpmath.log(self.eps0.to_mpf())


def make_field(D):
    validate_discriminant(D)
    eps, n = fundamental_unit(D)
    h_narrow = len(form_cycles(D))
    h_wide = h_narrow if n == -1 else h_narrow // 2
    discs = tuple(p if p % 4 == 1 else -p for p in sorted(factorize(D)))
    return RealQuadraticField(D, eps, n, h_narrow, h_wide, discs)


# -- genera ----------------------------------------------------------------


def coprime_representative(field_, ideal, search=None):
    """An integral ideal a' = lam * a with N(lam) > 0 and gcd(N(a'), D) = 1.

    Searches lattice vectors x in a with q(x) > 0 coprime to D and returns
    conj(x)/N(a) * a, whose norm is q(x).
    """
    D = field_.D
    g1, g2 = ideal.basis()
    bound = search or 4 * D
    for r in range(1, bound + 1):
        for i in range(-r, r + 1):
            for j in (-r, r) if abs(i) != r else range(-r, r + 1):
                x = g1 * i + g2 * j
                qx = ideal.q(x)
                if qx > 0 and gcd(int(qx), D) == 1:
                    lam = x.conj() / ideal.norm()
                    return ideal.times(lam), lam
    raise ArithmeticError(f"no coprime representative found within radius {bound}")


def genus_characters(field_, ideal):
    """[(p*/N(a'))] for p | D ascending, a' the coprime representative."""
    rep, _ = coprime_representative(field_, ideal)
    n = rep.norm()
    assert n.denominator == 1
    return tuple(kronecker(p, int(n)) for p in field_.prime_discs)


def prime_ideal_above(D, ell):
    """A prime ideal of norm ell for ell split or ramified, else None."""
    if kronecker(D, ell) == -1:
        return None
    for b in range(1, 2 * ell, 2):
        if (b * b - D) % (4 * ell) == 0:
            return FractionalIdeal(D, Fraction(1), ell, b)
    return None


def genus_representatives(field_, max_norm=None):
    """One integral ideal of norm coprime to D per genus, ring of integers first."""
    D = field_.D
    target = field_.num_genera
    reps = {genus_characters(field_, field_.unit_ideal()): field_.unit_ideal()}
    limit = max_norm or max(1000, 40 * D)
    ell = 2
    while len(reps) < target and ell <= limit:
        if D % ell and all(ell % p for p in range(2, isqrt(ell) + 1)):
            P = prime_ideal_above(D, ell)
            if P is not None:
                key = genus_characters(field_, P)
                reps.setdefault(key, P)
        ell += 1
    if len(reps) != target:
        raise ArithmeticError(f"found {len(reps)} of {target} genera below norm {limit}")
    return list(reps.values())


def class_representatives(field_):
    """One integral ideal a Z + ((-b + sqrt(D))/2) Z per cycle of reduced forms,
    taken from a form with a > 0."""
    out = []
    for cyc in form_cycles(field_.D):
        a, b, _ = next(f for f in cyc if f[0] > 0)
        out.append(FractionalIdeal(field_.D, Fraction(1), a, -b))
    return out
