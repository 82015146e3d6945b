"""Executable checks: modularity, plus-space vanishing, genus invariance,
the G^b Dirichlet-series identities, the class number formula and the
s-derivative consistency between c(m, s, v) and tilde c(m, v).

Every check returns a :class:`CheckReport`.  ``inconclusive`` is reserved
for cases where truncation or precision budgets prevent a verdict.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import isqrt

import mpmath

from .dirichlet import QuadraticCharacter, class_number_from_L
from .eisenstein import (
    EisensteinParams,
    coefficient_s,
    derivative_coefficient,
    evaluate_series,
    holomorphic_expansion,
)
from .errors import CertificateError, InvalidArgument, PrecisionError
from .field import (
    class_representatives,
    coprime_representative,
    genus_characters,
    genus_representatives,
    make_field,
)
from .repnum import DEFAULT_BUDGET, dirichlet_identity
from .special import GUARD_BITS

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

DEFAULT_DISCS = (5, 13, 65, 105)
DEFAULT_WEIGHTS = (2, 4)


@dataclass
class CheckReport:
    name: str
    params: dict
    status: str
    discrepancy: float
    tolerance: float
    runtime: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        out = asdict(self)
        out["discrepancy"] = _json_float(self.discrepancy)
        out["tolerance"] = _json_float(self.tolerance)
        return out


def _json_float(x):
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    return x


def _verdict(discrepancy, tolerance):
    return PASS if discrepancy <= tolerance else FAIL


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.runtime = time.perf_counter() - t0
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _nstr(x, digits=20):
    return mpmath.nstr(x, digits)


# -- modularity -------------------------------------------------------------


def _check_matrix(gamma, D):
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise InvalidArgument(f"matrix {gamma} does not have determinant 1")
    if c % D:
        raise InvalidArgument(f"lower-left entry {c} is not divisible by D={D}")
    return a, b, c, d


@_timed
def check_modularity(field_, ideal, k, M, tau0, gamma, prec=192, tol=1e-6, expansion=None):
    """E(gamma tau0, 0) against chi_D(d) (c tau0 + d)^k E(tau0, 0), relative to |rhs|."""
    a, b, c, d = _check_matrix(gamma, field_.D)
    params = {
        "D": field_.D,
        "ideal": str(ideal),
        "k": k,
        "M": M,
        "tau0": str(tau0),
        "gamma": [list(r) for r in gamma],
        "precision": prec,
    }
    if expansion is None:
        expansion = holomorphic_expansion(EisensteinParams(field_, ideal, k, prec=prec), M)
    with mpmath.workprec(prec + GUARD_BITS):
        tau = mpmath.mpc(tau0)
        gtau = (a * tau + b) / (c * tau + d)
        factor = QuadraticCharacter(field_.D)(d) * (c * tau + d) ** k
        left = evaluate_series(expansion, gtau, M, prec)
        right = evaluate_series(expansion, tau, M, prec)
        rhs = factor * right.value
        scale = max(abs(rhs), mpmath.mpf(1))
        disc = abs(left.value - rhs) / scale
        tail = (left.tail_bound + abs(factor) * right.tail_bound) / scale
    detail = {
        "im_tau0": _nstr(tau.imag),
        "im_gamma_tau0": _nstr(gtau.imag),
        "tail_bound": _nstr(tail, 6),
    }
    status = INCONCLUSIVE if tail > tol / 4 else _verdict(disc, tol)
    return CheckReport("modularity", params, status, float(disc), tol, detail=detail)


# -- plus space and genus invariance -----------------------------------------


def plus_space_excluded(field_, ideal, m):
    """True if some genus character gives chi_{p*}(N(a') m) = -1."""
    rep, _ = coprime_representative(field_, ideal)
    n = rep.norm() * m
    return any(QuadraticCharacter(ps)(int(n)) == -1 for ps in field_.prime_discs)


@_timed
def check_plus_space(field_, ideal, k, M=50, prec=128):
    """Coefficients vanish exactly at every m <= M failing the genus test."""
    exp = holomorphic_expansion(EisensteinParams(field_, ideal, k, prec=prec), M)
    bad = [m for m in range(1, M + 1) if plus_space_excluded(field_, ideal, m) and exp[m] != 0]
    excluded = sum(plus_space_excluded(field_, ideal, m) for m in range(1, M + 1))
    params = {"D": field_.D, "ideal": str(ideal), "k": k, "M": M}
    detail = {"excluded_indices": excluded, "violations": bad}
    return CheckReport("plus-space", params, _verdict(len(bad), 0), len(bad), 0, detail=detail)


def genus_orbit(field_, ideal):
    """Ideals in the genus of ``ideal``: itself, its conjugate, multiples by
    elements of positive norm and class representatives sharing its
    genus-character vector."""
    chars = genus_characters(field_, ideal)
    t = isqrt(field_.D) + 1
    out = [ideal, ideal.conjugate(), ideal.times(field_.element(3)), ideal.times(field_.element(t, 1))]
    for rep in class_representatives(field_) + genus_representatives(field_):
        if genus_characters(field_, rep) == chars:
            out.append(rep)
            out.append(rep.conjugate())
    seen, uniq = set(), []
    for I in out:
        if I not in seen:
            seen.add(I)
            uniq.append(I)
    return uniq


@_timed
def check_genus_invariance(field_, k, M=30, prec=128):
    """Termwise exact equality of q-expansions across each genus."""
    mismatches = 0
    compared = 0
    for rep in genus_representatives(field_):
        ref = holomorphic_expansion(EisensteinParams(field_, rep, k, prec=prec), M).coefficients
        for other in genus_orbit(field_, rep)[1:]:
            exp = holomorphic_expansion(EisensteinParams(field_, other, k, prec=prec), M).coefficients
            mismatches += sum(ref[m] != exp[m] for m in range(M + 1))
            compared += 1
    params = {"D": field_.D, "k": k, "M": M}
    detail = {"ideals_compared": compared}
    return CheckReport("genus-invariance", params, _verdict(mismatches, 0), mismatches, 0, detail=detail)


# -- Dirichlet series and class number ----------------------------------------


@_timed
def check_dirichlet_identity(field_, ideal, m, s0, B, tol=1e-3, prec=128):
    """Truncated sum_{b <= B} G^b b^{-s0} (enumerated) against the closed form.

    The verdict uses the relative discrepancy; the crude tail bound
    sum_{b > B} D b^{2-s0} is reported alongside.
    """
    if s0 < 4:
        raise InvalidArgument(f"need s0 >= 4, got {s0}")
    if B < 100:
        raise InvalidArgument(f"need B >= 100, got {B}")
    cmp = dirichlet_identity(field_, ideal, m, s0, B, method="enumerate", prec=prec)
    disc = cmp.relative_discrepancy
    params = {"D": field_.D, "ideal": str(ideal), "m": m, "s0": s0, "B": B}
    detail = {
        "lhs": _nstr(cmp.lhs),
        "rhs": _nstr(cmp.rhs),
        "tail_bound": _nstr(cmp.tail_bound, 6),
    }
    return CheckReport("dirichlet", params, _verdict(disc, tol), float(disc), tol, detail=detail)


@_timed
def check_class_number_formula(field_, prec=128, tol=1e-10):
    """sqrt(D) L(1, chi_D)/(2 log eps0) against the form-counted h_wide."""
    with mpmath.workprec(prec + GUARD_BITS):
        analytic = class_number_from_L(field_.D, field_.log_eps0(prec + GUARD_BITS), prec)
        disc = abs(analytic - field_.h_wide)
    rounds = int(mpmath.nint(analytic)) == field_.h_wide
    params = {"D": field_.D, "precision": prec}
    detail = {"analytic": _nstr(analytic, 30), "h_wide": field_.h_wide, "h_narrow": field_.h_narrow}
    status = PASS if rounds and disc <= tol else FAIL
    return CheckReport("class-number", params, status, float(disc), tol, detail=detail)


# -- s-derivative consistency ---------------------------------------------------


@_timed
def check_derivative_consistency(field_, ideal, k, m, v, step=1e-5, prec=256, tol=1e-6):
    """Central difference of c(m, s, v) in s at s = 0 against tilde c(m, v).

    For m != 0 the target is tilde c(m, v) e^{-2 pi m v} (c is the coefficient
    of e(m u), tilde c that of e(m tau)).  For m < 0, c(m, 0, v) = 0 so the
    central difference equals c(m, s, v)/s up to O(step^2); the one-sided
    quotient c(m, step, v)/step is reported as well.  For m = 0 and k = 2 the
    target uses the class-number form of the constant term.
    """
    params = {"D": field_.D, "ideal": str(ideal), "k": k, "m": m, "v": v, "step": step, "precision": prec}
    try:
        P = EisensteinParams(field_, ideal, k, prec=prec)
        with mpmath.workprec(prec + GUARD_BITS):
            h = mpmath.mpf(step)
            vv = mpmath.mpf(v)
            up = coefficient_s(P, m, h, vv)
            fd = (up - coefficient_s(P, m, -h, vv)) / (2 * h)
            exact = derivative_coefficient(P, m).value(vv, prec)
            if m:
                exact *= mpmath.exp(-2 * mpmath.pi * m * vv)
            disc = abs(fd - exact) / abs(exact) if exact else abs(fd)
        detail = {"finite_difference": _nstr(fd), "closed_form": _nstr(exact)}
        if m < 0:
            detail["one_sided"] = _nstr(up / h)
    except PrecisionError as exc:
        return CheckReport("derivative", params, INCONCLUSIVE, float("nan"), tol, detail={"error": str(exc)})
    return CheckReport("derivative", params, _verdict(disc, tol), float(disc), tol, detail=detail)


# -- suite --------------------------------------------------------------------


def modularity_points(D):
    """Two (gamma, tau0) pairs with c tau0 + d = i, so Im tau0 = Im gamma tau0 = 1/D.

    The second matrix has d = (D+1)/2, which exercises the nebentypus."""
    d = (D + 1) // 2
    out = []
    for gamma in ([[1, 0], [D, 1]], [[2, 1], [D, d]]):
        dd = gamma[1][1]
        out.append((gamma, complex(-dd / D, 1 / D)))
    return out


def modularity_terms(D, k):
    # |q| = exp(-2 pi / D); 14 D terms leave a tail far below 1e-6 * |E|
    return 14 * D + 40 * k


DIRICHLET_GRID = ((5, 1, 4, 500), (5, 0, 5, 300), (13, 3, 5, 300), (65, 2, 5, 150), (105, 4, 5, 120))

DERIVATIVE_MS = (-2, -1, 0, 1, 2, 3)
DERIVATIVE_VS = (0.7, 1.3)


def _jobs(selection, discs, weights):
    jobs = []
    for D in discs:
        for name in selection:
            if name == "class-number":
                jobs.append((name, (D,)))
            elif name == "dirichlet":
                for row in DIRICHLET_GRID:
                    if row[0] == D:
                        jobs.append((name, row))
            else:
                for k in weights:
                    if name == "modularity":
                        for i in range(2):
                            jobs.append((name, (D, k, i)))
                    elif name == "plus-space":
                        jobs.append((name, (D, k)))
                    elif name == "genus-invariance":
                        jobs.append((name, (D, k)))
                    elif name == "derivative":
                        for m in DERIVATIVE_MS:
                            for v in DERIVATIVE_VS:
                                jobs.append((name, (D, k, m, v)))
    return jobs


def _run_job(job):
    name, args = job
    D = args[0]
    params = {"D": D, "args": list(args)}
    try:
        F = make_field(D)
        unit = F.unit_ideal()
        if name == "class-number":
            reps = [check_class_number_formula(F)]
        elif name == "dirichlet":
            _, m, s0, B = args
            reps = [check_dirichlet_identity(F, unit, m, s0, B)]
        elif name == "modularity":
            _, k, i = args
            gamma, tau0 = modularity_points(D)[i]
            reps = [check_modularity(F, unit, k, modularity_terms(D, k), tau0, gamma)]
        elif name == "plus-space":
            _, k = args
            reps = [check_plus_space(F, I, k) for I in genus_representatives(F)]
        elif name == "genus-invariance":
            _, k = args
            reps = [check_genus_invariance(F, k)]
        elif name == "derivative":
            _, k, m, v = args
            reps = [check_derivative_consistency(F, genus_representatives(F)[-1], k, m, v)]
        else:
            raise InvalidArgument(f"unknown check {name!r}")
    except CertificateError as exc:
        return [(job, CheckReport(name, params, FAIL, float("inf"), 0, detail={"error": str(exc)}))]
    except PrecisionError as exc:
        return [(job, CheckReport(name, params, INCONCLUSIVE, float("nan"), 0, detail={"error": str(exc)}))]
    return [(job, r) for r in reps]


CHECKS = ("class-number", "dirichlet", "plus-space", "genus-invariance", "derivative", "modularity")


def _sort_key(item):
    (name, args), _ = item
    return (CHECKS.index(name), args)


def run_suite(selection=None, budget=DEFAULT_BUDGET, discs=DEFAULT_DISCS, weights=DEFAULT_WEIGHTS, workers=1):
    """Run the named checks over the parameter grid.

    ``selection`` is None or "all" for every check, otherwise an iterable of
    names from :data:`CHECKS`.  Reports come back in a fixed order whatever
    the worker count.
    """
    if selection is None or selection == "all":
        selection = CHECKS
    elif isinstance(selection, str):
        selection = [selection]
    selection = list(selection)
    unknown = [s for s in selection if s not in CHECKS]
    if unknown:
        raise InvalidArgument(f"unknown check(s) {unknown}; choose from {list(CHECKS)}")
    if budget <= 0:
        raise InvalidArgument("budget must be positive")
    jobs = _jobs(selection, discs, weights)
    if workers > 1 and len(jobs) > 1:
        # mpmath keeps its precision in a process-global context, so fan out
        # over processes rather than threads
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for batch in pool.map(_run_job, jobs) for r in batch]
    else:
        results = [r for job in jobs for r in _run_job(job)]
    return [r for _, r in sorted(results, key=_sort_key)]


def suite_status(reports):
    """Exit status: 0 all pass, 1 any fail, 2 otherwise inconclusive."""
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return 1
    if INCONCLUSIVE in statuses:
        return 2
    return 0


__all__ = [
    "CHECKS",
    "CheckReport",
    "check_class_number_formula",
    "check_derivative_consistency",
    "check_dirichlet_identity",
    "check_genus_invariance",
    "check_modularity",
    "check_plus_space",
    "genus_orbit",
    "modularity_points",
    "plus_space_excluded",
    "run_suite",
    "suite_status",
]
