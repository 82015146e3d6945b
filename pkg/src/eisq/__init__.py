"""Fourier coefficients of Eisenstein series attached to ideals of real
quadratic fields of odd fundamental discriminant, with the arithmetic they
need and a verification harness."""

__version__ = "0.1.0"

from .dirichlet import (
    L_derivative_at_negative,
    L_exact,
    L_numeric,
    QuadraticCharacter,
    gen_bernoulli,
    kronecker,
    l_value,
)
from .eisenstein import (
    DerivativeCoefficient,
    EisensteinParams,
    QExpansion,
    coefficient_s,
    derivative_coefficient,
    evaluate_series,
    holomorphic_expansion,
)
from .errors import (
    BudgetExceeded,
    CertificateError,
    EisqError,
    InvalidArgument,
    InvalidDiscriminant,
    PrecisionError,
)
from .field import (
    FieldElement,
    FractionalIdeal,
    RealQuadraticField,
    enumerate_quotient,
    genus_characters,
    genus_representatives,
    make_field,
)
from .repnum import SigmaPolynomial, count_G, count_N, sigma_derivative, sigma_polynomial, sigma_value
from .special import (
    digamma_ratio,
    harmonic,
    incomplete_gamma_upper,
    whittaker_W0,
    whittaker_W0_prime,
    whittaker_Ws,
)

__all__ = [
    "BudgetExceeded",
    "CertificateError",
    "DerivativeCoefficient",
    "EisensteinParams",
    "EisqError",
    "FieldElement",
    "FractionalIdeal",
    "InvalidArgument",
    "InvalidDiscriminant",
    "L_derivative_at_negative",
    "L_exact",
    "L_numeric",
    "PrecisionError",
    "QExpansion",
    "QuadraticCharacter",
    "RealQuadraticField",
    "SigmaPolynomial",
    "coefficient_s",
    "count_G",
    "count_N",
    "derivative_coefficient",
    "digamma_ratio",
    "enumerate_quotient",
    "evaluate_series",
    "gen_bernoulli",
    "genus_characters",
    "genus_representatives",
    "harmonic",
    "holomorphic_expansion",
    "incomplete_gamma_upper",
    "kronecker",
    "l_value",
    "make_field",
    "sigma_derivative",
    "sigma_polynomial",
    "sigma_value",
    "whittaker_W0",
    "whittaker_W0_prime",
    "whittaker_Ws",
]
