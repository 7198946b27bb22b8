"""Exact verification toolkit for rational functions P(x)/prod(1 + x'C_s x).

Modules:
    exactmath    rationals, binomials, truncated power series
    quadforms    symmetric rational matrices, positive definiteness, W_delta
    ratfun       class terms, combinations, decompositions, sup-norm bounds
    partialfrac  closed-form partial fraction expansions
    coeffs       coefficients of (z + 1/(z+2))^n and their identities
    semipole     boundary-pole coefficient recovery along rays
    checks       verification sweeps behind ``ratclass verify-all``
    cli          command-line front end
"""
from .exactmath import Q, TruncatedSeries, q_str, to_q
from .quadforms import SymRationalMatrix, in_W_delta, is_positive_definite
from .ratfun import MonicMonomial, RatClassTerm, RatCombo

__version__ = "0.1.0"

__all__ = [
    "Q",
    "TruncatedSeries",
    "q_str",
    "to_q",
    "SymRationalMatrix",
    "in_W_delta",
    "is_positive_definite",
    "MonicMonomial",
    "RatClassTerm",
    "RatCombo",
    "__version__",
]
