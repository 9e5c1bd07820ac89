"""Continued-fraction approximation of the Wallis ratio: derivation, evaluation, certification."""

from .approx import ApproxKind, approx_eval, bound_pair
from .corrector import CFCoefficients, derive, rate_of
from .numerics import BallValue, DomainError, EvalContext, wallis_exact
from .verify import certify, rate_probe, relative_error, reproduce_published_table, sign_probe_FG

__all__ = [
    "ApproxKind", "BallValue", "CFCoefficients", "DomainError", "EvalContext",
    "approx_eval", "bound_pair", "certify", "derive", "rate_of", "rate_probe",
    "relative_error", "reproduce_published_table", "sign_probe_FG", "wallis_exact",
]

__version__ = "0.1.0"
