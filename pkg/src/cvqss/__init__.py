"""Continuous-variable (k, 2k-1) threshold quantum secret sharing at Gaussian-moment level."""

from .cost import minimize_gamma_analytic, minimize_gamma_oracle, total_squeezing
from .decoder import plan, replicate
from .fidelity import DegradationParams, analytic_fidelity, end_to_end_fidelity
from .gaussian import GaussianState
from .scheme import ThresholdParams, discard_shares, encode, make_scheme, random_encoding, validate

__all__ = [
    "DegradationParams",
    "GaussianState",
    "ThresholdParams",
    "analytic_fidelity",
    "discard_shares",
    "encode",
    "end_to_end_fidelity",
    "make_scheme",
    "minimize_gamma_analytic",
    "minimize_gamma_oracle",
    "plan",
    "random_encoding",
    "replicate",
    "total_squeezing",
    "validate",
]
