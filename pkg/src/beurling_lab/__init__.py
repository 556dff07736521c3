"""Numerical checks of Beurling-function approximations to chi in L2(0, inf)."""

from .arith import MobiusTable, mertens, mobius_floor_sum, sieve_mobius
from .beurling import CoefficientVector, custom, evaluate_combination, make_coefficients, rho
from .distance import DistanceReport, Piece, breakpoints, exact_norm, mellin_transform_check, spectral_norm
from .optimize import GramSystem, best_coefficients, inner_chi_rho, inner_rho_rho
from .special import RatioScan, StripPoint, log_gamma, ratio_scan, zeta, zeta_ratio

__all__ = [
    "MobiusTable",
    "mertens",
    "mobius_floor_sum",
    "sieve_mobius",
    "CoefficientVector",
    "custom",
    "evaluate_combination",
    "make_coefficients",
    "rho",
    "DistanceReport",
    "Piece",
    "breakpoints",
    "exact_norm",
    "mellin_transform_check",
    "spectral_norm",
    "GramSystem",
    "best_coefficients",
    "inner_chi_rho",
    "inner_rho_rho",
    "RatioScan",
    "StripPoint",
    "log_gamma",
    "ratio_scan",
    "zeta",
    "zeta_ratio",
]
