"""Leaky aquifer function K_nu(x, y) to full relative accuracy.

>>> from leaky_aquifer import leaky
>>> str(leaky(4.95, 5.0, 2.0).value)
'0.1224998798e-4'
"""

from .core import (
    AquiferResult,
    DomainError,
    EvalParams,
    Regime,
    RegimeKind,
    eval_k,
    eval_small_x,
    leaky,
    psi,
    regime_of,
    saddle_t0,
    transformed_integrand,
)
from .quadrature import QuadConfig, QuadResult, integrate, shifted, trapezoid
from .reference import (
    bessel_k,
    chaudhry_gamma,
    exp_integral_case,
    small_y_series,
    upper_gamma,
)
from .scaled import ZERO, ScaledReal, from_ln, mul, rel_diff

__all__ = [
    "AquiferResult", "DomainError", "EvalParams", "QuadConfig", "QuadResult",
    "Regime", "RegimeKind", "ScaledReal", "ZERO", "bessel_k", "chaudhry_gamma",
    "eval_k", "eval_small_x", "exp_integral_case", "from_ln", "integrate", "leaky",
    "mul", "psi", "regime_of", "rel_diff", "saddle_t0", "shifted", "small_y_series",
    "transformed_integrand", "trapezoid", "upper_gamma",
]

__version__ = "0.1.0"
