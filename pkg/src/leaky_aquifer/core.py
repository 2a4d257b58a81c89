"""The leaky aquifer function

    K_nu(x, y) = int_1^inf exp(-x t - y/t) t^(-nu-1) dt
               = int_0^1  t^(nu-1) exp(-x/t - y t) dt.

On (0, 1) the exponent is psi(t) = -x/t - y t + nu ln t.  Its maximum on
(0, 1] sits at an interior saddle point when y > x + nu and at t = 1
otherwise.  Factoring out exp(psi(t_m)) leaves an O(1) integral, which
the substitution t = tanh(s / (1 - s)) turns into one with all
derivatives vanishing at s = 0 and s = 1, ready for the trapezoidal rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .quadrature import QuadConfig, integrate, trapezoid
from .scaled import ScaledReal, from_ln, sub

X_MIN = 0.5
NU_MAX = 1e4
LN_TINY = math.log(2.2250738585072014e-308)
LN2 = math.log(2.0)


class DomainError(ValueError):
    """Parameters outside the supported region."""


class RegimeKind(enum.Enum):
    INTERIOR = "interior"
    ENDPOINT = "endpoint"


@dataclass(frozen=True)
class EvalParams:
    x: float
    y: float
    nu: float
    rel_tol: float = 1e-10
    quad: QuadConfig = field(default_factory=QuadConfig)
    x_min: float = X_MIN

    def __post_init__(self):
        for name in ("x", "y", "nu"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if not self.x > 0.0:
            raise DomainError(f"x must be > 0, got {self.x!r}")
        if not self.y >= 0.0:
            raise DomainError(f"y must be ≥ 0, got {self.y!r}")
        if abs(self.nu) > NU_MAX:
            raise DomainError(f"|nu| must be <= {NU_MAX:g}, got {self.nu!r}")
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")

    def quad_config(self) -> QuadConfig:
        return replace(self.quad, rel_tol=self.rel_tol)


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    t_m: float
    psi_tm: float


@dataclass(frozen=True)
class AquiferResult:
    value: ScaledReal
    err_rel_est: float
    n_evals: int
    regime: Regime
    converged: bool


def saddle_t0(x: float, y: float, nu: float) -> float:
    """Positive zero of x t^2 + nu t - y, i.e. (sqrt(nu^2 + 4xy) - nu) / (2x).

    For nu > 0 the cancellation-free form 2y / (sqrt(nu^2 + 4xy) + nu) is
    used; it also tolerates x = 0.  y = 0 with nu >= 0 gives 0.
    """
    d = math.sqrt(nu * nu + 4.0 * x * y)
    if nu > 0.0:
        return 2.0 * y / (d + nu)
    if y == 0.0 and nu == 0.0:
        return 0.0
    return (d - nu) / (2.0 * x)


def _psi_parts(t: float, x: float, y: float, nu: float) -> float:
    return -x / t - y * t + nu * math.log(t)


def psi(t: float, p: EvalParams) -> float:
    if not t > 0.0:
        raise DomainError(f"psi needs t > 0, got {t!r}")
    if t > 1.0:
        raise DomainError(f"psi is used on (0, 1], got t={t!r}")
    try:
        a = p.x / t
    except OverflowError:
        return -math.inf
    if math.isinf(a):
        return -math.inf
    return -a - p.y * t + p.nu * math.log(t)


def regime_of(p: EvalParams) -> Regime:
    if p.y > p.x + p.nu:
        t_m = saddle_t0(p.y, p.x, -p.nu)
        return Regime(RegimeKind.INTERIOR, t_m, _psi_parts(t_m, p.x, p.y, p.nu))
    return Regime(RegimeKind.ENDPOINT, 1.0, -p.x - p.y)


def _log_tanh_parts(u: float) -> tuple[float, float, float]:
    """Return (t, 1 - t, ln t) for t = tanh(u), u > 0, each without cancellation."""
    e = math.exp(-2.0 * u)
    one_minus_t = 2.0 * e / (1.0 + e)
    if u < 0.5:
        t = math.tanh(u)
        return t, one_minus_t, math.log(t)
    t = (1.0 - e) / (1.0 + e)
    return t, one_minus_t, math.log1p(-e) - math.log1p(e)


def _log_cosh(u: float) -> float:
    if u < 20.0:
        return math.log(math.cosh(u))
    return u - LN2 + math.log1p(math.exp(-2.0 * u))


def log_scaled_integrand(t: float, one_minus_t: float, ln_t: float,
                         p: EvalParams, r: Regime) -> float:
    """psi(t) - psi(t_m), arranged so the large terms cancel analytically."""
    if r.kind is RegimeKind.ENDPOINT:
        return -p.x * one_minus_t / t + p.y * one_minus_t + p.nu * ln_t
    tm = r.t_m
    d = tm - t
    return -p.x * d / (t * tm) + p.y * d + p.nu * (ln_t - math.log(tm))


def transformed_integrand(s: float, p: EvalParams, r: Regime) -> float:
    """The scaled integrand after t = tanh(s / (1 - s)).

    exp(g) with g = psi(t) - psi(t_m) - ln t - 2 ln cosh u - 2 ln(1 - s).
    Exactly 0 at both endpoints and wherever exp(g) would be subnormal.
    """
    if s <= 0.0 or s >= 1.0:
        return 0.0
    u = s / (1.0 - s)
    t, one_minus_t, ln_t = _log_tanh_parts(u)
    if t == 0.0 or p.x / t > 1e300:
        return 0.0
    g = (log_scaled_integrand(t, one_minus_t, ln_t, p, r)
         - ln_t - 2.0 * _log_cosh(u) - 2.0 * math.log1p(-s))
    if g < LN_TINY:
        return 0.0
    return math.exp(g)


def _check_direct(p: EvalParams):
    if p.x < p.x_min:
        raise DomainError(
            f"x={p.x!r} is below x_min={p.x_min!r}; use eval_small_x for small x"
        )


def eval_k(p: EvalParams) -> AquiferResult:
    """K_nu(x, y) by the scaled tanh-trapezoidal rule."""
    _check_direct(p)
    r = regime_of(p)
    q = integrate(lambda s: transformed_integrand(s, p, r), p.quad_config())
    if not q.value > 0.0:
        raise ArithmeticError(f"quadrature returned {q.value!r} for {p}")
    return AquiferResult(
        value=from_ln(r.psi_tm + math.log(q.value)),
        err_rel_est=q.err_rel_est,
        n_evals=q.n_evals,
        regime=r,
        converged=q.converged,
    )


def eval_fixed(p: EvalParams, n: int) -> ScaledReal:
    """K_nu(x, y) from a single trapezoidal sum with h = 1/n (no error control)."""
    _check_direct(p)
    r = regime_of(p)
    return from_ln(r.psi_tm + math.log(trapezoid(
        lambda s: transformed_integrand(s, p, r), n)))


MIN_DIGITS = 6.0


def eval_small_x(p: EvalParams) -> AquiferResult:
    """K_nu(x, y) for small x through the reflection

        K_nu(x, y) = 2 (x/y)^(nu/2) K_nu(2 sqrt(xy)) - K_-nu(y, x).

    The subtraction is done in log space; if it leaves fewer than six
    trustworthy digits the result is flagged ``converged=False``.
    """
    from .reference import bessel_k

    if p.y < p.x_min:
        raise DomainError(
            f"x={p.x!r} and y={p.y!r} are both below x_min={p.x_min!r}; "
            "this region is not supported"
        )
    swapped = eval_k(replace(p, x=p.y, y=p.x, nu=-p.nu))
    z = 2.0 * math.sqrt(p.x * p.y)
    bk = bessel_k(p.nu, z, rel_tol=p.rel_tol)
    whole = from_ln(LN2 + 0.5 * p.nu * (math.log(p.x) - math.log(p.y))) * bk
    if swapped.value.ln_value >= whole.ln_value:
        raise ArithmeticError("reflection formula cancelled completely")
    value = sub(whole, swapped.value)
    gain = whole.ln_value - value.ln_value
    base_err = max(swapped.err_rel_est, p.rel_tol, 1e-15)
    err = base_err * math.exp(gain)
    digits = -math.log10(err)
    return AquiferResult(
        value=value,
        err_rel_est=err,
        n_evals=swapped.n_evals,
        regime=regime_of(p),
        converged=swapped.converged and digits >= MIN_DIGITS,
    )


def leaky(x: float, y: float, nu: float = 0.0, rel_tol: float = 1e-10) -> AquiferResult:
    """Evaluate K_nu(x, y), routing small x through the reflection formula."""
    p = EvalParams(x, y, nu, rel_tol=rel_tol)
    if p.x < p.x_min:
        return eval_small_x(p)
    return eval_k(p)
