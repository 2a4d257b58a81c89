"""Independent special functions used to cross-check K_nu(x, y).

* ``upper_gamma``        Gamma(a, x) for real a (negative included)
* ``small_y_series``     K_nu(x, y) = x^nu sum_j Gamma(-nu-j, x) (-xy)^j / j!
* ``chaudhry_gamma``     Gamma(alpha, x; b) = x^alpha K_-alpha(x, b/x)
* ``exp_integral_case``  K_nu(x, 0) = E_{nu+1}(x) = x^nu Gamma(-nu, x)
* ``bessel_k``           modified Bessel function K_nu(z)

All results are :class:`ScaledReal`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .core import LN_TINY, DomainError, EvalParams, eval_k
from .quadrature import QuadConfig, integrate
from .scaled import ScaledReal, from_ln

CF_TINY = 1e-300
CF_MAX_ITER = 200_000
SERIES_MAX_ITER = 10_000
EPS = 2.220446049250313e-16
Y_SERIES_MAX = 1.0
SERIES_MAX_TERMS = 500


def _ln_upper_gamma_cf(a: float, x: float) -> float:
    """ln Gamma(a, x) from the Legendre continued fraction (modified Lentz).

    Converges for every real a when x > 0; slowly for small x.
    """
    b = x + 1.0 - a
    c = 1.0 / CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, CF_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = b + an / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return math.log(h) - x + a * math.log(x)
    raise ArithmeticError(f"incomplete gamma continued fraction failed for a={a}, x={x}")


def _ln_upper_gamma_series(a: float, x: float) -> float:
    """ln Gamma(a, x) = ln(Gamma(a) (1 - P(a, x))) with P from its power series, a > 0."""
    ap = a
    term = total = 1.0 / a
    for _ in range(SERIES_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    else:
        raise ArithmeticError(f"incomplete gamma series failed for a={a}, x={x}")
    p = math.exp(math.log(total) - x + a * math.log(x) - math.lgamma(a))
    return math.lgamma(a) + math.log1p(-p)


def upper_gamma(a: float, x: float) -> ScaledReal:
    """Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for x > 0 and real a."""
    if not x > 0.0:
        raise DomainError(f"upper_gamma needs x > 0, got {x!r}")
    if a > 0.0 and x < a + 1.0:
        return from_ln(_ln_upper_gamma_series(a, x))
    return from_ln(_ln_upper_gamma_cf(a, x))


@dataclass(frozen=True)
class SeriesResult:
    value: ScaledReal
    terms_used: int
    truncation_est: float
    converged: bool


def small_y_series(p: EvalParams, y_max: float = Y_SERIES_MAX,
                   max_terms: int = SERIES_MAX_TERMS) -> SeriesResult:
    """K_nu(x, y) from the incomplete-gamma expansion in powers of (-xy).

    Terms are formed in log space and summed relative to the first one.
    Stops once the next term falls below ``p.rel_tol`` times the partial
    sum; for an alternating, eventually decreasing series that term bounds
    the truncation error.
    """
    if p.x < p.x_min:
        raise DomainError(f"x={p.x!r} is below x_min={p.x_min!r}")
    if p.y > y_max:
        raise DomainError(f"y={p.y!r} exceeds the validated series range y <= {y_max}")
    x, y, nu = p.x, p.y, p.nu
    ln0 = _ln_gamma_term(-nu, x)
    if y == 0.0:
        return SeriesResult(from_ln(nu * math.log(x) + ln0), 1, 0.0, True)

    ln_xy = math.log(x * y)
    total = 1.0
    truncation = math.inf
    j = 1
    while j < max_terms:
        ln_term = _ln_gamma_term(-nu - j, x) + j * ln_xy - math.lgamma(j + 1.0)
        term = math.exp(ln_term - ln0)
        if term < p.rel_tol * abs(total):
            truncation = term / abs(total)
            break
        total += -term if j % 2 else term
        j += 1
    if not total > 0.0:
        raise ArithmeticError(f"small-y series cancelled to {total!r} for {p}")
    value = from_ln(nu * math.log(x) + ln0 + math.log(total))
    return SeriesResult(value, j, truncation, truncation <= p.rel_tol)


def _ln_gamma_term(a: float, x: float) -> float:
    return upper_gamma(a, x).ln_value


def chaudhry_gamma(alpha: float, x: float, b: float, rel_tol: float = 1e-10) -> ScaledReal:
    """Generalized incomplete gamma int_x^inf t^(alpha-1) exp(-t - b/t) dt."""
    if not b >= 0.0:
        raise DomainError(f"b must be >= 0, got {b!r}")
    if not x > 0.0:
        raise DomainError(f"x must be > 0, got {x!r}")
    r = eval_k(EvalParams(x, b / x, -alpha, rel_tol=rel_tol))
    if not r.converged:
        warnings.warn(f"Gamma({alpha}, {x}; {b}) did not converge "
                      f"(estimated error {r.err_rel_est:.2e})", RuntimeWarning)
    return from_ln(alpha * math.log(x)) * r.value


def exp_integral_case(nu: float, x: float) -> ScaledReal:
    """K_nu(x, 0) = int_1^inf e^(-xt) t^(-nu-1) dt = x^nu Gamma(-nu, x)."""
    return from_ln(nu * math.log(x)) * upper_gamma(-nu, x)


def bessel_k(nu: float, z: float, rel_tol: float = 1e-10,
             quad: QuadConfig | None = None) -> ScaledReal:
    """Modified Bessel function K_nu(z) for real nu and z > 0.

    Uses K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du
                 = (1/2) int_-inf^inf exp(-z cosh u + |nu| u) du,
    the odd part of exp(|nu| u) integrating to zero.  The exponent has a
    single maximum at sinh(u*) = |nu|/z.  The substitution
    u = u* + w ln(s / (1 - s)), w the Gaussian width of the peak, centres it
    at s = 1/2 and leaves double-exponential decay at s = 0 and s = 1.
    """
    if not z > 0.0:
        raise DomainError(f"bessel_k needs z > 0, got {z!r}")
    if abs(nu) > 1e4:
        raise DomainError(f"|nu| must be <= 1e4, got {nu!r}")
    a = abs(nu)
    u_peak = math.asinh(a / z)
    curvature = math.hypot(z, a)  # z cosh(u*)
    # peak width, but wide enough that the left tail exp(a u) is cut off by
    # exp(-z cosh u) before it turns into a slow power of s
    w = 1.0 / math.sqrt(curvature)
    if a > 0.0:
        w = max(w, 8.0 / a)
    w = min(w, 2.0)
    ln_peak = -2.0 * z * math.sinh(0.5 * u_peak) ** 2 + a * u_peak
    ln_half_w = math.log(0.5 * w)

    def exponent(u: float) -> float:
        # -z (cosh u - 1) + a u - ln_peak, without overflowing cosh
        au = abs(u)
        if au > 30.0:
            lz = math.log(z) + au - math.log(2.0)
            if lz > 709.0:
                return -math.inf
            zc = math.exp(lz) - z
        else:
            zc = 2.0 * z * math.sinh(0.5 * au) ** 2
        return -zc + a * u - ln_peak

    def f(s: float) -> float:
        if s <= 0.0 or s >= 1.0:
            return 0.0
        ln_odds = math.log(s) - math.log1p(-s)
        g = exponent(u_peak + w * ln_odds) + ln_half_w - math.log(s) - math.log1p(-s)
        if g < LN_TINY:
            return 0.0
        return math.exp(g)

    cfg = QuadConfig(rel_tol=rel_tol) if quad is None else quad
    q = integrate(f, cfg)
    if not q.value > 0.0:
        raise ArithmeticError(f"K_{nu}({z}): quadrature missed the integrand")
    if not q.converged:
        warnings.warn(f"K_{nu}({z}) did not converge "
                      f"(estimated error {q.err_rel_est:.2e})", RuntimeWarning)
    return from_ln(-z + ln_peak + math.log(q.value))
