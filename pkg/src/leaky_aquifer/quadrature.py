"""Compound trapezoidal rule on [0, 1] with step halving.

Meant for analytic integrands whose derivatives of all orders vanish at
both endpoints, where the plain trapezoidal sum converges exponentially.
The error is estimated from the shifted (midpoint) rule S_h, and
``(T_h + S_h) / 2`` is exactly T_{h/2}, so no node is evaluated twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

Integrand = Callable[[float], float]

UNDERFLOW_FLOOR = 1e-300


class IntegrandError(ArithmeticError):
    """The integrand returned a non-finite value at node ``s``."""

    def __init__(self, s: float, value: float):
        super().__init__(f"integrand is not finite at s={s!r}: {value!r}")
        self.s = s
        self.value = value


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    n_start: int = 16
    n_max: int = 2**20

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.n_start < 2 or not _is_pow2(self.n_start):
            raise ValueError(f"n_start must be a power of two >= 2, got {self.n_start}")
        if self.n_max < 2 * self.n_start or not _is_pow2(self.n_max):
            raise ValueError(
                f"n_max must be a power of two >= 2*n_start, got {self.n_max}"
            )


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_rel_est: float
    n_evals: int
    h_final: float
    converged: bool


@dataclass(frozen=True)
class HalvingStep:
    """One halving: ``T_h`` and ``S_h`` at panel count ``n``; T_{h/2} is their mean."""

    n: int
    t_h: float
    s_h: float

    @property
    def t_half(self) -> float:
        return 0.5 * (self.t_h + self.s_h)


def _checked(f: Integrand, s: float) -> float:
    v = f(s)
    if not math.isfinite(v):
        raise IntegrandError(s, v)
    return v


def trapezoid(f: Integrand, n: int) -> float:
    """T_h = h (f(0)/2 + f(h) + ... + f(1-h) + f(1)/2), h = 1/n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    h = 1.0 / n
    total = 0.5 * (_checked(f, 0.0) + _checked(f, 1.0))
    total += math.fsum(_checked(f, k * h) for k in range(1, n))
    return h * total


def shifted(f: Integrand, n: int) -> float:
    """S_h = h (f(h/2) + f(3h/2) + ... + f(1 - h/2)), h = 1/n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    h = 1.0 / n
    return h * math.fsum(_checked(f, (k + 0.5) * h) for k in range(n))


def halving_steps(f: Integrand, cfg: QuadConfig):
    """Yield a :class:`HalvingStep` per halving, starting at ``cfg.n_start``.

    The generator runs until the caller stops it or the accepted panel
    count would pass ``cfg.n_max``.
    """
    n = cfg.n_start
    t_h = trapezoid(f, n)
    while True:
        s_h = shifted(f, n)
        step = HalvingStep(n, t_h, s_h)
        yield step
        n *= 2
        if 2 * n > cfg.n_max:
            return
        t_h = step.t_half


def integrate(f: Integrand, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """Integrate ``f`` over [0, 1], halving h until |T_h - S_h| is small.

    The test is relative to T_{h/2}.  The reported error is half the
    relative gap, since |T_h - S_h| overstates the error of T_{h/2}.
    A sum that is exactly zero is never accepted.
    Reaching ``n_max`` gives ``converged=False`` with the best value so far.
    """
    step = None
    rel = math.inf
    for step in halving_steps(f, cfg):
        rel = abs(step.t_h - step.s_h) / max(abs(step.t_half), UNDERFLOW_FLOOR)
        # an all-zero sum means the nodes missed the integrand, not convergence
        if rel <= cfg.rel_tol and step.t_half != 0.0:
            break
    n_final = 2 * step.n
    return QuadResult(
        value=step.t_half,
        err_rel_est=0.5 * rel,
        n_evals=n_final + 1,
        h_final=1.0 / n_final,
        converged=rel <= cfg.rel_tol and step.t_half != 0.0,
    )


def fourier_coeff(f: Integrand, k: int, n: int, refine: int = 64) -> float:
    """F_k = integral over [0, 1] of f(s) cos(2 pi k n s) ds.

    Brute force: a trapezoidal sum with ``refine * k * n`` panels.  This
    is a diagnostic for the error expansion E_h = -2 (F_1 + F_2 + ...), not
    a production path.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    m = refine * k * n
    w = 2.0 * math.pi * k * n
    return trapezoid(lambda s: f(s) * math.cos(w * s), m)
