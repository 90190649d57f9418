"""Pointwise certification invariants, the approximate-zero certificate, and
quadratic-contraction verification.

alpha(z) = |f/f'| * gamma(z),   gamma(z) = max_{j>1} |f^(j)/(j! f')|^{1/(j-1)}.

A point with alpha(z) <= 0.1307 is an approximate zero: Newton iterates
contract quadratically from the first step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import CriticalPointInput, InputError
from .polynomial import Polynomial, taylor_coeffs

# Working certification threshold, as used by the algorithm's stopping rule.
# The true constant alpha_0 (root of (2r^2-4r+1)^2 - 2r = 0) is slightly
# larger; see alpha0_constant().
ALPHA_THRESHOLD = 0.1307

# Terms with |f^(j)| below this contribute 0 to the max (underflow guard).
_UNDERFLOW = 1e-300

# Jump coefficient and induction constant of the step-size analysis.
JUMP_COEFF = 1.0 / 15.0
INDUCTION_C = 0.0158


@dataclass(frozen=True)
class AlphaData:
    alpha: float
    gamma: float
    beta_newton: float  # |f/f'|, the Newton step length
    argmax_j: int       # j achieving the max in gamma (0 for d=1)


@dataclass(frozen=True)
class Certificate:
    point: complex
    alpha_value: float
    threshold: float = ALPHA_THRESHOLD
    trace_id: str | None = None

    def __post_init__(self):
        if self.alpha_value > self.threshold:
            raise InputError("certificate with alpha above threshold")


def _alpha_gamma_taylor(taylor) -> AlphaData:
    """alpha/gamma from the Taylor coefficients t_j = f^(j)(z)/j! at z.

    Works for non-monic coefficient input too (both invariants are ratios
    of derivatives, hence scale-invariant); this is the internal path used
    by the scaling-law tests.
    """
    t1 = taylor[1]
    if abs(t1) < _UNDERFLOW:
        raise CriticalPointInput("f'(z) vanishes (below underflow guard)")
    beta = abs(taylor[0]) / abs(t1)
    log_t1 = math.log(abs(t1))
    gamma = 0.0
    argmax_j = 0
    for j in range(2, len(taylor)):
        tj = abs(taylor[j])
        if tj < _UNDERFLOW:
            continue
        term = math.exp((math.log(tj) - log_t1) / (j - 1))
        if term > gamma:
            gamma = term
            argmax_j = j
    return AlphaData(alpha=beta * gamma, gamma=gamma, beta_newton=beta,
                     argmax_j=argmax_j)


def alpha_gamma(p: Polynomial, z: complex) -> AlphaData:
    """Evaluate alpha(z) and gamma(z); empty-max convention gives 0 for d=1."""
    taylor = taylor_coeffs(p.coeffs_desc(), z, p.degree)
    return _alpha_gamma_taylor(taylor)


def _alpha_gamma_coeffs(coeffs_ascending, z: complex) -> AlphaData:
    """Non-monic internal path (scaling-law tests only)."""
    desc = list(coeffs_ascending[::-1])
    return _alpha_gamma_taylor(taylor_coeffs(desc, z, len(desc) - 1))


def phi_geom(d: int, x: float) -> float:
    """phi_d(x) = 1 + x + ... + x^d."""
    return sum(x ** i for i in range(d + 1))


def phi_geom_deriv(d: int, x: float) -> float:
    return sum(i * x ** (i - 1) for i in range(1, d + 1))


def gamma_upper_bound(p: Polynomial, z: complex) -> float:
    """Derivative-free upper bound on gamma(z):
    ||f|| * phi_d'(|z|)^2 / (|f'(z)| * phi_d(|z|)).
    """
    from .polynomial import sup_coeff_norm

    taylor = taylor_coeffs(p.coeffs_desc(), z, 1)
    fp = abs(taylor[1])
    if fp < _UNDERFLOW:
        raise CriticalPointInput("f'(z) vanishes (below underflow guard)")
    d = p.degree
    x = abs(z)
    return sup_coeff_norm(p) * phi_geom_deriv(d, x) ** 2 / (fp * phi_geom(d, x))


def newton_step(p: Polynomial, z: complex) -> complex:
    taylor = taylor_coeffs(p.coeffs_desc(), z, 1)
    if abs(taylor[1]) < _UNDERFLOW:
        raise CriticalPointInput("f'(z) vanishes (below underflow guard)")
    return z - taylor[0] / taylor[1]


def certify(p: Polynomial, z: complex,
            threshold: float = ALPHA_THRESHOLD) -> Certificate | None:
    """Certificate iff alpha(z) <= threshold, else None."""
    data = alpha_gamma(p, z)
    if data.alpha <= threshold:
        return Certificate(point=complex(z), alpha_value=data.alpha,
                           threshold=threshold)
    return None


# Once Newton increments are at roundoff scale the contraction inequality is
# about exact arithmetic; treat it as satisfied below this floor.
_CONTRACTION_FLOOR = 1e-9


def verify_quadratic_contraction(p: Polynomial, z0: complex, steps: int):
    """Check |z_{n+1}-z_n| <= (1/2)^(2^n - 1) |z_1-z_0| for 1 <= n < steps.

    Returns (ok, ratios) where ratios[n-1] is the slack ratio of the n-th
    inequality (0 when the increment is under the roundoff floor).
    """
    if steps < 2:
        raise InputError("steps must be >= 2")
    z = complex(z0)
    increments = []
    for _ in range(steps):
        z_next = newton_step(p, z)
        increments.append(abs(z_next - z))
        z = z_next
    s0 = increments[0]
    ok = True
    ratios = []
    for n in range(1, steps):
        bound = 0.5 ** (2 ** n - 1) * s0
        if increments[n] <= _CONTRACTION_FLOOR:
            ratios.append(0.0)
            continue
        ratio = increments[n] / bound if bound > 0 else math.inf
        ratios.append(ratio)
        if increments[n] > bound:
            ok = False
    return ok, ratios


def _smale_residual(r: float) -> float:
    return (2 * r * r - 4 * r + 1) ** 2 - 2 * r


@lru_cache(maxsize=1)
def alpha0_constant() -> float:
    """The certification constant alpha_0 = 0.13071694..., computed by
    bisection of (2r^2-4r+1)^2 - 2r on [0.13, 0.14] to 1e-14."""
    lo, hi = 0.13, 0.14
    flo = _smale_residual(lo)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        fmid = _smale_residual(mid)
        if (flo > 0) == (fmid > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def psi(u: float) -> float:
    """psi(u) = 1 - 4u + 2u^2, the contraction factor of the gamma-theory
    step-size analysis."""
    return 1.0 - 4.0 * u + 2.0 * u * u


def induction_margin(A: float = JUMP_COEFF, c: float = INDUCTION_C) -> float:
    """(A+c)^2 / psi(A+c)^2 / c; the step-size induction closes iff < 1."""
    u = A + c
    return u * u / (psi(u) ** 2) / c


# Startup self-test: the shipped (A, c) pair must close the induction.
assert induction_margin() < 1.0, "induction margin >= 1 for default constants"
