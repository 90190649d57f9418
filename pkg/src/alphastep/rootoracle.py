"""Simultaneous-iteration root oracle (Aberth-Ehrlich with Newton polish).

Used for the roots of f' and for preimage solves f(z) = y.  Deliberately
independent of the alpha-step solver it instruments, so validation is not
circular.  Robust at desk scale (degree <= 64).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OracleFailure

_MAX_ABERTH_ITERS = 400
_MAX_POLISH_ITERS = 80


def _polyval(coeffs_asc: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.full_like(x, coeffs_asc[-1])
    for c in coeffs_asc[-2::-1]:
        out = out * x + c
    return out


def all_roots(coeffs_ascending) -> np.ndarray:
    """All roots of the polynomial with the given ascending coefficients.

    Leading coefficient need not be 1; trailing zero coefficients (roots at
    the origin) are handled by deflation.
    """
    c = np.asarray(coeffs_ascending, dtype=complex)
    if len(c) < 2:
        return np.zeros(0, dtype=complex)
    # deflate exact zero roots
    n_zero = 0
    while len(c) > 1 and c[0] == 0:
        c = c[1:]
        n_zero += 1
    d = len(c) - 1
    if d == 0:
        return np.zeros(n_zero, dtype=complex)
    c = c / c[-1]
    if d == 1:
        roots = np.array([-c[0]], dtype=complex)
        return np.concatenate([np.zeros(n_zero, dtype=complex), roots])

    dc = np.arange(1, d + 1) * c[1:]

    # Cauchy-style radius, roots spread on a slightly eccentric circle
    radius = 1.0 + max(abs(x) for x in c[:-1])
    angles = 2.0 * math.pi * (np.arange(d) + 0.35) / d
    x = radius * np.exp(1j * angles) * (1.0 + 0.05j)

    for _ in range(_MAX_ABERTH_ITERS):
        p = _polyval(c, x)
        dp = _polyval(dc, x)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        newton = p / dp
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        repulsion = inv.sum(axis=1)
        denom = 1.0 - newton * repulsion
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        delta = newton / denom
        x = x - delta
        if np.max(np.abs(delta)) < 1e-14 * (1.0 + np.max(np.abs(x))):
            break

    # Newton polish, one root at a time (linear but steady on clusters)
    for k in range(d):
        x[k] = _newton_polish(c, dc, x[k])

    return np.concatenate([np.zeros(n_zero, dtype=complex), x])


def _newton_polish(c: np.ndarray, dc: np.ndarray, z: complex) -> complex:
    for _ in range(_MAX_POLISH_ITERS):
        p = _polyval(c, np.array([z]))[0]
        dp = _polyval(dc, np.array([z]))[0]
        if abs(dp) < 1e-300:
            break
        step = p / dp
        z = z - step
        if abs(step) < 1e-15 * (1.0 + abs(z)):
            break
    return z


def certified_roots(coeffs_ascending, residual_tol: float = 1e-10) -> np.ndarray:
    """all_roots plus a residual certificate |p(root)| < tol * max(1, ||p||)."""
    c = np.asarray(coeffs_ascending, dtype=complex)
    roots = all_roots(c)
    scale = max(1.0, float(np.max(np.abs(c))))
    res = np.abs(_polyval(c, roots))
    if np.any(res > residual_tol * scale):
        raise OracleFailure(
            f"root residual {float(np.max(res)):.3e} above {residual_tol:.1e} * {scale:.3e}")
    return roots


def preimages(coeffs_ascending, y: complex) -> np.ndarray:
    """All solutions of p(z) = y."""
    c = np.asarray(coeffs_ascending, dtype=complex).copy()
    c[0] -= y
    return certified_roots(c, residual_tol=1e-8)
