"""Monic complex polynomials with a dual roots/coefficients representation.

Coefficients are stored in increasing-degree order and the leading
coefficient is exactly 1.  All derivative evaluation goes through repeated
synthetic division (Taylor shift), which yields every Taylor coefficient of
f at a point in one pass.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateRoots,
    EmptyInput,
    InputError,
    NonFiniteInput,
    NonMonicInput,
)

# Roots closer than this are rejected at construction: the conditioning
# aggregate K_f is infinite for a multiple root, so such input is ill-posed.
DUPLICATE_TOL = 1e-12


def _check_finite(z: complex, what: str = "value") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteInput(f"non-finite {what}: {z!r}")
    return z


@dataclass(frozen=True)
class Polynomial:
    """A monic degree-d polynomial, optionally remembering its roots.

    coeffs: length d+1, ascending degree, coeffs[-1] == 1.
    roots:  the construction-time roots when built via from_roots, else None.
    """

    coeffs: tuple
    roots: tuple | None = None

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise EmptyInput("polynomial needs degree >= 1")
        if self.coeffs[-1] != 1:
            raise NonMonicInput(f"leading coefficient {self.coeffs[-1]!r} != 1")
        for c in self.coeffs:
            _check_finite(c, "coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def coeffs_desc(self) -> list:
        """Descending-order coefficient list, the Horner workhorse layout."""
        return list(self.coeffs[::-1])

    def in_P_d_1(self) -> bool:
        """Membership in the class of monic polynomials with distinct roots
        inside the open unit disk."""
        if self.roots is None:
            return False
        return all(abs(z) < 1 for z in self.roots)

    def __call__(self, z: complex) -> complex:
        return horner(self.coeffs_desc(), z)

    def eval_many(self, z: np.ndarray) -> np.ndarray:
        """Vectorized Horner evaluation at an array of points."""
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            out = out * z + c
        return out


@dataclass(frozen=True)
class DerivativeStack:
    """f(z), f'(z), ..., f^(k)(z) as true derivatives (j! included)."""

    values: tuple
    at: complex

    @property
    def order(self) -> int:
        return len(self.values) - 1


def horner(coeffs_desc, z: complex) -> complex:
    r = coeffs_desc[0]
    for c in coeffs_desc[1:]:
        r = r * z + c
    return r


def taylor_coeffs(coeffs_desc, z: complex, k: int) -> list:
    """First k+1 Taylor coefficients of the polynomial at z, by k+1 rounds
    of synthetic division by (x - z)."""
    work = list(coeffs_desc)
    out = []
    for _ in range(k + 1):
        r = work[0]
        quotient = [r]
        for c in work[1:]:
            r = r * z + c
            quotient.append(r)
        out.append(quotient.pop())
        work = quotient
        if not work:
            break
    while len(out) < k + 1:
        out.append(0j)
    return out


def from_roots(roots) -> Polynomial:
    """Expand prod (z - zeta_j) into a monic Polynomial, retaining the roots."""
    roots = [_check_finite(z, "root") for z in roots]
    if not roots:
        raise EmptyInput("empty root list")
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= DUPLICATE_TOL:
                raise DuplicateRoots(
                    f"roots {roots[i]!r} and {roots[j]!r} closer than {DUPLICATE_TOL}"
                )
    coeffs = np.polynomial.polynomial.polyfromroots(np.asarray(roots, dtype=complex))
    coeffs[-1] = 1.0  # exact monic; polyfromroots is monic up to roundoff
    return Polynomial(coeffs=tuple(complex(c) for c in coeffs), roots=tuple(roots))


def from_coeffs(coeffs, roots=None) -> Polynomial:
    return Polynomial(
        coeffs=tuple(_check_finite(c, "coefficient") for c in coeffs),
        roots=None if roots is None else tuple(complex(z) for z in roots),
    )


def eval_all_derivs(p: Polynomial, z: complex, k: int) -> DerivativeStack:
    """All derivatives up to order k at z via synthetic division."""
    if not 0 <= k <= p.degree:
        raise InputError(f"derivative order {k} outside 0..{p.degree}")
    z = _check_finite(z, "evaluation point")
    taylor = taylor_coeffs(p.coeffs_desc(), z, k)
    values = []
    fact = 1.0
    for j, t in enumerate(taylor):
        if j > 0:
            fact *= j
        values.append(t * fact)
    return DerivativeStack(values=tuple(values), at=z)


def sup_coeff_norm(p: Polynomial) -> float:
    """max |a_i| over the coefficients (the norm in the derivative-free
    gamma bound)."""
    return max(abs(c) for c in p.coeffs)


# ---------------------------------------------------------------------------
# JSON wire format: {"degree": d, "roots": [[re,im],...]} or
#                   {"degree": d, "coeffs": [[re,im],...]} (ascending, monic)
# ---------------------------------------------------------------------------

def _pairs_to_complex(pairs, what):
    out = []
    for item in pairs:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise InputError(f"{what} entries must be [re, im] pairs")
        out.append(_check_finite(complex(float(item[0]), float(item[1])), what))
    return out


def parse_polynomial(obj) -> Polynomial:
    """Parse the JSON polynomial schema (dict, JSON text, or file content)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise InputError("polynomial JSON must be an object")
    try:
        degree = int(obj["degree"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("missing or bad 'degree'") from e
    if degree < 1:
        raise InputError("degree must be >= 1")
    if "roots" in obj:
        roots = _pairs_to_complex(obj["roots"], "root")
        if len(roots) != degree:
            raise InputError(f"expected {degree} roots, got {len(roots)}")
        return from_roots(roots)
    if "coeffs" in obj:
        coeffs = _pairs_to_complex(obj["coeffs"], "coefficient")
        if len(coeffs) != degree + 1:
            raise InputError(f"expected {degree + 1} coeffs, got {len(coeffs)}")
        if coeffs[-1] != 1:
            raise NonMonicInput("coeffs must be monic (leading coefficient 1)")
        return from_coeffs(coeffs)
    raise InputError("polynomial JSON needs 'roots' or 'coeffs'")


def polynomial_to_json(p: Polynomial) -> dict:
    if p.roots is not None:
        return {"degree": p.degree, "roots": [[z.real, z.imag] for z in p.roots]}
    return {"degree": p.degree, "coeffs": [[c.real, c.imag] for c in p.coeffs]}
