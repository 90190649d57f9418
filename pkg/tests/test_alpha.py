"""Pointwise invariants, certification, and the shipped constants."""

import numpy as np
import pytest

from alphastep import (
    ALPHA_THRESHOLD,
    Certificate,
    InputError,
    alpha0_constant,
    alpha_gamma,
    certify,
    from_roots,
    gamma_upper_bound,
    induction_margin,
    newton_step,
    verify_quadratic_contraction,
)
from alphastep.alpha import _alpha_gamma_coeffs, psi
from alphastep.errors import CriticalPointInput

P2 = from_roots([0.5, -0.5])        # z^2 - 1/4


def test_alpha_gamma_hand_value():
    # at z = 1.5: f = 2, f' = 3, f''/2 = 1  ->  beta = 2/3, gamma = 1/3
    data = alpha_gamma(P2, 1.5)
    assert data.beta_newton == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert data.gamma == pytest.approx(1.0 / 3.0, rel=1e-14)
    assert data.alpha == pytest.approx(2.0 / 9.0, rel=1e-14)
    assert data.argmax_j == 2


def test_alpha_is_scale_invariant():
    # alpha and gamma are ratios of derivatives, so scaling f is a no-op
    base = _alpha_gamma_coeffs([-0.25, 0.0, 1.0], 1.5 + 0.3j)
    scaled = _alpha_gamma_coeffs([-0.25 * 7, 0.0, 7.0], 1.5 + 0.3j)
    assert scaled.alpha == pytest.approx(base.alpha, rel=1e-13)
    assert scaled.gamma == pytest.approx(base.gamma, rel=1e-13)


def test_alpha_at_critical_point_raises():
    with pytest.raises(CriticalPointInput):
        alpha_gamma(P2, 0.0)        # f'(0) = 0


def test_certify_threshold_behavior():
    assert certify(P2, 1.5) is None            # alpha = 2/9 > 0.1307
    cert = certify(P2, 0.6)
    assert cert is not None
    assert cert.alpha_value <= ALPHA_THRESHOLD
    with pytest.raises(InputError):
        Certificate(point=0.6, alpha_value=0.5)


def test_newton_step_value():
    assert newton_step(P2, 1.0) == pytest.approx(0.625, rel=1e-15)


def test_quadratic_contraction_at_certified_point():
    ok, ratios = verify_quadratic_contraction(P2, 0.6, steps=6)
    assert ok
    assert all(r <= 1.0 for r in ratios)
    with pytest.raises(InputError):
        verify_quadratic_contraction(P2, 0.6, steps=1)


def test_contraction_fails_far_from_a_root():
    # between the basins the first increments do not halve quadratically
    p = from_roots([0.9, -0.9, 0.9j, -0.9j])
    ok, _ = verify_quadratic_contraction(p, 0.02 + 0.01j, steps=5)
    assert not ok


def test_gamma_upper_bound_dominates_gamma():
    assert gamma_upper_bound(P2, 1.5) == pytest.approx(1.1228070175438596,
                                                       rel=1e-12)
    rng = np.random.default_rng(3)
    p = from_roots(rng.uniform(-0.7, 0.7, 5) + 1j * rng.uniform(-0.7, 0.7, 5))
    for _ in range(25):
        z = complex(*rng.uniform(-2, 2, 2))
        try:
            data = alpha_gamma(p, z)
        except CriticalPointInput:
            continue
        assert gamma_upper_bound(p, z) >= data.gamma * (1 - 1e-12)


def test_alpha0_constant():
    a0 = alpha0_constant()
    assert a0 == pytest.approx(0.13071694, abs=1e-7)
    # the working threshold sits just under the true constant
    assert ALPHA_THRESHOLD < a0
    r = a0
    assert (2 * r * r - 4 * r + 1) ** 2 - 2 * r == pytest.approx(0.0, abs=1e-12)


def test_psi_and_induction_margin():
    assert psi(0.0) == 1.0
    u = 1.0 / 15.0 + 0.0158
    assert psi(u) == pytest.approx(1 - 4 * u + 2 * u * u, rel=1e-15)
    margin = induction_margin()
    assert margin == pytest.approx(0.9207, abs=5e-4)
    assert margin < 1.0
    # a larger jump coefficient would not close the induction
    assert induction_margin(A=0.09, c=0.0158) > 1.0
