"""Critical-point geometry: profiles, inverse-branch radii, and probes."""

import math

import numpy as np
import pytest

from alphastep import (
    InputError,
    arg_speed,
    critical_profile,
    ensure_roots,
    from_coeffs,
    from_roots,
    ray_probe,
    rho_of_root,
    s_r_constant,
    voronoi_multiplicity_probe,
)
from alphastep.geometry import theta_grid

P2 = from_roots([0.5, -0.5])
P3 = from_roots([0.0, 0.9, -0.9])


def test_profile_of_z2_quarter():
    prof = critical_profile(P2)
    assert prof.critical_points == ((0.0, 1),)
    assert prof.critical_values[0] == pytest.approx(-0.25, rel=1e-12)
    # both inverse branches are blocked by the single branch value
    assert prof.rho[0] == pytest.approx(0.25, rel=1e-9)
    assert prof.rho[1] == pytest.approx(0.25, rel=1e-9)
    assert prof.K_f == pytest.approx(16.0, rel=1e-8)
    assert prof.Lambda_f == pytest.approx(math.log(16.0), rel=1e-8)
    assert not prof.rho_flagged


def test_profile_of_z3_ring():
    prof = critical_profile(P3)
    c = 0.9 / math.sqrt(3.0)
    assert len(prof.critical_points) == 2
    pts = sorted(cc.real for cc, _m in prof.critical_points)
    assert pts[0] == pytest.approx(-c, abs=1e-10)
    assert pts[1] == pytest.approx(c, abs=1e-10)
    v = 0.54 * c                      # |c^3 - 0.81 c|
    for i in range(3):
        assert prof.rho[i] == pytest.approx(v, rel=1e-8)
    assert prof.K_f == pytest.approx(v ** -3, rel=1e-7)


def test_profile_resolves_a_sevenfold_critical_point():
    # roots on a circle: f = z^8 - 0.9^8, with f' vanishing to order 7 at 0
    p = from_roots([0.9 * np.exp(2j * np.pi * k / 8) for k in range(8)])
    prof = critical_profile(p)
    assert len(prof.critical_points) == 1
    c, m = prof.critical_points[0]
    assert m == 7
    assert abs(c) < 1e-7
    assert prof.multiplicity_sum() == 7


def test_multiplicity_sum_is_degree_minus_one():
    rng = np.random.default_rng(11)
    for d in (3, 5, 8):
        roots = []
        while len(roots) < d:
            z = complex(*rng.uniform(-0.7, 0.7, 2))
            if all(abs(z - w) > 0.1 for w in roots):
                roots.append(z)
        prof = critical_profile(from_roots(roots))
        assert prof.multiplicity_sum() == d - 1


def test_degree_one_profile_is_empty():
    prof = critical_profile(from_roots([0.3]))
    assert prof.critical_points == ()
    assert prof.K_f == 1.0 and prof.Lambda_f == 0.0


def test_ensure_roots_recovers_roots_from_coefficients():
    p = from_coeffs([-0.25, 0.0, 1.0])
    q = ensure_roots(p)
    assert sorted(z.real for z in q.roots) == pytest.approx([-0.5, 0.5],
                                                            abs=1e-10)


def test_rho_of_root_validation():
    assert rho_of_root(P2, 0.5) == pytest.approx(0.25, rel=1e-9)
    with pytest.raises(InputError):
        rho_of_root(P2, 0.4)            # not a root
    with pytest.raises(InputError):
        rho_of_root(from_roots([0.3]), 0.3)


def test_s_r_constant():
    s1 = s_r_constant(1.0)
    assert 1.0 / 28.0 < s1 < 0.0370
    assert s_r_constant(2.0 * math.pi) == pytest.approx(3.0 - math.sqrt(8.0),
                                                        abs=1e-10)
    assert s_r_constant(7.0) == 0.25
    # the closed form solves C(1-s)^2 = 8 pi s
    assert 1.0 * (1 - s1) ** 2 == pytest.approx(8 * math.pi * s1, rel=1e-12)
    with pytest.raises(InputError):
        s_r_constant(0.0)


def test_arg_speed_bracket_pointwise():
    d, r = 3, 1.5
    lo = 2 * math.pi * d * r / (r + 1)
    hi = 2 * math.pi * d * r / (r - 1)
    for t in np.linspace(0, 1, 37, endpoint=False):
        v = arg_speed(P3, r, float(t))
        assert lo - 1e-9 <= v <= hi + 1e-9
    with pytest.raises(InputError):
        arg_speed(P3, 1.0, 0.1)


def test_theta_grid_shape_and_values():
    prof = critical_profile(P2)
    ts = np.array([0.0, 0.25])
    th = theta_grid(P2, prof, 1.5, ts)
    assert th.shape == (2, 1)
    # at t=0, f(1.5)=2 and v=-1/4 are anti-aligned
    assert abs(th[0, 0]) == pytest.approx(math.pi, abs=1e-12)


def test_ray_probe_on_the_real_start():
    prof = critical_profile(P2)
    probe = ray_probe(P2, 0.0, 1.0, prof, nodes=256)
    assert probe.influenced == (0,)
    assert probe.beta == 1
    assert probe.beta_plus == 0         # the branch value sits behind the ray
    assert abs(probe.theta_per_critical[0][1]) == pytest.approx(math.pi,
                                                                abs=1e-9)
    assert not probe.partial


def test_ray_probe_aligned_start_has_positive_beta_plus():
    # near t=1/4 the ray of f(z0) points almost straight at the branch value
    prof = critical_profile(P2)
    probe = ray_probe(P2, 0.2501, 1.0, prof, nodes=256)
    assert probe.beta_plus == 1
    assert abs(probe.theta_per_critical[0][1]) < 0.01


def test_voronoi_probe_counts_and_validation():
    prof = critical_profile(P2)
    counts = voronoi_multiplicity_probe(P2, 0.7 + 0.4j, prof, nodes=256)
    assert set(counts) == {0}
    assert counts[0] <= 2               # multiplicity 1 branch value
    with pytest.raises(InputError):
        voronoi_multiplicity_probe(P2, 0.0, prof)
    with pytest.raises(InputError):
        voronoi_multiplicity_probe(P2, -0.25, prof)


def test_voronoi_probe_separated_sheets():
    # three rays of the same y land at three distinct preimages, and each
    # branch value of multiplicity 1 influences at most two of them
    prof = critical_profile(P3)
    counts = voronoi_multiplicity_probe(P3, 0.5 + 0.3j, prof, nodes=256)
    mult = {j: m for j, (_c, m) in enumerate(prof.critical_points)}
    for j, cnt in counts.items():
        assert cnt <= mult[j] + 1


def test_profile_json_is_serializable():
    import json
    prof = critical_profile(P3)
    blob = json.dumps(prof.to_json())
    back = json.loads(blob)
    assert back["K_f"] == pytest.approx(prof.K_f)
    assert len(back["critical"]) == 2
