"""Explore the geometry that controls the solver's cost.

Every root zeta has an inverse-branch radius rho: the modulus of the first
critical value that blocks analytic continuation of f^{-1} along the ray
to 0.  Their product defines the conditioning aggregate K_f and the
average-cost bound 67 (13.1 + Lambda_f).
"""

import math

from alphastep import critical_profile, from_roots, ray_probe

p = from_roots([0.0, 0.9, -0.9])     # z^3 - 0.81 z
prof = critical_profile(p)

print("critical points (multiplicity) -> critical values")
for (c, m), v in zip(prof.critical_points, prof.critical_values):
    print(f"  {c:.6f}  (m={m})  ->  {v:.6f}")

print("\ninverse-branch radius per root")
for i, zeta in enumerate(prof.roots):
    flag = "  [fallback]" if i in prof.rho_flagged else ""
    print(f"  rho({zeta:.2f}) = {prof.rho[i]:.6f}{flag}")

print(f"\nK_f = {prof.K_f:.4f},  Lambda_f = {prof.Lambda_f:.4f}")
print(f"average-cost bound: 67 (13.1 + Lambda_f) = "
      f"{67 * (13.1 + prof.Lambda_f):.1f} steps")

# which branch values influence the ray from a given start?
for t in (0.0, 0.15, 0.40):
    probe = ray_probe(p, t, C=1.0, profile=prof, nodes=256)
    angles = ", ".join(f"v[{j}] at {th:+.3f} rad"
                       for j, th in probe.theta_per_critical)
    print(f"t = {t:.2f}: beta = {probe.beta}, beta+ = {probe.beta_plus}"
          f"  ({angles})")
print("\nbeta+ counts the influencing values within pi/2 of the ray;")
print("they are the ones that can slow the descent.")
assert prof.multiplicity_sum() == p.degree - 1
print(f"multiplicities sum to d - 1 = {p.degree - 1} as they must")
print(f"check: |v| = 0.54 * 0.9 / sqrt(3) = {0.54 * 0.9 / math.sqrt(3):.6f}")
