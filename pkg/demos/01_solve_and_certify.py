"""Walk through one solver run, step by step.

The solver starts on a circle just outside the unit disk, follows the ray
of f(z0) toward 0 through a chain of guide points, and stops the moment
the alpha invariant certifies quadratic Newton convergence.
"""

from alphastep import RunConfig, choose_start, run, run_adaptive, from_roots

p = from_roots([0.5, -0.5])          # z^2 - 1/4
z0 = choose_start(p.degree, t=0.0)   # 1.5 on the positive real axis

trace = run(p, z0)
print(f"start z0 = {z0},  f(z0) = {p(z0)}")
print(f"{'n':>3} {'z_n':>24} {'|w_n|':>10} {'alpha_n':>10}")
for s in trace.steps:
    print(f"{s.n:>3} {s.z.real:>11.6f}{s.z.imag:>+11.6f}j "
          f"{abs(s.w):>10.6f} {s.alpha:>10.6f}")

cert = trace.certificate
print(f"\noutcome: {trace.outcome} after {trace.n_steps} steps")
print(f"certified point {cert.point:.12f} with alpha = {cert.alpha_value:.6f}"
      f" <= {cert.threshold}")

# the adaptive variant replaces the fixed 1/15 jump by trial steps that are
# halved until the lifted point tracks the new guide point
adaptive = run_adaptive(p, z0, RunConfig(mode="adaptive"))
print(f"\nadaptive mode: {adaptive.n_steps} steps, "
      f"{adaptive.f_evals} evaluations, outcome {adaptive.outcome}")
