"""Sweeps over starting angles, quadrature identities, per-trace step-size
audits, and the average-cost bound comparison.

Everything here is deterministic: sweeps sample midpoints t = (k+0.5)/M,
reports are sorted reductions, and CSV/JSON serialization uses fixed float
formatting.  A seeded random mode exists for robustness testing only.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .alpha import ALPHA_THRESHOLD
from .errors import InputError, ProfileMismatch, SingularStart
from .geometry import (
    CriticalProfile,
    RayProbe,
    _influence_walk,
    critical_profile,
    ensure_roots,
    lift_point,
    make_state,
    nearest_visible_value,
    ray_probe,
)
from .pathlift import (
    CERTIFIED,
    RunConfig,
    Trace,
    choose_start,
    run,
    run_adaptive,
)
from .polynomial import Polynomial, from_roots

AVG_COST_COEFF = 67.0
AVG_COST_OFFSET = 13.1

# Step-size audit constants (delta recursion, guide decay, final guide point)
DELTA_COEFF = 0.0158
GUIDE_UPPER = 1.1376
GUIDE_LOWER = 0.41982
U_MAX = 1.0 / 15.0 + 0.0158
JUMP_RATIO_FLOOR = 1.0 / 66.0
FINAL_GUIDE_FLOOR = 1.0 / 87.0
_ABS_TOL = 1e-10


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    t: float
    N: int
    outcome: str
    beta_plus: int | None
    wN_ratio: float


@dataclass
class SweepReport:
    poly_id: str
    d: int
    r: float
    M: int
    costs: list                 # N per Certified start, in t order
    mean_cost: float
    bound: float                # 67 (13.1 + Lambda_f)
    failures: list              # (t, outcome)
    beta_plus_mean: float
    wN_over_rho_min: float
    rows: list = field(default_factory=list)
    traces: list = field(default_factory=list)

    def to_json(self) -> dict:
        def _num(x):
            return x if isinstance(x, int) or math.isfinite(x) else None
        return {
            "poly_id": self.poly_id, "d": self.d, "r": self.r, "M": self.M,
            "costs": list(self.costs), "mean_cost": _num(self.mean_cost),
            "bound": self.bound,
            "failures": [[t, o] for t, o in self.failures],
            "beta_plus_mean": _num(self.beta_plus_mean),
            "wN_over_rho_min": _num(self.wN_over_rho_min),
        }


def _identify_root(p: Polynomial, z: complex, steps: int = 6) -> int:
    """Index of the root a certified point converges to (a few Newton steps,
    then nearest root)."""
    from .alpha import newton_step

    for _ in range(steps):
        z = newton_step(p, z)
    return min(range(len(p.roots)), key=lambda i: abs(z - p.roots[i]))


def sweep_average_cost(p: Polynomial, M: int, cfg: RunConfig | None = None,
                       profile: CriticalProfile | None = None,
                       poly_id: str = "poly", probes: bool = False,
                       keep_traces: bool = False,
                       rng: np.random.Generator | None = None) -> SweepReport:
    """Cost statistics over M starting angles on the circle of radius 1+C/d.

    Midpoint angles t=(k+0.5)/M unless an rng is supplied.  Singular starts
    are retried at t+1e-9; other failures are recorded, never raised.
    """
    if M < 16:
        raise InputError("M must be >= 16")
    cfg = cfg or RunConfig()
    p = ensure_roots(p)
    if profile is None:
        profile = critical_profile(p)
    bound = AVG_COST_COEFF * (AVG_COST_OFFSET + profile.Lambda_f)
    runner = run_adaptive if cfg.mode == "adaptive" else run
    if cfg.max_steps is None and cfg.k_f is None:
        cfg = RunConfig(C=cfg.C, A=cfg.A, threshold=cfg.threshold,
                        mode=cfg.mode, adaptive_h0=cfg.adaptive_h0,
                        adaptive_accept_c=cfg.adaptive_accept_c,
                        k_f=profile.K_f if math.isfinite(profile.K_f) else None)

    rows = []
    failures = []
    costs = []
    traces = []
    beta_vals = []
    ratio_min = math.inf
    for k in range(M):
        t = float(rng.random()) if rng is not None else (k + 0.5) / M
        trace = None
        for _ in range(3):
            try:
                z0 = choose_start(p.degree, t, cfg.C)
                trace = runner(p, z0, cfg)
                break
            except SingularStart:
                t = (t + 1e-9) % 1.0
        if trace is None:
            failures.append((t, "SingularStart"))
            rows.append(SweepRow(t=t, N=-1, outcome="SingularStart",
                                 beta_plus=None, wN_ratio=math.nan))
            continue
        bp = None
        if probes:
            bp = ray_probe(p, t, cfg.C, profile).beta_plus
            beta_vals.append(bp)
        if trace.outcome != CERTIFIED:
            failures.append((t, trace.outcome))
            rows.append(SweepRow(t=t, N=trace.n_steps, outcome=trace.outcome,
                                 beta_plus=bp, wN_ratio=math.nan))
            continue
        if profile.rho:
            ri = _identify_root(p, trace.certificate.point)
            ratio = abs(trace.w_final) / profile.rho[ri]
        else:
            ratio = math.inf
        ratio_min = min(ratio_min, ratio)
        costs.append(trace.n_steps)
        rows.append(SweepRow(t=t, N=trace.n_steps, outcome=trace.outcome,
                             beta_plus=bp, wN_ratio=ratio))
        if keep_traces:
            traces.append(trace)
    rows.sort(key=lambda row: row.t)
    mean_cost = sum(costs) / len(costs) if costs else math.nan
    beta_mean = sum(beta_vals) / len(beta_vals) if beta_vals else math.nan
    return SweepReport(poly_id=poly_id, d=p.degree, r=1.0 + cfg.C / p.degree,
                       M=M, costs=costs, mean_cost=mean_cost, bound=bound,
                       failures=failures, beta_plus_mean=beta_mean,
                       wN_over_rho_min=ratio_min, rows=rows, traces=traces)


def sweep_to_csv(report: SweepReport) -> str:
    """Deterministic CSV matrix (t, N, outcome, beta_plus, wN_ratio)."""
    buf = io.StringIO()
    buf.write("t,N,outcome,beta_plus,wN_ratio\n")
    for row in report.rows:
        bp = "" if row.beta_plus is None else str(row.beta_plus)
        ratio = "" if math.isnan(row.wN_ratio) else format(row.wN_ratio, ".17g")
        buf.write(f"{row.t:.17g},{row.N},{row.outcome},{bp},{ratio}\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# quadrature identities and circle statistics
# ---------------------------------------------------------------------------

def quadrature_log_abs_f(p: Polynomial, r: float, nodes: int = 1024) -> float:
    """Trapezoid quadrature of log|f(re^{2 pi i t})| over one period.

    Equals d log r when all roots are inside |z| = r (spectrally accurate
    for this smooth periodic integrand)."""
    if r <= 1.0:
        raise InputError("r must be > 1")
    if nodes < 256 or nodes & (nodes - 1):
        raise InputError("nodes must be a power of two >= 256")
    t = np.arange(nodes) / nodes
    w = p.eval_many(r * np.exp(2j * np.pi * t))
    return float(np.mean(np.log(np.abs(w))))


def arg_speed_many(p: Polynomial, r: float, ts: np.ndarray) -> np.ndarray:
    """Vectorized d/dt Arg f(r e^{2 pi i t}) over an array of angles."""
    p = ensure_roots(p)
    z = r * np.exp(2j * np.pi * np.asarray(ts, dtype=float))
    total = np.zeros(len(z))
    for zeta in p.roots:
        total += (z / (z - zeta)).real
    return 2.0 * np.pi * total


def arg_speed_bounds(p: Polynomial, r: float, samples: int = 1024):
    """(ok, winding): bracket 2 pi d r/(r+1) <= speed <= 2 pi d r/(r-1) at
    uniform samples, and the mean (= total winding / 2 pi ... times 2 pi)."""
    ts = (np.arange(samples) + 0.5) / samples
    speeds = arg_speed_many(p, r, ts)
    d = p.degree
    lo = 2.0 * np.pi * d * r / (r + 1.0)
    hi = 2.0 * np.pi * d * r / (r - 1.0)
    ok = bool(np.all(speeds >= lo - 1e-9) and np.all(speeds <= hi + 1e-9))
    winding = float(np.mean(speeds))
    return ok, winding


# ---------------------------------------------------------------------------
# per-trace audits
# ---------------------------------------------------------------------------

@dataclass
class AuditReport:
    n_steps: int
    delta_ok: tuple             # delta_n <= 0.0158 |f_n|/alpha_n
    guide_upper_ok: tuple       # |f_n| <= 1.1376 |w_n|   (alpha_n > threshold)
    guide_lower_ok: tuple       # |w_{n+1}| >= 0.41982 |w_n|
    u_ok: tuple                 # u_n <= 1/15 + 0.0158
    jump_ratio_min: float       # min J_n / r_n over un-flagged steps
    flagged_steps: tuple        # steps where the r_n estimate is flagged
    radius_bracket_narrow: float    # fraction with (1/4)R_n <= |f_n|/alpha_n <= (3-2sqrt2)R_n
    radius_bracket_wide: float      # same, upper constant reciprocal: <= R_n/(3-2sqrt2)
    wN_over_rho: float
    root_index: int | None

    @property
    def all_core_pass(self) -> bool:
        return (all(self.delta_ok) and all(self.guide_upper_ok)
                and all(self.guide_lower_ok) and all(self.u_ok))

    def to_json(self) -> dict:
        def _num(x):
            return x if x is None or math.isfinite(x) else None
        return {
            "n_steps": self.n_steps,
            "delta_ok": all(self.delta_ok),
            "guide_upper_ok": all(self.guide_upper_ok),
            "guide_lower_ok": all(self.guide_lower_ok),
            "u_ok": all(self.u_ok),
            "jump_ratio_min": _num(self.jump_ratio_min),
            "flagged_steps": list(self.flagged_steps),
            "radius_bracket_narrow": self.radius_bracket_narrow,
            "radius_bracket_wide": self.radius_bracket_wide,
            "wN_over_rho": _num(self.wN_over_rho),
            "root_index": self.root_index,
        }


_LEMMA_LO = 0.25
_LEMMA_HI = 3.0 - 2.0 * math.sqrt(2.0)


def audit_trace(trace: Trace, profile: CriticalProfile) -> AuditReport:
    """Evaluate every per-step inequality of the step-size analysis on a
    Certified classic trace.

    r_n is estimated as the distance from the guide point w_n to the nearest
    critical value visible from the lifted point over w_n; R_n analogously
    at f_n from z_n.  Steps where no visible value is found are flagged and
    excluded from jump_ratio_min.  The two-constant radius bracket on
    |f_n|/alpha_n is evaluated with a narrow upper constant 3-2*sqrt(2)
    (vacuous, since 1/4 > 3-2*sqrt(2)) and with that constant's reciprocal,
    and reported as hold-fractions, never asserted.
    """
    p = trace.poly
    if p is None:
        raise InputError("trace has no polynomial attached")
    if tuple(profile.coeffs) != tuple(p.coeffs):
        raise ProfileMismatch("profile was built for a different polynomial")
    if trace.outcome != CERTIFIED or trace.mode != "classic":
        raise InputError("audit requires a Certified classic-mode trace")

    steps = trace.steps
    n_move = len(steps) - 1     # steps that executed a jump
    delta_ok, up_ok, lo_ok, u_ok = [], [], [], []
    printed, swapped = 0, 0
    jump_min = math.inf
    flagged = []

    have_values = len(profile.critical_values) > 0
    st = make_state(p, profile) if have_values else None
    prev_idx = None
    for i in range(n_move):
        s, s_next = steps[i], steps[i + 1]
        fa = abs(s.f_of_z) / s.alpha
        delta_ok.append(s.delta <= DELTA_COEFF * fa + _ABS_TOL)
        if s.alpha > ALPHA_THRESHOLD:
            up_ok.append(abs(s.f_of_z) <= GUIDE_UPPER * abs(s.w) + _ABS_TOL)
            lo_ok.append(abs(s_next.w) >= GUIDE_LOWER * abs(s.w) - _ABS_TOL)
        u_ok.append(s.u <= U_MAX + _ABS_TOL)

        if not have_values:
            continue
        # r_n at the guide point (lifted), R_n at the iterate itself
        z_lift, ok = lift_point(st, s.z, s.w)
        hint = prev_idx if (i % 16) else None
        if not ok:
            flagged.append(i)
            r_n = math.nan
        else:
            idx, r_n, flag = nearest_visible_value(st, z_lift, s.w, hint)
            prev_idx = idx
            if flag:
                flagged.append(i)
                r_n = math.nan
        if not math.isnan(r_n) and r_n > 0:
            jump_min = min(jump_min, s.jump / r_n)
        _idx2, R_n, flag2 = nearest_visible_value(st, s.z, s.f_of_z, prev_idx)
        if not flag2 and R_n > 0:
            if _LEMMA_LO * R_n <= fa <= _LEMMA_HI * R_n:
                printed += 1
            if _LEMMA_LO * R_n <= fa <= R_n / _LEMMA_HI:
                swapped += 1

    if profile.rho:
        ri = _identify_root(p, trace.certificate.point)
        ratio = abs(trace.w_final) / profile.rho[ri]
    else:
        ri, ratio = None, math.inf
    denom = max(1, n_move - len(flagged)) if have_values else 1
    return AuditReport(
        n_steps=n_move, delta_ok=tuple(delta_ok), guide_upper_ok=tuple(up_ok),
        guide_lower_ok=tuple(lo_ok), u_ok=tuple(u_ok),
        jump_ratio_min=jump_min, flagged_steps=tuple(flagged),
        radius_bracket_narrow=printed / denom if n_move else 1.0,
        radius_bracket_wide=swapped / denom if n_move else 1.0,
        wN_over_rho=ratio, root_index=ri)


# ---------------------------------------------------------------------------
# cost bounds
# ---------------------------------------------------------------------------

def cost_integral_bound(trace: Trace, profile: CriticalProfile,
                        nodes: int = 2048) -> float:
    """67 * integral of |dy|/r_y along the guide ray [w_N, w_0]; the number
    of executed steps obeys N <= value + 1."""
    p = trace.poly
    if tuple(profile.coeffs) != tuple(p.coeffs):
        raise ProfileMismatch("profile was built for a different polynomial")
    if trace.outcome != CERTIFIED:
        raise InputError("cost integral needs a Certified trace")
    if len(profile.critical_values) == 0:
        return 0.0
    st = make_state(p, profile)
    w_n = trace.w_final
    w_0 = trace.steps[0].w
    z_n, ok = lift_point(st, trace.steps[-1].z, w_n)
    if not ok:
        z_n = trace.steps[-1].z
    targets = [w_n + (w_0 - w_n) * (k / nodes) for k in range(nodes + 1)]
    _infl, series, partial = _influence_walk(st, z_n, w_n, targets)
    if partial or len(series) != nodes + 1:
        from .errors import ContinuationStall
        raise ContinuationStall("ray lift stalled during cost integration")
    seg = abs(w_0 - w_n) / nodes
    inv = [1.0 / dist for (_k, _idx, dist) in series]
    total = sum(0.5 * (inv[k] + inv[k + 1]) * seg for k in range(nodes))
    return AVG_COST_COEFF * total


def angle_log_term(theta: float) -> float:
    """log((4 + tan|theta|) / (sec|theta| - 1)); +inf at theta = 0."""
    a = abs(theta)
    if a >= math.pi / 2:
        raise InputError("term defined for |theta| < pi/2")
    denom = 1.0 / math.cos(a) - 1.0
    if denom < 1e-12:
        return math.inf
    return math.log((4.0 + math.tan(a)) / denom)


def costestimate_bound(trace: Trace, probe: RayProbe,
                       profile: CriticalProfile) -> float:
    """67 [log(|w_0|/|w_N|) + beta+ log(9/4) + sum of angle-log terms];
    infinite when some influencing angle is 0 (contract then vacuous)."""
    if trace.outcome != CERTIFIED:
        raise InputError("cost estimate needs a Certified trace")
    w0 = abs(trace.steps[0].w)
    wN = abs(trace.w_final)
    if wN == 0:
        return math.inf
    total = math.log(w0 / wN) + probe.beta_plus * math.log(9.0 / 4.0)
    for _idx, th in probe.theta_per_critical:
        if abs(th) < math.pi / 2:
            total += angle_log_term(th)
    return AVG_COST_COEFF * total


# ---------------------------------------------------------------------------
# built-in polynomial suite
# ---------------------------------------------------------------------------

_SUITE_SEED = 20260823


def random_poly(rng: np.random.Generator, d: int, radius: float = 0.92,
                min_sep: float = 0.05) -> Polynomial:
    """Random element of the class: monic, distinct roots in the unit disk,
    pairwise separation >= min_sep."""
    roots = []
    attempts = 0
    while len(roots) < d:
        attempts += 1
        if attempts > 10000:
            raise InputError("rejection sampling failed; relax min_sep")
        z = complex(*rng.uniform(-radius, radius, 2))
        if abs(z) > radius:
            continue
        if all(abs(z - w) >= min_sep for w in roots):
            roots.append(z)
    return from_roots(roots)


def builtin_suite(d_max: int | None = None):
    """The named + seeded-random polynomial suite; [(poly_id, Polynomial)]."""
    out = [
        ("z2-quarter", from_roots([0.5, -0.5])),
        ("z3-ring", from_roots([0.0, 0.9, -0.9])),
        ("d8-circle", from_roots(
            [0.9 * np.exp(2j * np.pi * k / 8) for k in range(8)])),
    ]
    rng = np.random.default_rng(_SUITE_SEED)
    for i in range(6):
        out.append((f"rand-d4-{i}", random_poly(rng, 4)))
    for i in range(5):
        out.append((f"rand-d8-{i}", random_poly(rng, 8)))
    for i in range(5):
        out.append((f"rand-d16-{i}", random_poly(rng, 16)))
    if d_max is not None:
        out = [(pid, p) for pid, p in out if p.degree <= d_max]
    return out


# ---------------------------------------------------------------------------
# verification runner (used by the CLI)
# ---------------------------------------------------------------------------

def verify_suite(d_max: int | None = None, only: str | None = None):
    """Run the assertable property checks on the named suite polynomials.

    Returns a list of (check_name, status, detail) with status in
    {"pass", "fail", "report"}; "report" rows never fail the run.
    """
    results = []

    def record(name, ok, detail=""):
        if only is not None and only not in name:
            return
        results.append((name, "pass" if ok else "fail", detail))

    def report(name, detail):
        if only is not None and only not in name:
            return
        results.append((name, "report", detail))

    polys = [(pid, p) for pid, p in builtin_suite(d_max=d_max)
             if pid in ("z2-quarter", "z3-ring", "d8-circle")]
    for pid, p in polys:
        d = p.degree
        profile = critical_profile(p)
        for r in (1.0 + 1.0 / d, 1.5, 2.0):
            q = quadrature_log_abs_f(p, r, 1024)
            target = d * math.log(r)
            ok = abs(q - target) <= 1e-6 * abs(target)
            record(f"log-integral:{pid}:r={r:g}", ok,
                   f"quadrature {q:.8f} vs {target:.8f}")
        for r in (1.0 + 1.0 / d, 1.5):
            ok, winding = arg_speed_bounds(p, r, samples=1024)
            record(f"arg-speed-bracket:{pid}:r={r:g}", ok)
            target = 2.0 * math.pi * d
            record(f"winding:{pid}:r={r:g}",
                   abs(winding - target) <= 1e-6 * target,
                   f"{winding:.8f} vs {target:.8f}")
        rep = sweep_average_cost(p, 16, profile=profile, poly_id=pid,
                                 keep_traces=True)
        record(f"mean-cost-bound:{pid}",
               (not rep.costs) or rep.mean_cost <= rep.bound,
               f"mean {rep.mean_cost:.2f} vs bound {rep.bound:.2f}")
        record(f"no-failures:{pid}", not rep.failures, str(rep.failures))
        if rep.traces:
            audit = audit_trace(rep.traces[0], profile)
            record(f"step-audit:{pid}", audit.all_core_pass)
            record(f"final-guide:{pid}",
                   audit.wN_over_rho >= FINAL_GUIDE_FLOOR,
                   f"ratio {audit.wN_over_rho:.4f}")
            ok_jump = (audit.jump_ratio_min >= JUMP_RATIO_FLOOR - 1e-9)
            record(f"jump-ratio:{pid}", ok_jump,
                   f"min {audit.jump_ratio_min:.4f}")
            report(f"radius-bracket:{pid}",
                   f"narrow holds {audit.radius_bracket_narrow:.2f}, "
                   f"wide holds {audit.radius_bracket_wide:.2f}")
    # one Voronoi probe (cheap degree-3 case)
    pid, p = "z3-ring", from_roots([0.0, 0.9, -0.9])
    if d_max is None or p.degree <= d_max:
        from .geometry import voronoi_multiplicity_probe
        profile = critical_profile(p)
        mult = {j: m for j, (_c, m) in enumerate(profile.critical_points)}
        counts = voronoi_multiplicity_probe(p, 0.7 + 0.4j, profile, nodes=256)
        ok = all(counts[j] <= mult[j] + 1 for j in counts)
        record(f"voronoi-counts:{pid}", ok, str(counts))
    return results
