"""The alpha-step path-lifting algorithm with full trace recording.

Step 0 picks z0 on the circle of radius 1 + C/d and fixes the unit target
direction w = w0/|w0|.  Step 1 stops as soon as alpha(z_n) <= threshold.
Step 2 moves the guide point w_n toward 0 by (1/15)|f_n|/alpha_n along the
ray and takes the corrected Newton-like step toward it.

Guide points are tracked as a real modulus times the cached unit direction,
so they stay exactly on the ray of w0.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

from .alpha import (
    ALPHA_THRESHOLD,
    INDUCTION_C,
    JUMP_COEFF,
    Certificate,
    _alpha_gamma_taylor,
    induction_margin,
)
from .errors import AlphaStepError, InputError, SingularStart
from .polynomial import Polynomial, horner, taylor_coeffs

_DERIV_GUARD = 1e-300

CERTIFIED = "Certified"
MAX_STEPS_EXCEEDED = "MaxStepsExceeded"
CRITICAL_POINT_ENCOUNTERED = "CriticalPointEncountered"
HALVING_UNDERFLOW = "HalvingUnderflow"


@dataclass(frozen=True)
class TraceStep:
    n: int
    z: complex
    w: complex
    f_of_z: complex
    alpha: float
    delta: float           # |f_n - w_n|
    jump: float | None = None    # |w_n - w_{n+1}|, absent on the final step
    h: complex | None = None     # -(z_{n+1}-z_n) f'_n / f_n
    u: float | None = None       # alpha_n |h_n|
    clamped: bool = False        # guide point clamped to stay on the ray
    halvings: int = 0            # adaptive mode only


@dataclass
class Trace:
    steps: list
    start_angle_t: float
    radius: float
    outcome: str
    certificate: Certificate | None
    w_final: complex
    mode: str = "classic"
    poly: Polynomial | None = None
    f_evals: int = 0
    anomalies: list = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        """Number of Step-2 executions."""
        if self.outcome == CERTIFIED:
            return len(self.steps) - 1
        return len(self.steps)


@dataclass
class RunConfig:
    C: float = 1.0
    A: float = JUMP_COEFF
    threshold: float = ALPHA_THRESHOLD
    max_steps: int | None = None   # resolved per polynomial; see resolved_max_steps
    mode: str = "classic"
    adaptive_h0: float = JUMP_COEFF
    adaptive_accept_c: float = INDUCTION_C
    k_f: float | None = None       # conditioning product, when known

    _FALLBACK_MAX_STEPS = 100_000

    def __post_init__(self):
        if self.A > JUMP_COEFF + 1e-15:
            raise InputError("jump coefficient A must be <= 1/15")
        if self.threshold > ALPHA_THRESHOLD + 1e-15:
            raise InputError("threshold must be <= 0.1307")
        if self.mode not in ("classic", "adaptive"):
            raise InputError(f"unknown mode {self.mode!r}")
        if induction_margin(self.A, INDUCTION_C) >= 1.0:
            raise InputError("A does not close the step-size induction")

    def resolved_max_steps(self, d: int) -> int:
        if self.max_steps is not None:
            return self.max_steps
        if self.k_f is not None and self.k_f > 0:
            bound = 67.0 * (13.1 + 2.0 * abs(math.log(self.k_f)) / d)
            return int(math.ceil(10.0 * bound))
        return self._FALLBACK_MAX_STEPS


class PathLiftFailed(AlphaStepError):
    """A run ended without a certificate; carries the trace."""

    def __init__(self, trace: Trace):
        super().__init__(f"run ended with outcome {trace.outcome}")
        self.trace = trace


def choose_start(d: int, t: float, C: float = 1.0) -> complex:
    """(1 + C/d) e^{2 pi i t}."""
    if d < 1 or C <= 0:
        raise InputError("need d >= 1 and C > 0")
    if not 0.0 <= t < 1.0:
        raise InputError("t must be in [0, 1)")
    return (1.0 + C / d) * cmath.exp(2j * math.pi * t)


def _start_state(p: Polynomial, z0: complex):
    cd = p.coeffs_desc()
    t0 = taylor_coeffs(cd, z0, 1)
    if abs(t0[0]) == 0.0:
        raise SingularStart("f(z0) = 0")
    if abs(t0[1]) < _DERIV_GUARD:
        raise SingularStart("f'(z0) = 0")
    w0 = t0[0]
    return cd, w0, w0 / abs(w0)


def run(p: Polynomial, z0: complex, cfg: RunConfig | None = None) -> Trace:
    """Classic-mode run; deterministic for identical inputs."""
    cfg = cfg or RunConfig()
    d = p.degree
    cd, w0, wdir = _start_state(p, z0)
    max_steps = cfg.resolved_max_steps(d)

    t_angle = (cmath.phase(z0) / (2 * math.pi)) % 1.0
    trace = Trace(steps=[], start_angle_t=t_angle, radius=abs(z0),
                  outcome=MAX_STEPS_EXCEEDED, certificate=None,
                  w_final=w0, mode="classic", poly=p)

    z = complex(z0)
    m = abs(w0)
    n = 0
    while True:
        taylor = taylor_coeffs(cd, z, d)
        trace.f_evals += 1
        fz, fpz = taylor[0], taylor[1]
        w = m * wdir
        delta = abs(fz - w)
        if abs(fpz) < _DERIV_GUARD:
            trace.steps.append(TraceStep(n=n, z=z, w=w, f_of_z=fz,
                                         alpha=math.inf, delta=delta))
            trace.outcome = CRITICAL_POINT_ENCOUNTERED
            break
        ad = _alpha_gamma_taylor(taylor)
        if ad.alpha <= cfg.threshold:
            trace.steps.append(TraceStep(n=n, z=z, w=w, f_of_z=fz,
                                         alpha=ad.alpha, delta=delta))
            trace.outcome = CERTIFIED
            trace.certificate = Certificate(point=z, alpha_value=ad.alpha,
                                            threshold=cfg.threshold)
            break
        if n >= max_steps:
            trace.outcome = MAX_STEPS_EXCEEDED
            break

        step_len = cfg.A * abs(fz) / ad.alpha
        m_next = m - step_len
        clamped = False
        if m_next <= 0.0:
            # Cannot happen while alpha > 0.1307 in exact arithmetic
            # (guide-point decay bound); floating-point belt and suspenders.
            m_next = 1e-3 * m
            clamped = True
            trace.anomalies.append(("clamped", n))
        w_next = m_next * wdir
        # Newton step toward the new guide point: f(z_next) ~ w_next
        z_next = z + (w_next - fz) / fpz
        h = (fz - w_next) / fz
        trace.steps.append(TraceStep(
            n=n, z=z, w=w, f_of_z=fz, alpha=ad.alpha, delta=delta,
            jump=abs(w - w_next), h=h, u=ad.alpha * abs(h), clamped=clamped))
        z, m, n = z_next, m_next, n + 1

    trace.w_final = m * wdir
    return trace


_H_UNDERFLOW = 1e-12


def run_adaptive(p: Polynomial, z0: complex, cfg: RunConfig | None = None) -> Trace:
    """Guide-point variant: w_{n+1} = (1 - h_n)|f_n| w with h_n halved until
    the lifted point tracks it; alpha is evaluated only for termination."""
    cfg = cfg or RunConfig(mode="adaptive")
    d = p.degree
    cd, w0, wdir = _start_state(p, z0)
    max_steps = cfg.resolved_max_steps(d)

    t_angle = (cmath.phase(z0) / (2 * math.pi)) % 1.0
    trace = Trace(steps=[], start_angle_t=t_angle, radius=abs(z0),
                  outcome=MAX_STEPS_EXCEEDED, certificate=None,
                  w_final=w0, mode="adaptive", poly=p)

    z = complex(z0)
    m = abs(w0)
    h_prev = cfg.adaptive_h0
    n = 0
    while True:
        taylor = taylor_coeffs(cd, z, d)
        trace.f_evals += 1
        fz, fpz = taylor[0], taylor[1]
        w = m * wdir
        delta = abs(fz - w)
        if abs(fpz) < _DERIV_GUARD:
            trace.steps.append(TraceStep(n=n, z=z, w=w, f_of_z=fz,
                                         alpha=math.inf, delta=delta))
            trace.outcome = CRITICAL_POINT_ENCOUNTERED
            break
        ad = _alpha_gamma_taylor(taylor)
        if ad.alpha <= cfg.threshold:
            trace.steps.append(TraceStep(n=n, z=z, w=w, f_of_z=fz,
                                         alpha=ad.alpha, delta=delta))
            trace.outcome = CERTIFIED
            trace.certificate = Certificate(point=z, alpha_value=ad.alpha,
                                            threshold=cfg.threshold)
            break
        if n >= max_steps:
            trace.outcome = MAX_STEPS_EXCEEDED
            break

        h = min(cfg.adaptive_h0, 2.0 * h_prev)
        halvings = 0
        accepted = None
        while h >= _H_UNDERFLOW:
            m_next = (1.0 - h) * abs(fz)
            w_next = m_next * wdir
            z_next = z + (w_next - fz) / fpz
            f_next = horner(cd, z_next)
            trace.f_evals += 1
            if abs(f_next - w_next) <= cfg.adaptive_accept_c * abs(w_next):
                accepted = (m_next, w_next, z_next)
                break
            h *= 0.5
            halvings += 1
        if accepted is None:
            trace.outcome = HALVING_UNDERFLOW
            trace.anomalies.append(("halving_underflow", n))
            break
        m_next, w_next, z_next = accepted
        hc = (fz - w_next) / fz
        trace.steps.append(TraceStep(
            n=n, z=z, w=w, f_of_z=fz, alpha=ad.alpha, delta=delta,
            jump=abs(w - w_next), h=hc, u=ad.alpha * abs(hc),
            halvings=halvings))
        z, m, h_prev, n = z_next, m_next, h, n + 1

    trace.w_final = m * wdir
    return trace


def pointwise_cost(p: Polynomial, t: float, cfg: RunConfig | None = None) -> int:
    """Number of Step-2 executions to certification from the standard start."""
    cfg = cfg or RunConfig()
    z0 = choose_start(p.degree, t, cfg.C)
    runner = run_adaptive if cfg.mode == "adaptive" else run
    trace = runner(p, z0, cfg)
    if trace.outcome != CERTIFIED:
        raise PathLiftFailed(trace)
    return trace.n_steps


# ---------------------------------------------------------------------------
# JSONL wire format
# ---------------------------------------------------------------------------

def _c2l(z: complex):
    return [z.real, z.imag]


def trace_to_jsonl(trace: Trace) -> str:
    """One record per step plus a summary record; byte-deterministic."""
    lines = []
    for s in trace.steps:
        rec = {"n": s.n, "z": _c2l(s.z), "w": _c2l(s.w), "f": _c2l(s.f_of_z),
               "alpha": s.alpha, "delta": s.delta,
               "jump": s.jump, "u": s.u}
        lines.append(json.dumps(rec, separators=(",", ":")))
    cert_z = trace.certificate.point if trace.certificate else None
    summary = {"outcome": trace.outcome, "N": trace.n_steps,
               "w_final": _c2l(trace.w_final),
               "certified_z": _c2l(cert_z) if cert_z is not None else None}
    lines.append(json.dumps(summary, separators=(",", ":")))
    return "\n".join(lines) + "\n"
