"""Critical points, per-root radii of convergence, conditioning aggregates,
circle estimates, and ray/Voronoi influence probes on the branched surface.

The surface is never built explicitly.  A point of it is a pair (z, w) with
f(z) = w; moving on the surface is analytic continuation of the inverse
branch, implemented as predictor-corrector steps with Newton correction.
A branch point v = f(c) is "visible" from (z, w) when the straight segment
[w, v] lifts from z and the lift lands at the critical point c itself
(rather than at a regular preimage of v).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContinuationStall,
    InputError,
    OracleFailure,
    RootsUnknown,
)
from .pathlift import choose_start
from .polynomial import Polynomial, from_coeffs, horner, taylor_coeffs
from .rootoracle import certified_roots, preimages

# Critical-point candidates are first grouped coarsely; a group only keeps
# multiplicity m if its center verifies as a genuine m-fold zero of f'
# (candidates for an m-fold zero scatter at roundoff^(1/m), far beyond any
# fixed fine tolerance, so naive clustering cannot recover designed
# multiplicities).
COARSE_CLUSTER = 0.01
_MFOLD_TOL = 1e-8

# Two critical values closer than this flag the profile as near-degenerate.
VALUE_COLLISION_TOL = 1e-10


# ---------------------------------------------------------------------------
# continuation primitives
# ---------------------------------------------------------------------------

def _newton_correct(cd, dcd, z, w, tol, iters=12, move_cap=None):
    """Solve f(z) = w from the given start; (z, ok)."""
    z0 = z
    for _ in range(iters):
        r = horner(cd, z) - w
        if abs(r) <= tol:
            if move_cap is not None and abs(z - z0) > move_cap:
                return z, False
            return z, True
        fp = horner(dcd, z)
        if abs(fp) < 1e-300:
            return z, False
        z = z - r / fp
    ok = abs(horner(cd, z) - w) <= tol
    if ok and move_cap is not None and abs(z - z0) > move_cap:
        ok = False
    return z, ok


def _nearest_value_dist(values, w, exclude=None):
    dmin = math.inf
    for j, v in enumerate(values):
        if j == exclude:
            continue
        d = abs(w - complex(v))
        if d < dmin:
            dmin = d
    return dmin


def _continue_segment(cd, dcd, z, w_from, w_to, init_steps=16, s_end=1.0,
                      min_step=1e-7, guard_values=None, guard_exclude=None):
    """Continue the branch with f(z) = w_from along [w_from, w_to].

    Returns (z_end, s_reached) with s the fraction of the segment covered.
    guard_values caps each step by the distance to the nearest listed
    branch value: a hop longer than that distance can tunnel past the
    branch point and put the Newton correction on the wrong sheet.
    """
    dw = w_to - w_from
    seg = abs(dw)
    if seg == 0.0:
        return z, 1.0
    tol = 1e-10 * max(1.0, abs(w_from), abs(w_to))
    s = 0.0
    ds = 1.0 / init_steps
    ds_cap = ds
    w_cur = w_from
    while s < s_end - 1e-15:
        ds_eff = ds
        if guard_values is not None:
            dloc = _nearest_value_dist(guard_values, w_cur, guard_exclude)
            if math.isfinite(dloc):
                ds_eff = min(ds, max(min_step, 0.4 * dloc / seg))
        s2 = min(s + ds_eff, s_end)
        w_t = w_from + s2 * dw
        fp = horner(dcd, z)
        ok = False
        if abs(fp) >= 1e-300:
            hop = (w_t - w_cur) / fp
            zp = z + hop
            # corrected move comparable to the predictor, else wrong sheet
            z2, ok = _newton_correct(cd, dcd, zp, w_t, tol,
                                     move_cap=8.0 * abs(hop) + 1e-12)
        if ok:
            z, w_cur, s = z2, w_t, s2
            ds = min(ds * 1.7, ds_cap)
        else:
            ds = 0.5 * ds_eff
            if ds < min_step:
                return z, s
    return z, s_end


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalProfile:
    degree: int
    critical_points: tuple          # ((c, multiplicity), ...)
    critical_values: tuple          # f(c), aligned with critical_points
    roots: tuple
    rho: dict                       # root index -> rho
    K_f: float
    log_K_f: float
    Lambda_f: float                 # 2 |log K_f| / d
    flags: tuple = ()
    rho_flagged: frozenset = frozenset()
    value_preimages: tuple = ()     # per value: regular preimages away from c
    coeffs: tuple = ()

    def multiplicity_sum(self) -> int:
        return sum(m for _, m in self.critical_points)

    def to_json(self) -> dict:
        return {
            "critical": [
                {"c": [c.real, c.imag], "m": m,
                 "v": [v.real, v.imag]}
                for (c, m), v in zip(self.critical_points, self.critical_values)
            ],
            "rho": {str(i): self.rho[i] for i in sorted(self.rho)},
            "K_f": self.K_f,
            "Lambda_f": self.Lambda_f,
        }


class _GeoState:
    """Bundled fast-path data for continuation and visibility queries."""

    def __init__(self, p: Polynomial, profile: CriticalProfile):
        self.p = p
        self.cd = p.coeffs_desc()
        arr = p.coeff_array()
        self.dcd = list((np.arange(1, len(arr)) * arr[1:])[::-1])
        self.profile = profile
        self.values = np.asarray(profile.critical_values, dtype=complex)
        self.points = [c for c, _ in profile.critical_points]
        self.q_others = profile.value_preimages


def make_state(p: Polynomial, profile: CriticalProfile) -> _GeoState:
    return _GeoState(p, profile)


def ensure_roots(p: Polynomial) -> Polynomial:
    """Return p with its root representation filled in (via the oracle)."""
    if p.roots is not None:
        return p
    try:
        roots = certified_roots(p.coeff_array(), residual_tol=1e-8)
    except OracleFailure as e:
        raise RootsUnknown(str(e)) from e
    return from_coeffs(p.coeffs, roots=tuple(complex(z) for z in roots))


def _group(points, tol):
    """Greedy single-linkage grouping by distance to the running centroid."""
    points = sorted(points, key=lambda z: (z.real, z.imag))
    groups = []
    for z in points:
        for grp in groups:
            if abs(z - sum(grp) / len(grp)) <= tol:
                grp.append(z)
                break
        else:
            groups.append([z])
    return groups


def _verified_clusters(g_asc, members, tol):
    """Resolve a candidate group into verified (center, multiplicity) pairs.

    A group of size m is accepted if Newton iteration on g^(m-1) lands on a
    point where the first m Taylor coefficients of g all vanish to roundoff;
    otherwise the group is split with a tighter tolerance and re-verified.
    """
    g_desc = list(np.asarray(g_asc)[::-1])
    scale = max(abs(complex(x)) for x in g_asc)
    m = len(members)
    c = sum(members) / m
    if m == 1:
        for _ in range(60):
            t = taylor_coeffs(g_desc, c, 1)
            if abs(t[1]) < 1e-300:
                break
            step = t[0] / t[1]
            c = c - step
            if abs(step) < 1e-15 * (1.0 + abs(c)):
                break
        return [(c, 1)]
    z = c
    for _ in range(80):
        t = taylor_coeffs(g_desc, z, m)
        if abs(t[m]) < 1e-300:
            break
        step = t[m - 1] / (m * t[m])
        z = z - step
        if abs(step) < 1e-15 * (1.0 + abs(z)):
            break
    t = taylor_coeffs(g_desc, z, m)
    if (all(abs(t[k]) <= _MFOLD_TOL * scale for k in range(m))
            and abs(t[m]) > _MFOLD_TOL * scale):
        return [(z, m)]
    if tol < 1e-9:
        return [(w, 1) for w in members]
    out = []
    for sub in _group(members, tol / 10.0):
        out.extend(_verified_clusters(g_asc, sub, tol / 10.0))
    return out


def critical_profile(p: Polynomial) -> CriticalProfile:
    """Critical points of f with multiplicities, critical values, per-root
    radii, and the conditioning aggregates K_f and Lambda_f."""
    d = p.degree
    p = ensure_roots(p)
    if d == 1:
        # empty-product convention: no critical values, K_f = 1
        return CriticalProfile(degree=1, critical_points=(), critical_values=(),
                               roots=p.roots, rho={}, K_f=1.0, log_K_f=0.0,
                               Lambda_f=0.0, coeffs=p.coeffs)
    arr = p.coeff_array()
    dcoeffs = np.arange(1, d + 1) * arr[1:]
    candidates = [complex(z) for z in certified_roots(dcoeffs, residual_tol=1e-10)]
    clusters = []
    for grp in _group(candidates, COARSE_CLUSTER):
        clusters.extend(_verified_clusters(dcoeffs, grp, COARSE_CLUSTER))
    clusters.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    crit_points = tuple((complex(c), int(m)) for c, m in clusters)
    crit_values = tuple(complex(p(c)) for c, _ in crit_points)

    flags = []
    for i in range(len(crit_values)):
        for j in range(i + 1, len(crit_values)):
            if abs(crit_values[i] - crit_values[j]) <= VALUE_COLLISION_TOL:
                flags.append("DegenerateNearMultiple")
                break

    # regular preimages of each critical value (landing discriminators);
    # numerical preimages of an m-fold branch value scatter at tol^(1/(m+1))
    # around c, so the exclusion radius must grow with multiplicity
    value_preimages = []
    for (c, _m), v in zip(crit_points, crit_values):
        near = [(cc, mm) for (cc, mm), vv in zip(crit_points, crit_values)
                if abs(vv - v) <= VALUE_COLLISION_TOL]
        qs = preimages(arr, v)
        others = []
        for q in qs:
            q = complex(q)
            if all(abs(q - cc) > max(1e-4, 3.0 * 1e-8 ** (1.0 / (mm + 1)))
                   for cc, mm in near):
                others.append(q)
        value_preimages.append(tuple(others))

    rho = {}
    rho_flagged = set()
    for i, zeta in enumerate(p.roots):
        r, flagged = _rho_continuation(p, zeta, crit_points, crit_values,
                                       value_preimages)
        rho[i] = float(r)
        if flagged:
            rho_flagged.add(i)

    log_k = -sum(math.log(r) for r in rho.values())
    k_f = math.exp(log_k) if abs(log_k) < 700 else math.inf
    return CriticalProfile(
        degree=d, critical_points=crit_points, critical_values=crit_values,
        roots=p.roots, rho=rho, K_f=k_f, log_K_f=log_k,
        Lambda_f=2.0 * abs(log_k) / d, flags=tuple(flags),
        rho_flagged=frozenset(rho_flagged),
        value_preimages=tuple(value_preimages), coeffs=p.coeffs)


def _rho_continuation(p, zeta, crit_points, crit_values, value_preimages):
    """(rho, flagged): modulus of the first critical value blocking the
    inverse branch sending 0 to zeta, continued along [0, v]."""
    cd = p.coeffs_desc()
    arr = p.coeff_array()
    dcd = list((np.arange(1, len(arr)) * arr[1:])[::-1])
    order = sorted(range(len(crit_values)), key=lambda j: abs(crit_values[j]))
    for j in order:
        v = crit_values[j]
        cs = [c for (c, _m), vv in zip(crit_points, crit_values)
              if abs(vv - v) <= VALUE_COLLISION_TOL]
        z_end, s = _continue_segment(cd, dcd, zeta, 0.0, v,
                                     init_steps=256, s_end=1.0 - 1e-4,
                                     guard_values=crit_values,
                                     guard_exclude=j)
        # blocking iff the endpoint lands at the branch locus of v, not at
        # one of its regular preimages
        d_c = min(abs(z_end - c) for c in cs)
        blocked = all(abs(z_end - q) >= d_c for q in value_preimages[j])
        if s < 0.99:
            if s > 0.5 and blocked:
                return abs(v), False
            raise ContinuationStall(
                f"continuation stalled at s={s:.4f} for root {zeta!r}")
        if blocked:
            return abs(v), False
    # no blocker identified; conservative fallback
    return min(abs(v) for v in crit_values), True


def rho_of_root(p: Polynomial, zeta: complex) -> float:
    """Radius of convergence of the inverse branch of f at the root zeta."""
    if abs(p(zeta)) > 1e-10:
        raise InputError(f"{zeta!r} is not a root (residual {abs(p(zeta)):.2e})")
    if p.degree < 2:
        raise InputError("rho is defined for degree >= 2")
    profile = critical_profile(p)
    r, _flagged = _rho_continuation(p, complex(zeta), profile.critical_points,
                                    profile.critical_values,
                                    profile.value_preimages)
    return r


# ---------------------------------------------------------------------------
# circle estimates
# ---------------------------------------------------------------------------

def s_r_constant(C: float) -> float:
    """Lower-bound constant s_r with |f(z0)| >= s_r rho_zeta on |z|=1+C/d.

    For C > 2 pi, s_r = 1/4; otherwise the smaller root of
    C (1-s)^2 = 8 pi s, in closed form.
    """
    if C <= 0:
        raise InputError("C must be positive")
    if C > 2.0 * math.pi:
        return 0.25
    b = 2.0 * C + 8.0 * math.pi
    return (b - math.sqrt(b * b - 4.0 * C * C)) / (2.0 * C)


def arg_speed(p: Polynomial, r: float, t: float) -> float:
    """d/dt Arg f(r e^{2 pi i t}) = 2 pi Re sum z/(z - zeta_j)."""
    if r <= 1.0:
        raise InputError("r must be > 1")
    p = ensure_roots(p)
    z = r * cmath.exp(2j * math.pi * t)
    return 2.0 * math.pi * sum((z / (z - zeta)).real for zeta in p.roots)


def theta_grid(p: Polynomial, profile: CriticalProfile, r: float,
               ts: np.ndarray) -> np.ndarray:
    """Angles Arg(f(r e^{2 pi i t}) / v) for every sample t and every
    critical value v; shape (len(ts), n_values)."""
    z = r * np.exp(2j * np.pi * np.asarray(ts, dtype=float))
    w = p.eval_many(z)
    v = np.asarray(profile.critical_values, dtype=complex)
    if len(v) == 0:
        return np.zeros((len(z), 0))
    return np.angle(w[:, None] / v[None, :])


# ---------------------------------------------------------------------------
# visibility and influence walks
# ---------------------------------------------------------------------------

def _visible(st: _GeoState, z, w, idx, init_steps=16) -> bool:
    """Straight-segment visibility of critical value idx from (z, w)."""
    v = complex(st.values[idx])
    c = st.points[idx]
    if abs(w - v) < 1e-13 * (1.0 + abs(v)):
        return True
    z_end, s = _continue_segment(st.cd, st.dcd, z, w, v,
                                 init_steps=init_steps, s_end=1.0 - 1e-4,
                                 guard_values=st.values, guard_exclude=idx)
    if s < 0.99:
        return False
    d_c = abs(z_end - c)
    for q in st.q_others[idx]:
        if abs(z_end - q) < d_c:
            return False
    return True


def nearest_visible_value(st: _GeoState, z, w, prev_idx=None):
    """(idx, distance, flagged) of the nearest visible critical value from
    the surface point (z, w).  prev_idx short-circuits when the previous
    winner is reached in the distance ordering."""
    dists = np.abs(w - st.values)
    order = np.argsort(dists, kind="stable")
    for idx in order:
        idx = int(idx)
        if idx == prev_idx:
            return idx, float(dists[idx]), False
        if _visible(st, z, w, idx):
            return idx, float(dists[idx]), False
    return int(order[0]), float(dists[order[0]]), True


def lift_point(st: _GeoState, z_guess, w):
    """Newton-correct z_guess onto the sheet point over w; (z, ok)."""
    tol = 1e-10 * max(1.0, abs(w))
    return _newton_correct(st.cd, st.dcd, z_guess, w, tol, iters=30)


# Re-test a cached winner's visibility every this many nodes.
_WINNER_RETEST = 16


def _influence_walk(st: _GeoState, z_start, w_start, targets):
    """Walk the lift of a polyline of targets starting at (z_start, w_start),
    recording which critical value is nearest-visible at each node.

    Returns (influenced_set, nearest_series, partial) where nearest_series
    is [(node_index, winner_idx, distance)].
    """
    influenced = set()
    series = []
    partial = False
    if len(st.values) == 0:
        return influenced, series, partial
    z = z_start
    w_cur = w_start
    dmat = np.abs(np.asarray(targets)[:, None] - st.values[None, :])
    orders = np.argsort(dmat, axis=1, kind="stable")
    prev_winner = None
    vis_cache = {}          # idx -> (node tested, visible)
    for k, y in enumerate(targets):
        if y != w_cur:
            z, s = _continue_segment(st.cd, st.dcd, z, w_cur, y,
                                     init_steps=1, s_end=1.0,
                                     guard_values=st.values)
            if s < 1.0:
                partial = True
                break
            w_cur = y
        winner = None
        for idx in orders[k]:
            idx = int(idx)
            if idx == prev_winner and (k % _WINNER_RETEST) != 0:
                winner = idx
                break
            cached = vis_cache.get(idx)
            if cached is not None and k - cached[0] < _WINNER_RETEST:
                vis = cached[1]
            else:
                vis = _visible(st, z, w_cur, idx)
                vis_cache[idx] = (k, vis)
            if vis:
                winner = idx
                break
        if winner is None:
            partial = True
            winner = int(orders[k][0])
        influenced.add(winner)
        series.append((k, winner, float(dmat[k, winner])))
        prev_winner = winner
    return influenced, series, partial


@dataclass(frozen=True)
class RayProbe:
    t: float
    theta_per_critical: tuple   # ((value index, theta), ...) for influenced
    influenced: tuple           # critical value indices
    beta: int
    beta_plus: int
    partial: bool = False


def ray_probe(p: Polynomial, t: float, C: float, profile: CriticalProfile,
              nodes: int = 1024) -> RayProbe:
    """Influence set of the ray of f(z0) for z0 = (1+C/d) e^{2 pi i t}."""
    d = p.degree
    if d == 1 or len(profile.critical_values) == 0:
        return RayProbe(t=t, theta_per_critical=(), influenced=(),
                        beta=0, beta_plus=0)
    st = make_state(p, profile)
    for _ in range(4):
        z0 = choose_start(d, t, C)
        w0 = p(z0)
        if all(abs(cmath.phase(v / w0)) > 1e-12 for v in profile.critical_values):
            break
        t = (t + 1e-9) % 1.0
    targets = [w0 * (1.0 - k / nodes) for k in range(nodes + 1)]
    influenced, _series, partial = _influence_walk(st, z0, w0, targets)
    thetas = tuple(sorted(
        (idx, cmath.phase(profile.critical_values[idx] / w0))
        for idx in influenced))
    beta_plus = sum(1 for _idx, th in thetas if abs(th) < math.pi / 2)
    return RayProbe(t=t, theta_per_critical=thetas,
                    influenced=tuple(sorted(influenced)),
                    beta=len(influenced), beta_plus=beta_plus, partial=partial)


def voronoi_multiplicity_probe(p: Polynomial, y: complex,
                               profile: CriticalProfile,
                               nodes: int = 1024) -> dict:
    """Per critical value: in how many of the d lifted rays of y it is ever
    nearest-visible.  Contract: count <= multiplicity + 1."""
    d = p.degree
    if d == 1 or len(profile.critical_values) == 0:
        return {}
    y = complex(y)
    if y == 0:
        raise InputError("y must be nonzero")
    if min(abs(y - v) for v in profile.critical_values) < 1e-9:
        raise InputError("y must avoid the critical values")
    st = make_state(p, profile)
    lifts = preimages(p.coeff_array(), y)
    vmax = max(abs(v) for v in profile.critical_values)
    s_max = max(2.0, 4.0 * vmax / abs(y))
    counts = {j: 0 for j in range(len(profile.critical_values))}
    for zi in lifts:
        zi = complex(zi)
        inward = [y * (1.0 - k / nodes) for k in range(nodes + 1)]
        out_nodes = nodes // 2
        outward = [y * (1.0 + (s_max - 1.0) * k / out_nodes)
                   for k in range(1, out_nodes + 1)]
        infl_in, _s1, p1 = _influence_walk(st, zi, y, inward)
        infl_out, _s2, p2 = _influence_walk(st, zi, y, outward)
        if p1 or p2:
            raise ContinuationStall(f"ray walk stalled for preimage {zi!r}")
        for j in infl_in | infl_out:
            counts[j] += 1
    return counts
