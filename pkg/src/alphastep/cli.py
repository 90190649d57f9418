"""Command-line front door.

Subcommands: solve, certify, profile, sweep, verify, plot.
Exit codes: 0 ok, 2 bad input, 3 step cutoff, 4 singular start,
5 bound violated, 6 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .alpha import ALPHA_THRESHOLD, certify
from .errors import InputError, SingularStart
from .geometry import critical_profile
from .harness import (
    sweep_average_cost,
    sweep_to_csv,
    verify_suite,
)
from .pathlift import (
    CERTIFIED,
    MAX_STEPS_EXCEEDED,
    RunConfig,
    choose_start,
    run,
    run_adaptive,
    trace_to_jsonl,
)
from .plotting import trace_plot_svg, voronoi_plot_svg
from .polynomial import parse_polynomial

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CUTOFF = 3
EXIT_SINGULAR = 4
EXIT_BOUND = 5
EXIT_VERIFY = 6


def _load_poly(spec: str):
    """Accept a file path or inline JSON."""
    text = spec
    if not spec.lstrip().startswith("{") and os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
    return parse_polynomial(text)


def _write_out(path: str | None, content: str):
    if path:
        with open(path, "w") as fh:
            fh.write(content)
    else:
        sys.stdout.write(content)


def _run_config(args) -> RunConfig:
    return RunConfig(C=args.C, threshold=args.threshold,
                     max_steps=args.max_steps, mode=args.mode)


def cmd_solve(args) -> int:
    p = _load_poly(args.poly)
    cfg = _run_config(args)
    try:
        z0 = choose_start(p.degree, args.t, args.C)
        runner = run_adaptive if args.mode == "adaptive" else run
        trace = runner(p, z0, cfg)
    except SingularStart as e:
        print(f"singular start: {e}", file=sys.stderr)
        return EXIT_SINGULAR
    if args.out:
        _write_out(args.out, trace_to_jsonl(trace))
    if trace.outcome == CERTIFIED:
        z = trace.certificate.point
        print(f"certified z = {z.real:.17g}{z.imag:+.17g}i  "
              f"alpha = {trace.certificate.alpha_value:.6g}  N = {trace.n_steps}")
        return EXIT_OK
    print(f"outcome: {trace.outcome} after {trace.n_steps} steps",
          file=sys.stderr)
    if trace.outcome == MAX_STEPS_EXCEEDED:
        return EXIT_CUTOFF
    return EXIT_SINGULAR


def cmd_certify(args) -> int:
    p = _load_poly(args.poly)
    z0 = choose_start(p.degree, args.t, args.C)
    cert = certify(p, z0, threshold=args.threshold)
    payload = {
        "z": [z0.real, z0.imag],
        "certified": cert is not None,
        "alpha": cert.alpha_value if cert else None,
        "threshold": args.threshold,
    }
    _write_out(args.out, json.dumps(payload, separators=(",", ":")) + "\n")
    return EXIT_OK


def cmd_profile(args) -> int:
    p = _load_poly(args.poly)
    profile = critical_profile(p)
    _write_out(args.out,
               json.dumps(profile.to_json(), separators=(",", ":")) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    import numpy as np

    p = _load_poly(args.poly)
    cfg = _run_config(args)
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    report = sweep_average_cost(p, args.M, cfg=cfg, poly_id=args.poly[:40],
                                rng=rng)
    if args.format == "json":
        _write_out(args.out,
                   json.dumps(report.to_json(), separators=(",", ":")) + "\n")
    else:
        _write_out(args.out, sweep_to_csv(report))
    mean = report.mean_cost
    print(f"mean cost {mean:.3f} vs bound {report.bound:.3f} "
          f"({len(report.failures)} failures)", file=sys.stderr)
    if report.costs and not (mean <= report.bound):
        return EXIT_BOUND
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify_suite(d_max=args.d_max, only=args.only)
    width = max((len(name) for name, _s, _d in results), default=10)
    failed = False
    lines = []
    for name, status, detail in results:
        lines.append(f"{name:<{width}}  {status:<6}  {detail}")
        if status == "fail":
            failed = True
    lines.append(f"{sum(s == 'pass' for _n, s, _d in results)} passed, "
                 f"{sum(s == 'fail' for _n, s, _d in results)} failed, "
                 f"{sum(s == 'report' for _n, s, _d in results)} report-only")
    _write_out(args.out, "\n".join(lines) + "\n")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_plot(args) -> int:
    p = _load_poly(args.poly)
    if args.only == "voronoi":
        profile = critical_profile(p)
        svg = voronoi_plot_svg(p, profile, grid=200)
    else:
        cfg = _run_config(args)
        z0 = choose_start(p.degree, args.t, args.C)
        runner = run_adaptive if args.mode == "adaptive" else run
        trace = runner(p, z0, cfg)
        svg = trace_plot_svg(trace)
    _write_out(args.out, svg)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="alphastep",
        description="Certified polynomial root finding by guided path "
                    "lifting, with geometry probes and cost experiments.")
    sub = ap.add_subparsers(dest="command", required=True)
    handlers = {"solve": cmd_solve, "certify": cmd_certify,
                "profile": cmd_profile, "sweep": cmd_sweep,
                "verify": cmd_verify, "plot": cmd_plot}
    for name, fn in handlers.items():
        sp = sub.add_parser(name)
        sp.set_defaults(handler=fn)
        if name != "verify":
            sp.add_argument("--poly", required=True,
                            help="path to polynomial JSON, or inline JSON")
        sp.add_argument("--t", type=float, default=0.0,
                        help="starting angle in [0,1)")
        sp.add_argument("--C", type=float, default=1.0,
                        help="start radius offset: |z0| = 1 + C/d")
        sp.add_argument("--M", type=int, default=64, help="sweep sample count")
        sp.add_argument("--mode", choices=("classic", "adaptive"),
                        default="classic")
        sp.add_argument("--threshold", type=float, default=ALPHA_THRESHOLD)
        sp.add_argument("--max-steps", type=int, default=None,
                        dest="max_steps")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "jsonl", "csv", "svg"),
                        default="json")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--only", default=None,
                        help="verify: filter checks; plot: 'voronoi' for "
                             "grid shading instead of a trace")
        sp.add_argument("--d-max", type=int, default=None, dest="d_max")
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SingularStart as e:
        print(f"singular start: {e}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
