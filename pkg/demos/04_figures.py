"""Render the two built-in SVG figures.

- a solver trace: iterates in the z-plane with the roots marked
- a Voronoi shading of the plane by nearest critical value
"""

import pathlib

import numpy as np

from alphastep import choose_start, critical_profile, from_roots, run
from alphastep.plotting import trace_plot_svg, voronoi_plot_svg

out_dir = pathlib.Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

p = from_roots([0.9 * np.exp(2j * np.pi * k / 8) for k in range(8)])
trace = run(p, choose_start(8, t=0.07))
svg = trace_plot_svg(trace)
(out_dir / "trace.svg").write_text(svg)
print(f"trace.svg: {trace.n_steps} steps, {len(svg)} bytes")

prof = critical_profile(p)
svg = voronoi_plot_svg(p, prof, grid=200)
(out_dir / "voronoi.svg").write_text(svg)
print(f"voronoi.svg: {len(prof.critical_values)} critical value(s), "
      f"{len(svg)} bytes")
print(f"figures written to {out_dir}")
