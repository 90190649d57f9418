"""Static SVG figures: solver traces in the source plane and nearest-value
shading over a grid.

SVG is assembled by hand with fixed-precision coordinates so output bytes
are identical across runs for identical inputs.
"""

from __future__ import annotations

import colorsys

import numpy as np

from .geometry import CriticalProfile
from .pathlift import Trace
from .polynomial import Polynomial

_SVG_HEADER = ('<svg xmlns="http://www.w3.org/2000/svg" width="{w}" '
               'height="{h}" viewBox="0 0 {w} {h}">')


def _palette(n: int):
    """n visually distinct colors; deterministic."""
    out = []
    for i in range(max(n, 1)):
        r, g, b = colorsys.hsv_to_rgb((i * 0.61803) % 1.0, 0.65, 0.93)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


def _fit(points, size, pad):
    xs = [z.real for z in points]
    ys = [z.imag for z in points]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    scale = (size - 2 * pad) / span
    cx, cy = 0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)

    def to_px(z):
        return (size / 2 + (z.real - cx) * scale,
                size / 2 - (z.imag - cy) * scale)

    return to_px


def trace_plot_svg(trace: Trace, size: int = 600) -> str:
    """Iterates z_0..z_N as connected markers; roots (when known) as
    crosses.  Contains exactly len(steps) circle markers."""
    pts = [s.z for s in trace.steps]
    extras = list(trace.poly.roots or ()) if trace.poly else []
    to_px = _fit(pts + extras + [0j], size, pad=40)
    parts = [_SVG_HEADER.format(w=size, h=size),
             f'<rect width="{size}" height="{size}" fill="#ffffff"/>']
    if len(pts) > 1:
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(to_px, pts))
        parts.append(f'<polyline points="{coords}" fill="none" '
                     'stroke="#888888" stroke-width="1"/>')
    for zeta in extras:
        x, y = to_px(zeta)
        parts.append(f'<path d="M {x - 4:.2f} {y:.2f} H {x + 4:.2f} '
                     f'M {x:.2f} {y - 4:.2f} V {y + 4:.2f}" '
                     'stroke="#cc3333" stroke-width="1.5"/>')
    last = len(pts) - 1
    for i, z in enumerate(pts):
        x, y = to_px(z)
        fill = "#1f6f43" if i == last else "#2b5fa3"
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" '
                     f'fill="{fill}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def voronoi_plot_svg(p: Polynomial, profile: CriticalProfile,
                     grid: int = 200, extent: float = 1.5,
                     size: int = 600) -> str:
    """Grid cells colored by the critical value nearest to f(z) (straight
    target-plane projection; no lift), with critical points overlaid."""
    values = np.asarray(profile.critical_values, dtype=complex)
    colors = _palette(len(values))
    cell = size / grid
    parts = [_SVG_HEADER.format(w=size, h=size),
             f'<rect width="{size}" height="{size}" fill="#ffffff"/>']
    xs = np.linspace(-extent, extent, grid, endpoint=False) + extent / grid
    for row in range(grid):
        y = extent - (row + 0.5) * (2 * extent / grid)
        w = p.eval_many(xs + 1j * y)
        if len(values):
            idx = np.argmin(np.abs(w[:, None] - values[None, :]), axis=1)
        else:
            idx = np.zeros(len(w), dtype=int)
        # run-length encode the row
        col = 0
        while col < grid:
            j = int(idx[col])
            end = col
            while end + 1 < grid and int(idx[end + 1]) == j:
                end += 1
            color = colors[j] if len(values) else "#dddddd"
            parts.append(
                f'<rect x="{col * cell:.2f}" y="{row * cell:.2f}" '
                f'width="{(end - col + 1) * cell:.2f}" height="{cell:.2f}" '
                f'fill="{color}"/>')
            col = end + 1
    scale = size / (2 * extent)
    for (c, _m) in profile.critical_points:
        x = size / 2 + c.real * scale
        y = size / 2 - c.imag * scale
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" '
                     'fill="#000000"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
