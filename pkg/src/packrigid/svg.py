"""SVG rendering of packings with the blue/red/green/gray color convention."""

from __future__ import annotations

import numpy as np

from .core import ConstraintPartition, Packing, PlanarEmbeddedGraph, Tag
from .first_order import Stress

FILL = {
    Tag.DECREASE: "#5b8dd6",   # blue: may shrink
    Tag.INCREASE: "#d96459",   # red: may grow
    Tag.FIXED: "#6fbf73",      # green: pinned
    Tag.FREE: "#bdbdbd",       # gray: free
}


def export_svg(graph: PlanarEmbeddedGraph, packing: Packing,
               partition: ConstraintPartition,
               stress: Stress | None = None) -> str:
    """One filled circle per disk with its id at the center; when a stress
    is given, every edge with a nonzero value gets a label at its midpoint.
    The viewport pads the bounding box of the disks by 10 percent."""
    xs = packing.centers[:, 0]
    ys = packing.centers[:, 1]
    r = packing.radii
    x0, x1 = float(np.min(xs - r)), float(np.max(xs + r))
    y0, y1 = float(np.min(ys - r)), float(np.max(ys + r))
    pad = 0.1 * max(x1 - x0, y1 - y0, 1e-9)
    x0 -= pad
    y0 -= pad
    w = (x1 + pad) - x0
    h = (y1 + pad) - y0
    scale = 600.0 / max(w, h)

    def X(x):
        return (x - x0) * scale

    def Y(y):
        # flip so the mathematical y axis points up
        return (y1 + pad - y) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w * scale:.1f}" height="{h * scale:.1f}" '
        f'viewBox="0 0 {w * scale:.1f} {h * scale:.1f}">'
    ]
    for v in range(1, graph.n + 1):
        cx, cy = X(xs[v - 1]), Y(ys[v - 1])
        out.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r[v - 1] * scale:.2f}" '
            f'fill="{FILL[partition.tags[v - 1]]}" fill-opacity="0.75" '
            f'stroke="#333333" stroke-width="1"/>')
    font = max(8.0, 0.25 * float(np.min(r)) * scale)
    for v in range(1, graph.n + 1):
        cx, cy = X(xs[v - 1]), Y(ys[v - 1])
        out.append(
            f'<text x="{cx:.2f}" y="{cy:.2f}" font-size="{font:.1f}" '
            f'text-anchor="middle" dominant-baseline="middle">{v}</text>')
    if stress is not None:
        for k, (i, j) in enumerate(graph.edges):
            value = float(stress.values[k])
            if value == 0.0:
                continue
            mx = X(0.5 * (xs[i - 1] + xs[j - 1]))
            my = Y(0.5 * (ys[i - 1] + ys[j - 1]))
            out.append(
                f'<text x="{mx:.2f}" y="{my:.2f}" font-size="{font * 0.8:.1f}" '
                f'text-anchor="middle" dominant-baseline="middle" '
                f'fill="#222222">{value:.3g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
