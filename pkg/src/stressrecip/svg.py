"""Minimal deterministic SVG rendering of frameworks and liftings.

Stress signs follow the thick/thin stroke convention: positive edges are
drawn thick, negative edges thin. Non-pointed vertices get filled dots,
pointed ones open circles.
"""
from __future__ import annotations

import numpy as np

from .plane_graph import Framework, PlaneEmbedding, classify_vertices


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _bbox(points_list):
    pts = np.vstack(points_list)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = 0.08 * max(float((hi - lo).max()), 1e-6)
    return lo - pad, hi + pad


def _edge_lines(fw: Framework, stress, offset, out):
    for e, (i, j) in enumerate(fw.edges):
        a = fw.points[i] + offset
        b = fw.points[j] + offset
        width = 1.0
        dash = ""
        if stress is not None:
            peak = np.max(np.abs(stress))
            if abs(stress[e]) <= 1e-12 * peak:
                width, dash = 0.6, ' stroke-dasharray="2,2"'
            else:
                width = 2.6 if stress[e] > 0 else 0.9
        out.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                   f'y2="{_fmt(b[1])}" stroke="black" stroke-width="{width}"'
                   f' vector-effect="non-scaling-stroke"{dash}/>')


def _vertex_dots(fw: Framework, emb, offset, radius, out):
    pointed = None
    if emb is not None:
        pointed = [v.pointed for v in classify_vertices(emb)]
    for v in range(fw.n):
        p = fw.points[v] + offset
        fill = "black" if (pointed is not None and not pointed[v]) else "white"
        out.append(f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" r="{_fmt(radius)}" '
                   f'fill="{fill}" stroke="black" stroke-width="0.8" '
                   f'vector-effect="non-scaling-stroke"/>')


def render_svg(fw: Framework, stress=None, emb: PlaneEmbedding | None = None,
               companion: Framework | None = None, companion_stress=None,
               companion_emb=None, curves=None) -> str:
    """Framework (left) with optional companion diagram (right) and level curves."""
    groups = [fw.points]
    offset2 = np.zeros(2)
    if companion is not None:
        lo1, hi1 = _bbox([fw.points])
        lo2, hi2 = _bbox([companion.points])
        offset2 = np.array([hi1[0] - lo2[0] + 0.35 * (hi1[0] - lo1[0]), lo1[1] - lo2[1]])
        groups.append(companion.points + offset2)
    if curves:
        groups.extend(c + 0.0 for c in curves)
    lo, hi = _bbox(groups)
    w, h = hi - lo
    radius = 0.012 * max(w, h)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(lo[0])} {_fmt(-hi[1])} '
           f'{_fmt(w)} {_fmt(h)}" width="720" height="{_fmt(720 * h / w)}">',
           '<g transform="scale(1,-1)">']
    _edge_lines(fw, stress, np.zeros(2), out)
    _vertex_dots(fw, emb, np.zeros(2), radius, out)
    if companion is not None:
        _edge_lines(companion, companion_stress, offset2, out)
        _vertex_dots(companion, companion_emb, offset2, radius, out)
    if curves:
        for pts in curves:
            path = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in pts)
            out.append(f'<polygon points="{path}" fill="none" stroke="#666" '
                       f'stroke-width="0.6" vector-effect="non-scaling-stroke"/>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"
