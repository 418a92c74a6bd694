"""Deterministic SVG pictures of planar arrangements."""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from .toric import ToricArrangement, frac_mod1

SIZE = 400
MARGIN = 20


def _clip(a, c, lo, hi):
    """Segment of the line a . x = c inside the square [lo, hi]^2, or None."""
    pts = set()
    for j in range(2):
        other = 1 - j
        if a[other] == 0:
            continue
        for fixed in (lo, hi):
            t = (c - a[j] * fixed) / a[other]
            if lo <= t <= hi:
                p = [Fraction(0), Fraction(0)]
                p[j], p[other] = fixed, t
                pts.add(tuple(p))
    if len(pts) < 2:
        return None
    pts = sorted(pts)
    return pts[0], pts[-1]


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(arr) -> str:
    if arr.n != 2:
        raise ValueError("rendering needs a 2-dimensional arrangement")
    toric = isinstance(arr, ToricArrangement)
    if toric:
        lo, hi = Fraction(0), Fraction(1)
    else:
        R = arr.subdivision(0).box
        lo, hi = -R, R
    scale = (SIZE - 2 * MARGIN) / float(hi - lo)

    def px(p):
        return MARGIN + float(p[0] - lo) * scale, SIZE - MARGIN - float(p[1] - lo) * scale

    segs = []
    for h in arr.hyperplanes:
        a, b = h.normal, h.offset
        if toric:
            span = sorted(a[0] * x + a[1] * y for x in (0, 1) for y in (0, 1))
            offsets = [b + j for j in range(ceil(span[0] - b), floor(span[-1] - b) + 1)]
        else:
            offsets = [b]
        for c in offsets:
            s = _clip(a, c, lo, hi)
            if s is not None and s[0] != s[1]:
                segs.append(s)
    cells = arr.cells(0)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 30}" '
           f'viewBox="0 0 {SIZE} {SIZE + 30}">']
    (x0, y0), (x1, y1) = px((lo, hi)), px((hi, lo))
    out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" '
               'fill="none" stroke="#999" stroke-dasharray="4 2"/>')
    for p, q in sorted(segs):
        (ax, ay), (bx, by) = px(p), px(q)
        out.append(f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
                   'stroke="#1f4e9c" stroke-width="2"/>')
    for i, cell in enumerate(cells):
        pt = arr.cell_point(0, i)
        if toric:
            pt = [frac_mod1(x) for x in pt]
        cx, cy = px(pt)
        out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" font-size="12" text-anchor="middle">c{i}</text>')
    kind = "hyperplanes" if toric else "lines"
    noun = "cells" if toric else "regions"
    out.append(f'<text x="{MARGIN}" y="{SIZE + 20}" font-size="13">'
               f'{len(arr.hyperplanes)} {kind}, {len(cells)} {noun}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
