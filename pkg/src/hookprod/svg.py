"""SVG pictures of hook supports on the truncation box."""
from __future__ import annotations

from fractions import Fraction

from .grid_modules import INF, HookModule

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
SIZE = 400
MARGIN = 48


def _num(v: Fraction) -> str:
    # fixed two decimals from exact arithmetic keeps the output byte-stable
    v = Fraction(v)
    scaled = round(v * 100)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 100}.{scaled % 100:02d}"


class _Canvas:
    def __init__(self, box):
        self.box = box
        self.sx = Fraction(SIZE, box[0] + 1)
        self.sy = Fraction(SIZE, box[1] + 1)

    def x(self, u) -> str:
        return _num(MARGIN + u * self.sx)

    def y(self, v) -> str:
        return _num(MARGIN + SIZE - v * self.sy)


def _outline(h: HookModule, box):
    """Corner list of the clipped support, in grid units (cells are unit squares)."""
    X, Y = box[0] + 1, box[1] + 1
    p1, p2 = h.p
    if p1 >= X or p2 >= Y:
        return None
    if h.is_free:
        return [(p1, p2), (X, p2), (X, Y), (p1, Y)]
    q1 = min(h.q[0], X)
    q2 = min(h.q[1], Y)
    return [(p1, p2), (X, p2), (X, q2), (q1, q2), (q1, Y), (p1, Y)]


def render_supports(hook_lists, box, title: str = "") -> str:
    """One SVG showing every hook list in its own colour (overlay when several)."""
    box = (int(box[0]), int(box[1]))
    cv = _Canvas(box)
    W = SIZE + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        f'<rect x="0" y="0" width="{W}" height="{W}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    ticks_x, ticks_y = {0, box[0]}, {0, box[1]}
    for n, hooks in enumerate(hook_lists):
        color = COLORS[n % len(COLORS)]
        out.append(f'<g id="module{n}" fill="{color}" fill-opacity="0.45" stroke="{color}">')
        for h in hooks:
            pts = _outline(h, box)
            if pts is None:
                continue
            ticks_x.update(v for v in (h.p[0], h.q[0]) if v != INF and v <= box[0])
            ticks_y.update(v for v in (h.p[1], h.q[1]) if v != INF and v <= box[1])
            path = " ".join(f"{cv.x(u)},{cv.y(v)}" for u, v in pts)
            out.append(f'<polygon points="{path}"/>')
        out.append("</g>")
    out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" '
               f'fill="none" stroke="black"/>')
    base = MARGIN + SIZE
    for t in sorted(ticks_x):
        out.append(f'<text x="{cv.x(t)}" y="{base + 16}" text-anchor="middle" font-size="10">{t}</text>')
    for t in sorted(ticks_y):
        out.append(f'<text x="{MARGIN - 6}" y="{cv.y(t)}" text-anchor="end" font-size="10">{t}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
