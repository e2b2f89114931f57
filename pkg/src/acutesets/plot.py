"""Deterministic SVG rendering of small point sets (d <= 3)."""

from __future__ import annotations

from typing import Optional, Sequence

from .exact import QVector

SIZE = 400
PAD = 40
# fixed orthographic view for 3D: columns are the screen x and y axes
_VIEW3 = ((0.8660254037844386, 0.0, -0.5), (-0.25, 0.8660254037844386, -0.4330127018922193))


def _project(p: QVector) -> tuple[float, float]:
    c = [float(x) for x in p]
    if len(c) == 1:
        return c[0], 0.0
    if len(c) == 2:
        return c[0], c[1]
    return (
        sum(a * b for a, b in zip(_VIEW3[0], c)),
        sum(a * b for a, b in zip(_VIEW3[1], c)),
    )


def render_svg(points: Sequence[QVector], highlight: Optional[set] = None, title: str = "") -> str:
    if not points:
        raise ValueError("nothing to plot")
    d = points[0].dim
    if d > 3:
        raise ValueError("plotting supports dimension 3 or less, got %d" % d)
    highlight = highlight or set()
    xy = [_project(p) for p in points]
    xs = [a for a, _ in xy]
    ys = [b for _, b in xy]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    k = (SIZE - 2 * PAD) / span
    cx = (max(xs) + min(xs)) / 2
    cy = (max(ys) + min(ys)) / 2

    def tr(a, b):
        return SIZE / 2 + (a - cx) * k, SIZE / 2 - (b - cy) * k

    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (SIZE, SIZE, SIZE, SIZE),
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        out.append('<text x="10" y="20" font-family="monospace" font-size="12">%s</text>' % title)
    for i, (a, b) in enumerate(xy):
        u, v = tr(a, b)
        if i in highlight:
            out.append('<circle class="on-plane" cx="%.3f" cy="%.3f" r="6" fill="none" stroke="#c0392b" stroke-width="2"/>' % (u, v))
        else:
            out.append('<circle class="point" cx="%.3f" cy="%.3f" r="5" fill="#2c3e50"/>' % (u, v))
    out.append("</svg>")
    return "\n".join(out) + "\n"
