"""Rank-agreement scatter plots emitted as standalone SVG.

No plotting library: the figures are simple enough that writing the SVG
elements directly keeps the package dependency-free and the output
byte-stable across environments.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

_WIDTH = 480
_HEIGHT = 480
_MARGIN = 70


def _fmt(value):
    """Fixed short decimal form so output never varies by platform."""
    return f"{value:.4f}".rstrip("0").rstrip(".")


def rank_scatter_svg(x_ranks, y_ranks, labels, x_label, y_label, title):
    """An SVG scatter of one ranking against another.

    Both axes run from rank 1 (best) at the origin outward, a dashed
    diagonal marks perfect agreement, and each point carries its feature
    name. Returns the SVG document as a string.
    """
    n = len(labels)
    if not (len(x_ranks) == len(y_ranks) == n) or n == 0:
        raise ValueError("ranks and labels must be equally sized and non-empty")
    lo, hi = 0.5, n + 0.5
    span = hi - lo
    inner_w = _WIDTH - 2 * _MARGIN
    inner_h = _HEIGHT - 2 * _MARGIN

    def sx(r):
        return _MARGIN + (r - lo) / span * inner_w

    def sy(r):
        return _HEIGHT - _MARGIN - (r - lo) / span * inner_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2}" y="30" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{escape(title)}</text>',
    ]
    # axes
    parts.append(
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>'
    )
    # integer rank ticks
    for r in range(1, n + 1):
        parts.append(
            f'<text x="{_fmt(sx(r))}" y="{_HEIGHT - _MARGIN + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">{r}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN - 8}" y="{_fmt(sy(r) + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{r}</text>'
        )
    # perfect-agreement diagonal
    parts.append(
        f'<line x1="{_fmt(sx(1))}" y1="{_fmt(sy(1))}" x2="{_fmt(sx(n))}" '
        f'y2="{_fmt(sy(n))}" stroke="gray" stroke-dasharray="4 3"/>'
    )
    for xr, yr, label in zip(x_ranks, y_ranks, labels):
        cx, cy = sx(float(xr)), sy(float(yr))
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="steelblue"/>'
        )
        parts.append(
            f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" font-family="sans-serif" '
            f'font-size="10">{escape(str(label))}</text>'
        )
    parts.append(
        f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="20" y="{_HEIGHT / 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 20 {_HEIGHT / 2})">{escape(y_label)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
