"""Minimal self-contained SVG emitter for success-rate curves.

No external assets, stylesheets, or fonts beyond the generic serif family;
the output is a single standalone .svg file.
"""

from __future__ import annotations

from typing import Sequence

_WIDTH = 640
_HEIGHT = 480
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 30
_MARGIN_TOP = 30
_MARGIN_BOTTOM = 60

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def success_curves_svg(
    curves: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    x_label: str = "k/n",
    y_label: str = "success rate",
) -> str:
    """Render one polyline per (label, [(k_over_n, rate), ...]) curve."""
    if not curves or all(len(pts) == 0 for _, pts in curves):
        raise ValueError("no curve data to plot")
    xs = [x for _, pts in curves for x, _ in pts]
    x_min, x_max = min(xs), max(xs)
    if x_max == x_min:
        x_max = x_min + 1e-9
    y_min, y_max = 0.0, 1.0

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w

    def py(y: float) -> float:
        return _MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        # axes
        f'<line x1="{_MARGIN_LEFT}" y1="{py(0)}" x2="{_WIDTH - _MARGIN_RIGHT}" y2="{py(0)}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{py(0)}" x2="{_MARGIN_LEFT}" y2="{_MARGIN_TOP}" '
        'stroke="black" stroke-width="1"/>',
    ]

    # y ticks at 0, 0.25, ..., 1.0
    for i in range(5):
        y = i / 4.0
        parts.append(
            f'<line x1="{_MARGIN_LEFT - 5}" y1="{py(y)}" x2="{_MARGIN_LEFT}" y2="{py(y)}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 10}" y="{py(y) + 4}" text-anchor="end" '
            f'font-family="serif" font-size="12">{_fmt(y)}</text>'
        )
    # x ticks: 6 evenly spaced
    for i in range(6):
        x = x_min + i / 5.0 * (x_max - x_min)
        parts.append(
            f'<line x1="{px(x)}" y1="{py(0)}" x2="{px(x)}" y2="{py(0) + 5}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px(x)}" y="{py(0) + 20}" text-anchor="middle" '
            f'font-family="serif" font-size="12">{_fmt(round(x, 4))}</text>'
        )

    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2}" y="{_HEIGHT - 15}" text-anchor="middle" '
        f'font-family="serif" font-size="14">{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2}" text-anchor="middle" '
        f'font-family="serif" font-size="14" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2})">{y_label}</text>'
    )

    for i, (label, pts) in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        pts = sorted(pts)
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        legend_y = _MARGIN_TOP + 18 + 18 * i
        legend_x = _WIDTH - _MARGIN_RIGHT - 170
        parts.append(
            f'<line x1="{legend_x}" y1="{legend_y - 4}" x2="{legend_x + 24}" y2="{legend_y - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 30}" y="{legend_y}" font-family="serif" '
            f'font-size="12">{label}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_success_curves_svg(curves, path: str, **kwargs) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(success_curves_svg(curves, **kwargs))
