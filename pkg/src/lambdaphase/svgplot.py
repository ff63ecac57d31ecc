"""Minimal static SVG line plots, one polyline per series.

Hand-rolled on purpose: the output is a deterministic function of the
data, with no timestamps or library-version metadata.
"""

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#17becf")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def write_line_plot(path, x, series, title="", xlabel="", ylabel="",
                    width=900, height=480):
    """Write a line plot to ``path``.

    ``series`` is a sequence of (label, y-array) pairs drawn over the
    common abscissa ``x``.  The y range is padded a little and always
    includes zero, which suits probability curves.
    """
    x = np.asarray(x, dtype=float)
    if len(series) == 0:
        raise ValueError("need at least one series to plot")
    margin_left, margin_right, margin_top, margin_bottom = 64, 150, 36, 48
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    ymin = min(0.0, min(float(np.min(y)) for _, y in series))
    ymax = max(float(np.max(y)) for _, y in series)
    if ymax <= ymin:
        ymax = ymin + 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad
    xmin, xmax = float(x[0]), float(x[-1])
    if xmax <= xmin:
        xmax = xmin + 1.0

    def sx(v):
        return margin_left + (v - xmin) / (xmax - xmin) * plot_w

    def sy(v):
        return margin_top + (ymax - v) / (ymax - ymin) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin_left}" y="{margin_top}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="15">{title}</text>')

    n_ticks = 5
    for k in range(n_ticks + 1):
        xv = xmin + (xmax - xmin) * k / n_ticks
        px = sx(xv)
        parts.append(f'<line x1="{_fmt(px)}" y1="{margin_top + plot_h}" '
                     f'x2="{_fmt(px)}" y2="{margin_top + plot_h + 5}" stroke="#333"/>')
        parts.append(f'<text x="{_fmt(px)}" y="{margin_top + plot_h + 20}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{xv:.3g}</text>')
        yv = ymin + (ymax - ymin) * k / n_ticks
        py = sy(yv)
        parts.append(f'<line x1="{margin_left - 5}" y1="{_fmt(py)}" '
                     f'x2="{margin_left}" y2="{_fmt(py)}" stroke="#333"/>')
        parts.append(f'<text x="{margin_left - 8}" y="{_fmt(py + 4)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{yv:.3g}</text>')
    if xlabel:
        parts.append(f'<text x="{margin_left + plot_w / 2:.1f}" y="{height - 10}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="13">{xlabel}</text>')
    if ylabel:
        yx, yy = 16, margin_top + plot_h / 2
        parts.append(f'<text x="{yx}" y="{yy:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="13" '
                     f'transform="rotate(-90 {yx} {yy:.1f})">{ylabel}</text>')

    for k, (label, y) in enumerate(series):
        y = np.asarray(y, dtype=float)
        color = PALETTE[k % len(PALETTE)]
        points = " ".join(f"{_fmt(sx(xv))},{_fmt(sy(yv))}" for xv, yv in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.3" points="{points}"/>')
        ly = margin_top + 16 + 18 * k
        lx = margin_left + plot_w + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
                     f'font-size="12">{label}</text>')

    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(parts) + "\n")
