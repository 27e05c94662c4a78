"""Minimal SVG line plots: stacked panels, axes with ticks, legend."""

from dataclasses import dataclass, field
import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
WIDTH = 640
PANEL_HEIGHT = 300
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 30, 45


@dataclass
class Series:
    label: str
    segments: list  # list of (xs, ys) polylines
    color: str = ""
    dashed: bool = False
    markers: bool = False


@dataclass
class Panel:
    xlabel: str
    ylabel: str
    series: list = field(default_factory=list)
    title: str = ""


def nice_ticks(lo, hi, target=5):
    """Round tick positions covering ``[lo, hi]``."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return [0.0]
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v):
    return f"{v:.6g}"


def _bounds(panel):
    xs, ys = [], []
    for s in panel.series:
        for sx, sy in s.segments:
            xs.extend(x for x in sx if math.isfinite(x))
            ys.extend(y for y in sy if math.isfinite(y))
    if not xs:
        return 0.0, 1.0, 0.0, 1.0
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        pad = max(abs(y0), 1.0) * 0.5
        y0, y1 = y0 - pad, y1 + pad
    pad = 0.05 * (y1 - y0)
    return x0, x1, y0 - pad, y1 + pad


def render(panels, title=""):
    """SVG document text for vertically stacked panels."""
    height = MARGIN_T + len(panels) * (PANEL_HEIGHT + MARGIN_B) + 10
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
           f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle" font-size="14">'
                   f'{escape(title)}</text>')
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    for idx, panel in enumerate(panels):
        top = MARGIN_T + idx * (PANEL_HEIGHT + MARGIN_B)
        x0, x1, y0, y1 = _bounds(panel)

        def px(x):
            return MARGIN_L + (x - x0) / (x1 - x0) * plot_w

        def py(y):
            return top + PANEL_HEIGHT - (y - y0) / (y1 - y0) * PANEL_HEIGHT

        out.append(f'<rect x="{MARGIN_L}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" '
                   'fill="none" stroke="black"/>')
        for t in nice_ticks(x0, x1):
            if x0 <= t <= x1:
                X = px(t)
                out.append(f'<line x1="{X:.2f}" y1="{top + PANEL_HEIGHT}" x2="{X:.2f}" '
                           f'y2="{top + PANEL_HEIGHT + 5}" stroke="black"/>')
                out.append(f'<text x="{X:.2f}" y="{top + PANEL_HEIGHT + 18}" '
                           f'text-anchor="middle">{_fmt(t)}</text>')
        for t in nice_ticks(y0, y1):
            if y0 <= t <= y1:
                Y = py(t)
                out.append(f'<line x1="{MARGIN_L - 5}" y1="{Y:.2f}" x2="{MARGIN_L}" '
                           f'y2="{Y:.2f}" stroke="black"/>')
                out.append(f'<line x1="{MARGIN_L}" y1="{Y:.2f}" x2="{MARGIN_L + plot_w}" '
                           f'y2="{Y:.2f}" stroke="#dddddd"/>')
                out.append(f'<text x="{MARGIN_L - 8}" y="{Y + 4:.2f}" '
                           f'text-anchor="end">{_fmt(t)}</text>')
        out.append(f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{top + PANEL_HEIGHT + 36}" '
                   f'text-anchor="middle">{escape(panel.xlabel)}</text>')
        out.append(f'<text x="16" y="{top + PANEL_HEIGHT / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {top + PANEL_HEIGHT / 2:.1f})">'
                   f'{escape(panel.ylabel)}</text>')
        if panel.title:
            out.append(f'<text x="{MARGIN_L + 4}" y="{top - 6}">{escape(panel.title)}</text>')
        out.append(f'<clipPath id="clip{idx}"><rect x="{MARGIN_L}" y="{top}" '
                   f'width="{plot_w}" height="{PANEL_HEIGHT}"/></clipPath>')
        out.append(f'<g clip-path="url(#clip{idx})">')
        for k, s in enumerate(panel.series):
            color = s.color or PALETTE[k % len(PALETTE)]
            dash = ' stroke-dasharray="6 3"' if s.dashed else ""
            for sx, sy in s.segments:
                pts = [(px(x), py(y)) for x, y in zip(sx, sy)
                       if math.isfinite(x) and math.isfinite(y)]
                if s.markers:
                    for X, Y in pts:
                        out.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="1.5" fill="{color}"/>')
                elif len(pts) > 1:
                    d = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in pts)
                    out.append(f'<polyline points="{d}" fill="none" stroke="{color}" '
                               f'stroke-width="1.3"{dash}/>')
        out.append("</g>")
        # legend
        lx = MARGIN_L + plot_w + 12
        for k, s in enumerate(panel.series):
            color = s.color or PALETTE[k % len(PALETTE)]
            ly = top + 14 + 18 * k
            dash = ' stroke-dasharray="6 3"' if s.dashed else ""
            out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" '
                       f'stroke-width="2"{dash}/>')
            out.append(f'<text x="{lx + 28}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
