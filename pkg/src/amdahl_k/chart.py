"""Bar charts of max(k) as hand-written SVG or plain-text bars.

The SVG writer emits no timestamps, ids or random hashes, so identical
input yields identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import DomainError


@dataclass(frozen=True)
class ChartSpec:
    entries: tuple[tuple[str, float], ...]
    title: str = "Specialization coefficient max(k) by algorithm"
    y_label: str = "max(k)"

    def __post_init__(self):
        entries = tuple((str(lbl), float(v)) for lbl, v in self.entries)
        if not entries:
            raise DomainError("chart needs at least one entry")
        for lbl, v in entries:
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"bar {lbl!r} has invalid value {v!r}")
        object.__setattr__(self, "entries", entries)

    @property
    def vmax(self) -> float:
        return max(v for _, v in self.entries)


def _nice_step(vmax):
    raw = vmax / 5 if vmax > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def render_svg(spec: ChartSpec, width=640, height=400) -> str:
    left, right, top, bottom = 60, 20, 40, 50
    plot_w = width - left - right
    plot_h = height - top - bottom
    step = _nice_step(spec.vmax)
    y_top = step * math.ceil(spec.vmax / step) if spec.vmax > 0 else step

    def y_of(v):
        return top + plot_h * (1 - v / y_top)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="22" text-anchor="middle" font-size="15">{escape(spec.title)}</text>',
    ]
    n_ticks = int(round(y_top / step))
    for i in range(n_ticks + 1):
        v = i * step
        y = y_of(v)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{width - right}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">{v:g}</text>')
    out.append(
        f'<text x="16" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">{escape(spec.y_label)}</text>'
    )

    slot = plot_w / len(spec.entries)
    bar_w = slot * 0.6
    for i, (label, value) in enumerate(spec.entries):
        x = left + i * slot + (slot - bar_w) / 2
        y = y_of(value)
        h = top + plot_h - y
        out.append(
            f'<rect class="bar" x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" height="{h:.2f}" '
            f'fill="#4c72b0" data-label="{escape(label)}" data-value="{value!r}"/>'
        )
        out.append(f'<text x="{x + bar_w / 2:.2f}" y="{y - 5:.2f}" text-anchor="middle">{value:.4f}</text>')
        out.append(
            f'<text x="{x + bar_w / 2:.2f}" y="{top + plot_h + 18:.2f}" text-anchor="middle">{escape(label)}</text>'
        )
    out.append(f'<line x1="{left}" y1="{top + plot_h}" x2="{width - right}" y2="{top + plot_h}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_ascii(spec: ChartSpec, width=50) -> str:
    pad = max(len(lbl) for lbl, _ in spec.entries)
    lines = [spec.title]
    for label, value in spec.entries:
        n = int(round(width * value / spec.vmax)) if spec.vmax > 0 else 0
        lines.append(f"{label:<{pad}} | {'#' * n:<{width}} {value:.4f}")
    return "\n".join(lines) + "\n"
