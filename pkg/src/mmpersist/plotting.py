"""Dependency-free SVG rendering of diagrams, barcodes and histograms.

Output bytes depend only on the input data and options: fixed canvas,
fixed number formatting, no timestamps or random ids.
"""

from __future__ import annotations

import enum
import math
from collections import Counter

from .diagram import DeathHistogram
from .persistence import PersistenceDiagram

__all__ = ["PlotKind", "emit_svg"]

WIDTH = 480
HEIGHT = 480
MARGIN = 56
DIM_COLORS = {0: "#1f77b4", 1: "#d62728"}


class PlotKind(enum.Enum):
    DIAGRAM = "pd"
    BARCODE = "barcode"
    HISTOGRAM = "hist"


def _esc(text: str) -> str:
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _f(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return f"{v:.3g}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    out = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        out.append(round(first + k * step, 10))
        k += 1
    return out


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        ]
        if title:
            self.text(WIDTH / 2, 28, title, size=15, anchor="middle")
        self.left, self.right = MARGIN, WIDTH - MARGIN / 2
        self.top, self.bottom = MARGIN, HEIGHT - MARGIN

    def add(self, element: str):
        self.parts.append(element)

    def text(self, x, y, s, size=11, anchor="start", color="#222222"):
        self.add(f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" text-anchor="{anchor}" '
                 f'fill="{color}">{_esc(s)}</text>')

    def line(self, x1, y1, x2, y2, color="#444444", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                 f'stroke="{color}" stroke-width="{width}"{extra}/>')

    def frame(self):
        self.add(f'<rect x="{_f(self.left)}" y="{_f(self.top)}" '
                 f'width="{_f(self.right - self.left)}" height="{_f(self.bottom - self.top)}" '
                 f'fill="none" stroke="#444444" stroke-width="1"/>')

    def finish(self) -> bytes:
        return ("\n".join(self.parts + ["</svg>"]) + "\n").encode("utf-8")


def _value_range(pd: PersistenceDiagram, options):
    if "range" in options:
        return tuple(options["range"])
    if pd.scale != 1:
        return 0.0, 1.0
    vals = [b for _, b, _ in pd.intervals] + [d for _, _, d in pd.intervals if not math.isinf(d)]
    if not vals:
        return 0.0, 1.0
    lo, hi = min(vals), max(vals)
    if hi == lo:
        hi = lo + 1
    return float(min(0, lo)), float(hi)


def _legend(cv: _Canvas, dims):
    x = cv.left + 8
    for k, q in enumerate(dims):
        y = cv.top + 14 + 16 * k
        cv.add(f'<circle cx="{_f(x)}" cy="{_f(y - 4)}" r="4" fill="{DIM_COLORS[q]}"/>')
        cv.text(x + 9, y, f"H{q}", size=11)


def _diagram(pd: PersistenceDiagram, options) -> bytes:
    dims = options.get("dims", (0, 1))
    cv = _Canvas(options.get("title", "Persistence diagram"))
    lo, hi = _value_range(pd, options)
    span = hi - lo
    # infinite deaths are drawn on a band above the plotting range
    inf_y = cv.top + 12
    plot_top = cv.top + 28
    sx = lambda v: cv.left + (v - lo) / span * (cv.right - cv.left)
    sy = lambda v: cv.bottom - (v - lo) / span * (cv.bottom - plot_top)
    cv.frame()
    for t in _ticks(lo, hi):
        cv.line(sx(t), cv.bottom, sx(t), cv.bottom + 4)
        cv.text(sx(t), cv.bottom + 16, _label(t), size=10, anchor="middle")
        cv.line(cv.left - 4, sy(t), cv.left, sy(t))
        cv.text(cv.left - 7, sy(t) + 3, _label(t), size=10, anchor="end")
    cv.line(sx(lo), sy(lo), sx(hi), sy(hi), color="#888888", dash="4 3")
    cv.line(cv.left, inf_y, cv.right, inf_y, color="#bbbbbb", dash="2 3")
    cv.text(cv.left - 7, inf_y + 3, "inf", size=10, anchor="end")
    cv.text((cv.left + cv.right) / 2, HEIGHT - 14, "birth", size=12, anchor="middle")
    cv.add(f'<text x="16" y="{_f((cv.top + cv.bottom) / 2)}" font-size="12" text-anchor="middle" '
           f'transform="rotate(-90 16 {_f((cv.top + cv.bottom) / 2)})">death</text>')

    shown = [iv for iv in pd.intervals if iv[0] in dims]
    if not shown:
        cv.text((cv.left + cv.right) / 2, (cv.top + cv.bottom) / 2, "no intervals",
                size=12, anchor="middle", color="#888888")
    for (q, b, d), mult in sorted(Counter(shown).items()):
        x = sx(b)
        y = inf_y if math.isinf(d) else sy(d)
        r = 3.5 if mult == 1 else 5.5
        cv.add(f'<circle class="point" data-mult="{mult}" cx="{_f(x)}" cy="{_f(y)}" r="{r}" fill="{DIM_COLORS[q]}" '
               f'fill-opacity="0.8" stroke="#000000" stroke-width="0.4"/>')
        if mult > 1:
            cv.text(x + 7, y - 5, f"x{mult}", size=10, color=DIM_COLORS[q])
    _legend(cv, [q for q in dims if q in DIM_COLORS])
    return cv.finish()


def _barcode(pd: PersistenceDiagram, options) -> bytes:
    dims = options.get("dims", (0, 1))
    cv = _Canvas(options.get("title", "Persistence barcode"))
    lo, hi = _value_range(pd, options)
    span = hi - lo
    bar_right = cv.right - 14
    sx = lambda v: cv.left + (v - lo) / span * (bar_right - cv.left)
    cv.frame()
    for t in _ticks(lo, hi):
        cv.line(sx(t), cv.bottom, sx(t), cv.bottom + 4)
        cv.text(sx(t), cv.bottom + 16, _label(t), size=10, anchor="middle")
    cv.text((cv.left + cv.right) / 2, HEIGHT - 14, "filtration value", size=12, anchor="middle")

    bars = [iv for iv in pd.intervals if iv[0] in dims]
    if not bars:
        cv.text((cv.left + cv.right) / 2, (cv.top + cv.bottom) / 2, "no intervals",
                size=12, anchor="middle", color="#888888")
        return cv.finish()
    pitch = min(14.0, (cv.bottom - cv.top - 12) / len(bars))
    thick = max(1.0, pitch * 0.6)
    y = cv.top + 6 + pitch / 2
    current = None
    for q, b, d in bars:
        if q != current:
            current = q
            cv.text(cv.right + 2, y + 3, f"H{q}", size=10, color=DIM_COLORS[q])
        x2 = cv.right - 4 if math.isinf(d) else sx(d)
        cv.add(f'<rect class="bar" x="{_f(sx(b))}" y="{_f(y - thick / 2)}" width="{_f(max(x2 - sx(b), 0.5))}" '
               f'height="{_f(thick)}" fill="{DIM_COLORS[q]}"/>')
        if math.isinf(d):
            cv.add(f'<polygon points="{_f(x2)},{_f(y - thick)} {_f(x2 + 5)},{_f(y)} '
                   f'{_f(x2)},{_f(y + thick)}" fill="{DIM_COLORS[q]}"/>')
        y += pitch
    return cv.finish()


def _histogram(hist: DeathHistogram, options) -> bytes:
    cv = _Canvas(options.get("title", "Death values"))
    cv.frame()
    cv.text((cv.left + cv.right) / 2, HEIGHT - 14, "death value", size=12, anchor="middle")
    bins = list(hist.bins)
    if not bins and not hist.overflow:
        cv.text((cv.left + cv.right) / 2, (cv.top + cv.bottom) / 2, "no deaths",
                size=12, anchor="middle", color="#888888")
        return cv.finish()
    slots = len(bins) + (1 if hist.overflow else 0)
    top = max([c for _, c in bins] + [hist.overflow, 1])
    slot_w = (cv.right - cv.left) / slots
    sy = lambda c: cv.bottom - c / top * (cv.bottom - cv.top - 10)
    for t in _ticks(0, top):
        if float(t).is_integer():
            cv.line(cv.left - 4, sy(t), cv.left, sy(t))
            cv.text(cv.left - 7, sy(t) + 3, _label(t), size=10, anchor="end")
    entries = [(_label(edge), count, "#4c72b0") for edge, count in bins]
    if hist.overflow:
        entries.append(("inf", hist.overflow, "#999999"))
    label_every = max(1, math.ceil(slots / 12))
    for k, (label, count, color) in enumerate(entries):
        x = cv.left + k * slot_w
        if count:
            cv.add(f'<rect class="bin" x="{_f(x + 1)}" y="{_f(sy(count))}" width="{_f(max(slot_w - 2, 0.5))}" '
                   f'height="{_f(cv.bottom - sy(count))}" fill="{color}"/>')
        if k % label_every == 0 or label == "inf":
            cv.text(x + slot_w / 2, cv.bottom + 16, label, size=10, anchor="middle")
    return cv.finish()


def emit_svg(kind, data, options: dict | None = None) -> bytes:
    """Render ``data`` as an SVG document.

    ``kind`` is a :class:`PlotKind` (or its value: ``"pd"``, ``"barcode"``,
    ``"hist"``).  Diagrams and barcodes take a :class:`PersistenceDiagram`,
    histograms a :class:`DeathHistogram`.  Repeated intervals are drawn as
    one enlarged point marked with their multiplicity in a diagram, and as
    separate bars in a barcode.
    """
    kind = PlotKind(kind)
    options = dict(options or {})
    if kind is PlotKind.HISTOGRAM:
        if not isinstance(data, DeathHistogram):
            raise TypeError("histogram plots need a DeathHistogram")
        return _histogram(data, options)
    if not isinstance(data, PersistenceDiagram):
        raise TypeError(f"{kind.value} plots need a PersistenceDiagram")
    if kind is PlotKind.DIAGRAM:
        return _diagram(data, options)
    return _barcode(data, options)
