"""Minimal standalone SVG line plots (no external assets)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

W, H, PAD = 480, 320, 56
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        return [10.0**k for k in range(a, b + 1) if lo <= 10.0**k <= hi] or [lo, hi]
    return list(np.linspace(lo, hi, 5))


def _scale(v, lo, hi, log, a, b):
    if log:
        v, lo, hi = np.log10(v), math.log10(lo), math.log10(hi)
    t = (np.asarray(v, float) - lo) / ((hi - lo) or 1.0)
    return a + t * (b - a)


def panel(series, xlog=False, ylog=False, title="", xlabel="", ylabel="", x0=0, y0=0) -> str:
    """One axes box with polylines; ``series`` is a list of (label, x, y)."""
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    ok = np.isfinite(xs) & np.isfinite(ys)
    if xlog:
        ok &= xs > 0
    if ylog:
        ok &= ys > 0
    xlo, xhi = xs[ok].min(), xs[ok].max()
    ylo, yhi = ys[ok].min(), ys[ok].max()
    if xhi == xlo:
        xhi = xlo * 2 if xlog else xlo + 1
    if yhi == ylo:
        yhi = ylo * 2 if ylog else ylo + 1
    L, R, T, B = x0 + PAD, x0 + W - 16, y0 + 28, y0 + H - PAD
    out = [f'<g font-family="sans-serif" font-size="11">']
    out.append(f'<text x="{x0 + W / 2}" y="{y0 + 16}" text-anchor="middle">{escape(title)}</text>')
    out.append(f'<line x1="{L}" y1="{B}" x2="{R}" y2="{B}" stroke="black"/>')
    out.append(f'<line x1="{L}" y1="{T}" x2="{L}" y2="{B}" stroke="black"/>')
    for t in _ticks(xlo, xhi, xlog):
        px = float(_scale(t, xlo, xhi, xlog, L, R))
        out.append(f'<line x1="{px:.2f}" y1="{B}" x2="{px:.2f}" y2="{B + 4}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{B + 16}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(ylo, yhi, ylog):
        py = float(_scale(t, ylo, yhi, ylog, B, T))
        out.append(f'<line x1="{L - 4}" y1="{py:.2f}" x2="{L}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{L - 6}" y="{py + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{(L + R) / 2}" y="{B + 34}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="{x0 + 14}" y="{(T + B) / 2}" text-anchor="middle" transform="rotate(-90 {x0 + 14} {(T + B) / 2})">{escape(ylabel)}</text>'
    )
    for i, (label, x, y) in enumerate(series):
        x, y = np.asarray(x, float), np.asarray(y, float)
        m = np.isfinite(x) & np.isfinite(y)
        if xlog:
            m &= x > 0
        if ylog:
            m &= y > 0
        if not m.any():
            continue
        px = _scale(x[m], xlo, xhi, xlog, L, R)
        py = _scale(y[m], ylo, yhi, ylog, B, T)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        c = COLORS[i % len(COLORS)]
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{pts}"/>')
        if label:
            out.append(f'<text x="{R - 4}" y="{T + 12 + 13 * i}" text-anchor="end" fill="{c}">{escape(label)}</text>')
    out.append("</g>")
    return "\n".join(out)


def document(panels: list[str], columns: int = 2) -> str:
    rows = math.ceil(len(panels) / columns)
    w, h = W * min(columns, len(panels)), H * rows
    head = f'<?xml version="1.0" encoding="UTF-8"?>\n<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">'
    body = '<rect width="100%" height="100%" fill="white"/>'
    return "\n".join([head, body, *panels, "</svg>"]) + "\n"


def plot(series_panels, columns=2) -> str:
    """``series_panels``: list of dicts with keys for :func:`panel`; laid out on a grid."""
    parts = []
    for i, kw in enumerate(series_panels):
        parts.append(panel(x0=W * (i % columns), y0=H * (i // columns), **kw))
    return document(parts, columns)
