"""Deterministic SVG drawings of threads, threading spaces and skeins.

Rendering is the one place where coordinates become floats; they are
printed with a fixed number of decimals so output bytes are stable.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .attachment import ThreadingSpace
from .exactnum import fmt
from .skein import A, B, BasePoint, SkeinTruncation, Session, address
from .thread import Thread

SEGMENTS = 24


def _f(x: float) -> str:
    return f"{x:.3f}"


def _pieces(t: Thread) -> list[tuple[Fraction, Fraction]]:
    """Closed pieces of ``[0, l]`` between consecutive gaps."""
    out, start = [], Fraction(0)
    for g in t.gaps:
        out.append((start, g.left))
        start = g.right
    out.append((start, t.length))
    return out


def _polyline(points, cls: str, stroke: str = "black") -> str:
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in points)
    return f'<polyline class="{cls}" fill="none" stroke="{stroke}" stroke-width="2" points="{pts}"/>'


def _document(body: list[str], width: int, height: int) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def thread_svg(t: Thread) -> str:
    """The thread as an arc; its two extremes face each other across the width."""
    cx, cy, r = 200.0, 200.0, 150.0
    sweep = 300.0
    start = 90.0 + (360.0 - sweep) / 2

    def at(x: Fraction):
        ang = math.radians(start + sweep * float(x / t.length))
        return cx + r * math.cos(ang), cy + r * math.sin(ang)

    body = [f'<title>thread length {fmt(t.length)} width {fmt(t.width)}</title>']
    for lo, hi in _pieces(t):
        pts = [at(lo + (hi - lo) * Fraction(k, SEGMENTS)) for k in range(SEGMENTS + 1)]
        body.append(_polyline(pts, "piece"))
    (x0, y0), (x1, y1) = at(Fraction(0)), at(t.length)
    body.append(
        f'<line class="width" x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
        f'stroke="gray" stroke-dasharray="4 4"/>'
    )
    body.append(f'<text x="{_f(x0 - 12)}" y="{_f(y0 + 18)}">0</text>')
    body.append(f'<text x="{_f(x1 + 4)}" y="{_f(y1 + 18)}">{fmt(t.length)}</text>')
    return _document(body, 400, 400)


def _bezier(p0, p1, bulge: float, t: float):
    mx, my = (p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    norm = math.hypot(dx, dy) or 1.0
    c = (mx - dy / norm * bulge, my + dx / norm * bulge)
    u = 1 - t
    return (
        u * u * p0[0] + 2 * u * t * c[0] + t * t * p1[0],
        u * u * p0[1] + 2 * u * t * c[1] + t * t * p1[1],
    )


def _bulge(gamma_id: int, level: int) -> float:
    side = 1 if gamma_id % 2 else -1
    return side * (60.0 + 30.0 * (gamma_id // 2)) / (level + 1)


def _thread_curve(p0, p1, t: Thread, bulge: float, cls: str) -> list[str]:
    out = []
    for lo, hi in _pieces(t):
        pts = [_bezier(p0, p1, bulge, float(lo + (hi - lo) * Fraction(k, SEGMENTS))) for k in range(SEGMENTS + 1)]
        out.append(_polyline(pts, cls))
    return out


def _anchor_labels(pa, pb) -> list[str]:
    out = []
    for (x, y), label in ((pa, "A"), (pb, "B")):
        out.append(f'<circle class="anchor" cx="{_f(x)}" cy="{_f(y)}" r="4"/>')
        out.append(f'<text x="{_f(x - 6)}" y="{_f(y - 10)}">{label}</text>')
    return out


def threading_svg(ts: ThreadingSpace) -> str:
    pa, pb = (100.0, 200.0), (500.0, 200.0)
    body = [f"<title>threading space width {fmt(ts.width)}</title>"]
    for gid, t in ts.threads:
        body.extend(_thread_curve(pa, pb, t, _bulge(gid, 0), "piece"))
    body.extend(_anchor_labels(pa, pb))
    return _document(body, 600, 400)


def skein_svg(tr: SkeinTruncation) -> str:
    """Level-1 threads form a bundle between A and B; deeper threads hang between their parents."""
    session = Session()
    pos = {A: (100.0, 300.0), B: (700.0, 300.0)}
    records = {rec.key: rec for rec in tr.threads}

    def place(p):
        if p in pos:
            return pos[p]
        rec = records[p.thread_key]
        p0, p1 = place(p.parents[0]), place(p.parents[1])
        pos[p] = _bezier(p0, p1, _bulge(rec.gamma_id, _level(p) - 1), float(p.coord))
        return pos[p]

    def _level(p):
        return 0 if isinstance(p, BasePoint) else 1 + max(_level(p.parents[0]), _level(p.parents[1]))

    body = [f"<title>skein depth {tr.depth}, {len(tr.points)} points</title>"]
    for rec in tr.threads:
        p0, p1 = place(rec.parents[0]), place(rec.parents[1])
        level = max(_level(rec.parents[0]), _level(rec.parents[1]))
        body.append(f"<!-- {address(rec.parents[0])} .. {address(rec.parents[1])} #{rec.gamma_id} "
                    f"width {fmt(session.distance(*rec.parents))} -->")
        body.extend(_thread_curve(p0, p1, rec.thread, _bulge(rec.gamma_id, level), f"piece level{level + 1}"))
    body.extend(_anchor_labels(pos[A], pos[B]))
    return _document(body, 800, 600)


def emit_svg(obj: Union[Thread, ThreadingSpace, SkeinTruncation], path) -> str:
    if isinstance(obj, Thread):
        text = thread_svg(obj)
    elif isinstance(obj, ThreadingSpace):
        text = threading_svg(obj)
    elif isinstance(obj, SkeinTruncation):
        text = skein_svg(obj)
    else:
        raise TypeError(f"cannot draw {type(obj).__name__}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
