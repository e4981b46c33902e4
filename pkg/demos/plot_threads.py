"""
Threads, gaps and their metric
==============================

A thread is a segment whose two ends are also joined by a shortcut of a
given width.  Removing gaps keeps the metric but changes which maps
between threads can be Lipschitz.
"""
from fractions import Fraction
from pathlib import Path

from threadskein import build_thread, emit_svg, line

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

# a plain thread: the ends are exactly `width` apart
t = line(1, Fraction(1, 2))
print("d(0, 1)     =", t.distance(0, 1))
print("d(1/10,9/10)=", t.distance(Fraction(1, 10), Fraction(9, 10)))

# the greedy fat-Cantor rule with gap lengths 1/8, 1/16, 1/32
ta = build_thread("half-bound", 3, Fraction(1, 2))
for g in ta.gaps_by_length():
    print("gap", g, "length", g.length)
print("measure", ta.measure())

# more gaps never push the measure below 1/2
deep = build_thread("half-bound", 64, Fraction(1, 2))
print("measure after 64 gaps", deep.measure(), "~", float(deep.measure()))

emit_svg(ta, out / "thread_ta.svg")
