"""
Distances and ancestors in a finite skein
=========================================

Starting from two points at distance 1/2, every close pair gets new
threads attached.  Distances are computed by descending to parents;
near a lower level the nearest lower point is a well defined ancestor.
"""
import itertools
from fractions import Fraction
from pathlib import Path

from threadskein import A, B, SkeinConfig, address, ancestor, build_skein, emit_svg, in_ball, skein_distance
from threadskein import chain, stability_report

tr = build_skein(SkeinConfig(depth=2))
print(len(tr.points), "points in generations", [len(g) for g in tr.generations])

q = next(x for x in tr.generations[2] if x.coord == Fraction(1, 16))
print(address(q))
print("d(q, A) =", skein_distance(tr, q, A))
print("d(q, B) =", skein_distance(tr, q, B))
print("chain:", " -> ".join(address(x) for x in chain(tr, q, B)))

# %%
# Inside the 1/8 ball around Sk(1) the nearest-point map is a retraction
# and distances split into three exact pieces.
ball = in_ball(tr, 1)
print(len(ball), "points near Sk(1); ancestor of q:", address(ancestor(tr, q, 1)))
print(stability_report(tr, 1, itertools.combinations(ball, 2)))

emit_svg(build_skein(SkeinConfig(depth=1)), Path(__file__).with_name("output") / "skein_depth1.svg")
