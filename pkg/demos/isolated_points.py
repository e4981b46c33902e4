"""
Why an isolated point blocks Lipschitz retractions
==================================================

A retraction onto {A, B} must send a thread joining A to B across the
split somewhere.  With every gap shorter than eps / K the crossing step is
too short to be K-Lipschitz.
"""
import itertools
from fractions import Fraction

from threadskein import A, B, SkeinConfig, build_skein, line
from threadskein.lipmap import PLMap, lip_const, separation_violation
from threadskein.skein import isolated_point_obstruction

tr = build_skein(SkeinConfig(depth=1))
K = Fraction(2)
recipe = isolated_point_obstruction(tr, [A, B], A, K)
print("eps", recipe.eps, "gap budget", recipe.gap_budget)

domain = recipe.instantiate(3, recipe.eps)
print("gaps", [str(g) for g in domain.gaps])

support = domain.sample_points(Fraction(1, 8))
codomain = line(1, recipe.eps)
worst, witnessed = None, 0
for bits in itertools.product((0, 1), repeat=len(support) - 2):
    F = PLMap(domain, codomain, tuple(zip(support, (0, *bits, 1))))
    if separation_violation(F, 0, recipe.eps, K, in_s2=lambda v: v == 1) is not None:
        witnessed += 1
    worst = lip_const(F) if worst is None else min(worst, lip_const(F))
print(witnessed, "crossing maps, each with a short step that jumps eps")
print("smallest Lipschitz constant of a crossing map:", worst, "> K =", K)
