"""
A gap sequence no map can jump
==============================

The diagonal construction picks gap lengths small enough that no thread
built from them maps 2-Lipschitz onto any thread of the family.  Two
independent checks back this up on a finite prefix: a combinatorial
certificate and an exhaustive grid search.
"""
from fractions import Fraction

from threadskein import (
    FamilyThread,
    GammaPrefix,
    brute_force_map_search,
    build_thread,
    check_trace,
    gamma_star_prefix,
    jump_infeasibility,
)

K, eps = Fraction(2), Fraction(1, 4)
family = [FamilyThread.from_rule("half-bound", w) for w in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))]

run = gamma_star_prefix(family, K, eps, 5)
print("gamma* =", [str(g) for g in run.produced])
print("trace re-check:", check_trace(run).label)

# %%
# Each step records the orderings it examined and the gap it selected.
step = run.trace[2]
for sig in step.sigmas:
    print(sig.ordering, "->", sig.selected, [str(s) for s in sig.sweepings])

# %%
# Certificate and brute force, one target per family thread.
for member in family:
    target = member.truncation(5)
    cert = jump_infeasibility(target, run.produced, K, 5)
    source = build_thread(GammaPrefix(run.produced), 5, member.width)
    found = brute_force_map_search(source, target, K, Fraction(1, 64))
    print(f"width {target.width}: {cert.outcome} after {cert.partitions_checked} partitions,",
          "grid search", "NONE" if found is None else "found a map")
