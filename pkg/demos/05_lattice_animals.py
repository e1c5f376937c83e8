"""Greedy lattice animals: exact maxima, density scaling, box covers.

N_n is the maximum number of open edges a self-avoiding n-step path from
the origin can collect.  The Monte Carlo ratio E N_n / (n p^(1/d)) stays
bounded over densities p, and any animal is covered by ~2n/l boxes of
radius 2l anchored on a unit-step lattice path.
"""

from fpplab import animal_cover, enumerate_saws, exact_Nn, scaling_ratio
from fpplab.animals import cover_invariants_ok, random_animal

print("self-avoiding walks from the origin (d=2):",
      [sum(1 for _ in enumerate_saws(2, n)) for n in (1, 2, 3, 4)])

open_set = {((0, 0), 0), ((1, 0), 0), ((2, 0), 1)}
print("N_3 with three specific open edges:",
      exact_Nn(2, 3, lambda e: 1 if e in open_set else 0))

print()
print("scaling ratio E N_10 / (10 p^(1/2)), 500 replications:")
for p in (1.0, 0.5, 0.25, 0.125, 0.0625):
    ratio, se = scaling_ratio(2, 10, p, reps=500, seed=0)
    print(f"  p = {p:<7g} ratio = {ratio:.3f} +- {se:.3f}")

print()
animal = random_animal(2, 20, seed=3)
cover = animal_cover(animal, l=4)
print(f"random 20-vertex animal, l = 4: {len(cover.anchors)} anchors "
      f"(= floor(2n/l)+1 = {2 * 19 // 4 + 1})")
print("  anchors:", cover.anchors)
print("  invariants hold:", cover_invariants_ok(animal, cover))
