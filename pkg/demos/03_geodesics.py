"""Passage times, geodesics, Geo(x,y) and edge thresholds on a weight field.

Weight fields are seed-addressed: an edge's weight depends only on
(seed, canonical edge), never on evaluation order, so overriding one edge
and re-solving is reproducible.  For dyadic atomic laws the solver is
exact (integer arithmetic), so geodesic ties are resolved exactly.
"""

from fpplab import (
    BoxDomain,
    TwoPoint,
    WeightField,
    d_threshold,
    geo_intersection,
    passage_time,
    some_geodesic,
)

box = BoxDomain((-4, -4), (12, 12))
field = WeightField(box, TwoPoint(1.0, 2.0, 0.5), master_seed=1)
x, y = (0, 0), (8, 0)

tau = passage_time(field, x, y)
path = some_geodesic(field, x, y)
print(f"passage time tau{x}->{y} = {tau:g}")
print(f"one geodesic has {len(path)} edges; first steps: {path[:4]}")

report = geo_intersection(field, x, y)
print(f"edges on some geodesic: {len(report.candidate_edges)}")
print(f"edges on every geodesic (Geo): {len(report.geo_intersection)}")

e = path[0]
d_val = d_threshold(field, x, e, (8, 0))
print(f"threshold for edge {e}: stays on a geodesic while t_e <= {d_val:g}")

capped = field.with_override(e, d_val)
raised = field.with_override(e, d_val + 0.5)
print("  at the threshold, tau =", passage_time(capped, x, y))
print("  just above it,    tau =", passage_time(raised, x, y),
      "(the geodesic routes around the edge)")

removed = field.without_edge(e)
print("  with the edge removed, tau =", passage_time(removed, x, y))
