"""Projecting the final result from a partial mid-election tally.

Historical attendance observations become per-area cumulative turnout
curves; partial counts are scaled by the reciprocal of the expected
counted fraction at the current time.  The win probability is a
normal-approximation margin test, labeled as a heuristic.
"""

from votekit.elections import TallySnapshot
from votekit.projection import build_curves_from_history, curve_fraction, project

# raw historical observations: (area, fraction of day, fraction of final votes)
history = [
    ("COL-05", 0.25, 0.15), ("COL-05", 0.50, 0.45), ("COL-05", 0.75, 0.80),
    ("KAN-01", 0.25, 0.30), ("KAN-01", 0.50, 0.60), ("KAN-01", 0.75, 0.85),
]
curves = build_curves_from_history(history)
for area, curve in curves.items():
    print(f"{area} curve: {curve.points}")

# mid-morning partial counts (urban COL-05 fills up late, KAN-01 early)
per_area = {
    ("COL-05", "LOTUS"): 900, ("COL-05", "STAR"): 700,
    ("KAN-01", "LOTUS"): 400, ("KAN-01", "STAR"): 900,
}
counts = {"LOTUS": 1300, "STAR": 1600}
partial = TallySnapshot("demo-election", as_of=0, counts=counts,
                        per_area_counts=per_area, total=2900)

print(f"\ncounted so far: {counts}")
for t in (0.25, 0.5, 0.75, 1.0):
    result = project(partial, curves, t, ["LOTUS", "STAR"])
    fractions = {a: round(curve_fraction(curves[a], t), 3) for a in curves}
    print(f"t={t:4.2f} counted fractions {fractions} -> "
          f"projected {{'LOTUS': {result.projected_counts['LOTUS']:8.1f}, "
          f"'STAR': {result.projected_counts['STAR']:8.1f}}} "
          f"leader {result.leader} (win prob {result.win_probability:.3f})")

print("\nat t=1.0 the projection equals the partial tally exactly:",
      project(partial, curves, 1.0, ["LOTUS", "STAR"]).projected_counts ==
      {"LOTUS": 1300.0, "STAR": 1600.0})
