"""Mid-election result projection from partial tallies.

Ratio estimation: each area's counted votes are scaled by the reciprocal
of that area's expected counted fraction at the current time (from its
historical turnout curve), then summed.  The win probability is a
normal-approximation margin test on the counted top-two shares; it is a
heuristic confidence, not a calibrated posterior, and the output labels
it as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elections import TallySnapshot
from .errors import EmptyTally, MalformedCurve, MissingCurve, TooFewPoints

PROJECTION_METHOD = "ratio+normal-approx"

# Curve fractions are floored here to keep 1/fraction finite in the first
# minutes of an election.
MIN_CURVE_FRACTION = 0.01


@dataclass(frozen=True)
class TurnoutCurve:
    """Cumulative fraction of final votes cast as a function of day fraction."""

    area_code: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise MalformedCurve("curve needs at least 2 points")
        times = [t for t, _ in self.points]
        cumulative = [c for _, c in self.points]
        if any(not (0.0 <= t <= 1.0) or not (0.0 <= c <= 1.0) for t, c in self.points):
            raise MalformedCurve("curve points must lie in the unit square")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise MalformedCurve("time fractions must be strictly increasing")
        if any(b < a for a, b in zip(cumulative, cumulative[1:])):
            raise MalformedCurve("cumulative fractions must be non-decreasing")
        if times[0] != 0.0:
            raise MalformedCurve("first point must be at time 0.0")
        if self.points[-1] != (1.0, 1.0):
            raise MalformedCurve("last point must be (1.0, 1.0)")


@dataclass(frozen=True)
class Projection:
    election_id: str
    as_of_fraction: float
    projected_counts: dict[str, float]
    projected_total: float
    leader: str
    win_probability: float

    def as_document(self) -> dict:
        return {
            "election_id": self.election_id,
            "method": PROJECTION_METHOD,
            "as_of_fraction": self.as_of_fraction,
            "projected_counts": [
                {"candidate_id": cid, "votes": round(votes, 1)}
                for cid, votes in sorted(self.projected_counts.items())
            ],
            "projected_total": round(self.projected_total, 1),
            "leader": self.leader,
            "win_probability": self.win_probability,
        }


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the classic five-term rational approximation
    (Abramowitz & Stegun 26.2.17), absolute error below 7.5e-8."""
    if x < 0.0:
        return 1.0 - normal_cdf(-x)
    t = 1.0 / (1.0 + 0.2316419 * x)
    poly = t * (
        0.319381530
        + t * (-0.356563782 + t * (1.781477937 + t * (-1.821255978 + t * 1.330274429)))
    )
    density = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return 1.0 - density * poly


def curve_fraction(curve: TurnoutCurve, t: float) -> float:
    """Linear interpolation of the cumulative fraction, floored at 0.01.

    Exact grid hits return the stored value with no arithmetic, so the
    projection-at-close identity (scale factor exactly 1 at t = 1.0)
    holds without tolerance.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time fraction {t} outside [0, 1]")
    points = curve.points
    if t <= points[0][0]:
        value = points[0][1]
    else:
        value = points[-1][1]
        for (t0, c0), (t1, c1) in zip(points, points[1:]):
            if t <= t1:
                value = c1 if t == t1 else c0 + (c1 - c0) * (t - t0) / (t1 - t0)
                break
    return max(value, MIN_CURVE_FRACTION)


def win_probability(counts: dict[str, int | float]) -> float:
    """Margin test on the top-two counted shares.

    With n counted votes and shares p1 >= p2, the margin's standard error
    is sqrt((p1 + p2 - (p1 - p2)^2) / n) and the probability is
    Phi((p1 - p2) / se).  A tie is 0.5 exactly; an unopposed leader
    (p2 = 0) with any votes is 1.0.
    """
    n = sum(counts.values())
    if n <= 0:
        raise EmptyTally("no counted votes")
    shares = sorted((votes / n for votes in counts.values()), reverse=True)
    p1 = shares[0]
    p2 = shares[1] if len(shares) > 1 else 0.0
    if p1 == p2:
        return 0.5
    if p2 == 0.0:
        return 1.0
    se = math.sqrt((p1 + p2 - (p1 - p2) ** 2) / n)
    return normal_cdf((p1 - p2) / se)


def project(
    partial: TallySnapshot,
    curves: dict[str, TurnoutCurve],
    t: float,
    candidate_order: list[str],
) -> Projection:
    if not 0.0 < t <= 1.0:
        raise ValueError(f"projection time {t} outside (0, 1]")
    if partial.total == 0:
        raise EmptyTally("cannot project from an empty tally")

    areas = sorted({area for area, _ in partial.per_area_counts})
    for area in areas:
        if area not in curves:
            raise MissingCurve(f"no turnout curve for area {area}")

    projected = {cid: 0.0 for cid in candidate_order}
    for area in areas:
        scale = 1.0 / curve_fraction(curves[area], t)
        for cid in candidate_order:
            projected[cid] += partial.per_area_counts.get((area, cid), 0) * scale

    leader = candidate_order[0]
    for cid in candidate_order[1:]:  # ties keep the earlier candidate
        if projected[cid] > projected[leader]:
            leader = cid
    return Projection(
        election_id=partial.election_id,
        as_of_fraction=t,
        projected_counts=projected,
        projected_total=sum(projected.values()),
        leader=leader,
        win_probability=win_probability(partial.counts),
    )


def build_curves_from_history(
    history: list[tuple[str, float, float]],
) -> dict[str, TurnoutCurve]:
    """Normalize raw (area, time, cumulative) observations into valid curves.

    Per area: sort by time, deduplicate times (keeping the largest
    cumulative), enforce monotonicity by running max, then complete the
    endpoints: (0.0, first value) if time 0 is absent and (1.0, 1.0) if
    time 1 is absent.  A raw point at time 1.0 is forced up to 1.0.
    """
    grouped: dict[str, list[tuple[float, float]]] = {}
    for area, time_fraction, cumulative in history:
        if not (0.0 <= time_fraction <= 1.0 and 0.0 <= cumulative <= 1.0):
            raise MalformedCurve(
                f"history point ({time_fraction}, {cumulative}) outside the unit square"
            )
        grouped.setdefault(area, []).append((time_fraction, cumulative))

    curves = {}
    for area, raw_points in grouped.items():
        if len(raw_points) < 2:
            raise TooFewPoints(f"area {area} has fewer than 2 history points")
        by_time: dict[float, float] = {}
        for time_fraction, cumulative in sorted(raw_points):
            by_time[time_fraction] = max(cumulative, by_time.get(time_fraction, 0.0))
        points: list[tuple[float, float]] = []
        running = 0.0
        for time_fraction in sorted(by_time):
            running = max(running, by_time[time_fraction])
            points.append((time_fraction, running))
        if points[0][0] != 0.0:
            points.insert(0, (0.0, points[0][1]))
        if points[-1][0] == 1.0:
            points[-1] = (1.0, 1.0)
        else:
            points.append((1.0, 1.0))
        curves[area] = TurnoutCurve(area_code=area, points=tuple(points))
    return curves
