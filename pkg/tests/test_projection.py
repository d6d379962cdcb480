import math

import pytest

from votekit.elections import TallySnapshot
from votekit.errors import EmptyTally, MalformedCurve, MissingCurve, TooFewPoints
from votekit.projection import (
    PROJECTION_METHOD,
    TurnoutCurve,
    build_curves_from_history,
    curve_fraction,
    normal_cdf,
    project,
    win_probability,
)
from votekit.rng import SplitMix64


def snapshot(per_area: dict, election_id="e" * 32, as_of=0) -> TallySnapshot:
    counts: dict[str, int] = {}
    for (_, cid), votes in per_area.items():
        counts[cid] = counts.get(cid, 0) + votes
    return TallySnapshot(
        election_id=election_id,
        as_of=as_of,
        counts=counts,
        per_area_counts=dict(per_area),
        total=sum(counts.values()),
    )


def scurve(area="A") -> TurnoutCurve:
    return TurnoutCurve(area, ((0.0, 0.0), (0.5, 0.4), (1.0, 1.0)))


# --- independent oracle: Simpson integration of the normal density ---------

def phi_by_quadrature(x: float, steps: int = 20000) -> float:
    lo = -10.0
    width = (x - lo) / steps
    total = 0.0
    for i in range(steps + 1):
        t = lo + i * width
        weight = 1 if i in (0, steps) else (4 if i % 2 == 1 else 2)
        total += weight * math.exp(-0.5 * t * t)
    return total * width / 3.0 / math.sqrt(2.0 * math.pi)


class TestNormalCdf:
    @pytest.mark.parametrize("x", [-3.0, -1.0, 0.0, 1.0, 3.0])
    def test_against_quadrature_oracle(self, x):
        assert abs(normal_cdf(x) - phi_by_quadrature(x)) <= 1e-6

    def test_symmetry(self):
        for x in (0.25, 1.7, 2.9):
            assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-12)

    def test_midpoint(self):
        assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-9)


class TestCurveValidation:
    def test_needs_two_points(self):
        with pytest.raises(MalformedCurve):
            TurnoutCurve("A", ((0.0, 0.0),))

    def test_times_strictly_increasing(self):
        with pytest.raises(MalformedCurve):
            TurnoutCurve("A", ((0.0, 0.0), (0.0, 0.5), (1.0, 1.0)))

    def test_cumulative_non_decreasing(self):
        with pytest.raises(MalformedCurve):
            TurnoutCurve("A", ((0.0, 0.5), (0.5, 0.3), (1.0, 1.0)))

    def test_must_end_at_one_one(self):
        with pytest.raises(MalformedCurve):
            TurnoutCurve("A", ((0.0, 0.0), (1.0, 0.9)))

    def test_must_start_at_time_zero(self):
        with pytest.raises(MalformedCurve):
            TurnoutCurve("A", ((0.1, 0.0), (1.0, 1.0)))


class TestCurveFraction:
    def test_linear_interpolation(self):
        # midway between (0, 0) and (0.5, 0.4) -> 0.2
        assert curve_fraction(scurve(), 0.25) == pytest.approx(0.2)

    def test_endpoint_is_one(self):
        assert curve_fraction(scurve(), 1.0) == 1.0

    def test_floor_applied_at_zero(self):
        assert curve_fraction(scurve(), 0.0) == 0.01

    def test_between_later_points(self):
        assert curve_fraction(scurve(), 0.75) == pytest.approx(0.7)

    def test_out_of_range_time(self):
        with pytest.raises(ValueError):
            curve_fraction(scurve(), 1.5)


class TestWinProbability:
    def test_tie_is_half(self):
        assert win_probability({"A": 30, "B": 30}) == 0.5

    def test_unopposed_is_one(self):
        assert win_probability({"A": 12, "B": 0}) == 1.0

    def test_formula_value(self):
        counts = {"A": 40, "B": 10}
        p1, p2, n = 0.8, 0.2, 50
        se = math.sqrt((p1 + p2 - (p1 - p2) ** 2) / n)
        assert win_probability(counts) == pytest.approx(normal_cdf((p1 - p2) / se))

    def test_empty_tally(self):
        with pytest.raises(EmptyTally):
            win_probability({"A": 0, "B": 0})

    def test_more_votes_same_shares_increases_confidence(self):
        small = win_probability({"A": 6, "B": 4})
        large = win_probability({"A": 600, "B": 400})
        assert large > small


class TestProject:
    def test_consistency_at_close(self):
        partial = snapshot({("A", "X"): 40, ("A", "Y"): 10})
        result = project(partial, {"A": scurve()}, 1.0, ["X", "Y"])
        assert result.projected_counts == {"X": 40.0, "Y": 10.0}
        assert result.projected_total == 50.0

    def test_scaling_by_half_fraction(self):
        partial = snapshot({("A", "X"): 40, ("A", "Y"): 10})
        curve = TurnoutCurve("A", ((0.0, 0.0), (0.5, 0.5), (1.0, 1.0)))
        result = project(partial, {"A": curve}, 0.5, ["X", "Y"])
        assert result.projected_counts == {"X": 80.0, "Y": 20.0}
        assert result.leader == "X"

    def test_leader_tie_breaks_by_candidate_order(self):
        partial = snapshot({("A", "X"): 30, ("A", "Y"): 30})
        result = project(partial, {"A": scurve()}, 0.5, ["Y", "X"])
        assert result.leader == "Y"
        assert result.win_probability == 0.5

    def test_missing_curve(self):
        partial = snapshot({("A", "X"): 1, ("B", "X"): 1, ("A", "Y"): 0, ("B", "Y"): 0})
        with pytest.raises(MissingCurve):
            project(partial, {"A": scurve("A")}, 0.5, ["X", "Y"])

    def test_empty_tally(self):
        partial = snapshot({("A", "X"): 0, ("A", "Y"): 0})
        with pytest.raises(EmptyTally):
            project(partial, {"A": scurve()}, 0.5, ["X", "Y"])

    def test_time_zero_rejected(self):
        partial = snapshot({("A", "X"): 1, ("A", "Y"): 0})
        with pytest.raises(ValueError):
            project(partial, {"A": scurve()}, 0.0, ["X", "Y"])

    def test_projected_total_at_least_counted(self):
        rng = SplitMix64(4)
        for _ in range(50):
            per_area = {
                (f"A{k}", f"C{j}"): rng.randbelow(40)
                for k in range(3)
                for j in range(3)
            }
            partial = snapshot(per_area)
            if partial.total == 0:
                continue
            curves = {f"A{k}": scurve(f"A{k}") for k in range(3)}
            for t in (0.25, 0.5, 0.75):
                result = project(partial, curves, t, ["C0", "C1", "C2"])
                assert result.projected_total >= partial.total - 1e-9

    def test_scale_equivariance(self):
        per_area = {("A", "X"): 12, ("A", "Y"): 30, ("B", "X"): 7, ("B", "Y"): 1}
        curves = {"A": scurve("A"), "B": TurnoutCurve("B", ((0.0, 0.1), (1.0, 1.0)))}
        base = project(snapshot(per_area), curves, 0.4, ["X", "Y"])
        scaled = project(
            snapshot({k: 5 * v for k, v in per_area.items()}), curves, 0.4, ["X", "Y"]
        )
        for cid in ("X", "Y"):
            assert scaled.projected_counts[cid] == pytest.approx(
                5 * base.projected_counts[cid], rel=1e-12
            )
        assert scaled.leader == base.leader

    def test_leader_monotonicity_spot(self):
        counts = {("A", "X"): 50, ("A", "Y"): 40}
        curves = {"A": scurve()}
        last = 0.0
        for bump in range(0, 200, 10):
            partial = snapshot({("A", "X"): 50 + bump, ("A", "Y"): 40})
            probability = project(partial, curves, 0.5, ["X", "Y"]).win_probability
            assert probability >= last - 1e-12
            last = probability

    def test_document_shape(self):
        partial = snapshot({("A", "X"): 40, ("A", "Y"): 10})
        doc = project(partial, {"A": scurve()}, 0.5, ["X", "Y"]).as_document()
        assert doc["method"] == PROJECTION_METHOD
        assert doc["as_of_fraction"] == 0.5
        assert {row["candidate_id"] for row in doc["projected_counts"]} == {"X", "Y"}
        assert all(row["votes"] == round(row["votes"], 1) for row in doc["projected_counts"])


class TestBuildCurves:
    def test_spec_normalization_example(self):
        curves = build_curves_from_history([("A", 0.5, 0.4), ("A", 0.25, 0.5)])
        # sorted: (0.25, 0.5), (0.5, 0.4) -> running max -> (0.25, 0.5), (0.5, 0.5)
        assert curves["A"].points == ((0.0, 0.5), (0.25, 0.5), (0.5, 0.5), (1.0, 1.0))

    def test_valid_curve_only_gets_endpoints(self):
        curves = build_curves_from_history([("A", 0.25, 0.2), ("A", 0.75, 0.8)])
        assert curves["A"].points == ((0.0, 0.2), (0.25, 0.2), (0.75, 0.8), (1.0, 1.0))

    def test_single_point_rejected(self):
        with pytest.raises(TooFewPoints):
            build_curves_from_history([("A", 0.5, 0.5)])

    def test_duplicate_times_keep_max(self):
        curves = build_curves_from_history([("A", 0.5, 0.3), ("A", 0.5, 0.6), ("A", 0.2, 0.1)])
        assert (0.5, 0.6) in curves["A"].points
        assert (0.5, 0.3) not in curves["A"].points

    def test_point_at_one_forced_to_full(self):
        curves = build_curves_from_history([("A", 0.5, 0.5), ("A", 1.0, 0.9)])
        assert curves["A"].points[-1] == (1.0, 1.0)

    def test_out_of_range_rejected(self):
        with pytest.raises(MalformedCurve):
            build_curves_from_history([("A", 0.5, 1.2), ("A", 0.7, 0.5)])

    def test_multiple_areas(self):
        curves = build_curves_from_history(
            [("A", 0.5, 0.4), ("A", 0.9, 0.9), ("B", 0.3, 0.2), ("B", 0.6, 0.7)]
        )
        assert set(curves) == {"A", "B"}
