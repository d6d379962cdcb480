import numpy as np
import pytest

from votekit.errors import OutOfRange, TooFewSamples
from votekit.forest import ForestParams, SplitSpec, predict
from votekit.turnout import (
    CSV_HEADER,
    FEATURE_NAMES,
    TurnoutSample,
    WeatherObservation,
    build_feature_vector,
    generate_training_data,
    predict_turnout,
    read_samples_csv,
    round_half_up,
    samples_to_dataset,
    train_turnout_model,
    turnout_percentage,
    write_samples_csv,
)


def observation(**overrides):
    base = dict(
        visibility_km=10.0, humidity_pct=80.0, temperature_c=28.0,
        wind_speed_ms=3.0, cloudiness_pct=40.0,
    )
    base.update(overrides)
    return WeatherObservation(**base)


class TestFeatureVector:
    def test_fixed_order(self):
        assert build_feature_vector(observation()) == [10.0, 80.0, 28.0, 3.0, 40.0]
        assert FEATURE_NAMES == [
            "visibility_km", "humidity_pct", "temperature_c", "wind_speed_ms", "cloudiness_pct",
        ]

    def test_out_of_range_humidity(self):
        with pytest.raises(OutOfRange):
            observation(humidity_pct=120.0)

    def test_out_of_range_latitude(self):
        with pytest.raises(OutOfRange):
            WeatherObservation(10.0, 80.0, 28.0, 3.0, 40.0, lat=95.0)

    def test_equal_observations_equal_vectors(self):
        assert build_feature_vector(observation()) == build_feature_vector(observation())


class TestGroundTruthFormula:
    def test_spec_anchor_value(self):
        # independent arithmetic: 35 + 0.9*0 - 0 - 0 + 0.8*0.5 - 0.1*0 = 35.4
        assert turnout_percentage(0.5, 40.0, 18.0, 0.0, 0.0, noise=0.0) == pytest.approx(35.4)

    def test_clamped_low(self):
        assert turnout_percentage(0.5, 100.0, 15.0, 15.0, 100.0, noise=-30.0) == 5.0

    def test_clamped_high(self):
        assert turnout_percentage(10.0, 40.0, 35.0, 0.0, 0.0, noise=50.0) == 95.0

    def test_warmth_raises_turnout(self):
        cold = turnout_percentage(5.0, 70.0, 15.0, 5.0, 50.0)
        warm = turnout_percentage(5.0, 70.0, 30.0, 5.0, 50.0)
        assert warm > cold


class TestGenerator:
    def test_count_and_bounds(self):
        samples = generate_training_data(500, seed=42)
        assert len(samples) == 500
        for s in samples:
            assert 0.5 <= s.visibility_km <= 10.0
            assert 40.0 <= s.humidity_pct <= 100.0
            assert 15.0 <= s.temperature_c <= 35.0
            assert 0.0 <= s.wind_speed_ms <= 15.0
            assert 0.0 <= s.cloudiness_pct <= 100.0
            assert 500 <= s.registered_count <= 20000
            assert 0 <= s.participant_count <= s.registered_count
            # clamped ground truth keeps turnout in [5, 95] (up to count rounding)
            assert 4.9 <= s.turnout_pct <= 95.1

    def test_deterministic(self):
        assert generate_training_data(50, seed=9) == generate_training_data(50, seed=9)

    def test_seed_changes_output(self):
        assert generate_training_data(50, seed=1) != generate_training_data(50, seed=2)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            generate_training_data(0, seed=1)


class TestRounding:
    def test_round_half_up(self):
        assert round_half_up(2.5) == 3
        assert round_half_up(2.4999) == 2
        assert round_half_up(0.0) == 0

    def test_participants_from_pct(self):
        # spec anchor: round(0.354 * 8000) = 2832
        assert round_half_up(35.4 / 100.0 * 8000) == 2832


class TestTraining:
    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            train_turnout_model(generate_training_data(10, seed=1))

    def test_constant_corpus_predicts_constant(self):
        samples = [
            TurnoutSample(
                visibility_km=float(1 + i % 9), humidity_pct=50.0, temperature_c=25.0,
                wind_speed_ms=2.0, cloudiness_pct=float(i % 100),
                registered_count=1000, participant_count=500,
            )
            for i in range(60)
        ]
        result = train_turnout_model(samples, SplitSpec(0.7, 0.15, 0.15, seed=0), ForestParams(seed=0))
        assert result.holdout_metrics["mae"] == 0.0
        prediction = predict_turnout(result.model, observation(), 10000)
        assert prediction.predicted_turnout_pct == 50.0
        assert prediction.predicted_participants == 5000

    def test_metrics_deterministic(self):
        samples = generate_training_data(120, seed=5)
        spec = SplitSpec(0.7, 0.15, 0.15, seed=5)
        params = ForestParams(n_trees=10, seed=5)
        a = train_turnout_model(samples, spec, params)
        b = train_turnout_model(samples, spec, params)
        assert a.test_metrics == b.test_metrics
        assert a.holdout_metrics == b.holdout_metrics

    def test_feature_order_contract(self):
        # a permuted feature vector must change the prediction of a non-constant model
        samples = generate_training_data(200, seed=3)
        result = train_turnout_model(samples, SplitSpec(0.7, 0.15, 0.15, seed=3),
                                     ForestParams(n_trees=30, seed=3))
        vector = build_feature_vector(observation(visibility_km=9.0, temperature_c=33.0,
                                                  wind_speed_ms=1.0, cloudiness_pct=5.0))
        permuted = [vector[2], vector[0], vector[4], vector[1], vector[3]]
        assert predict(result.model, vector) != predict(result.model, permuted)


@pytest.fixture(scope="module")
def model():
    samples = generate_training_data(200, seed=11)
    return train_turnout_model(
        samples, SplitSpec(0.7, 0.15, 0.15, seed=11), ForestParams(n_trees=20, seed=11)
    ).model


class TestPredictTurnout:

    def test_registered_count_must_be_positive(self, model):
        with pytest.raises(OutOfRange):
            predict_turnout(model, observation(), 0)

    def test_participants_rounding_invariant(self, model):
        prediction = predict_turnout(model, observation(), 8000)
        assert prediction.predicted_participants == round_half_up(
            prediction.predicted_turnout_pct / 100.0 * 8000
        )
        assert 0.0 <= prediction.predicted_turnout_pct <= 100.0

    def test_monotone_in_registered_count(self, model):
        counts = [predict_turnout(model, observation(), n).predicted_participants
                  for n in (1, 10, 500, 8000, 20000, 100000)]
        assert counts == sorted(counts)

    def test_prediction_within_training_range(self, model):
        samples = generate_training_data(200, seed=11)
        low = min(s.turnout_pct for s in samples)
        high = max(s.turnout_pct for s in samples)
        for temp in (15.0, 25.0, 35.0):
            pct = predict_turnout(model, observation(temperature_c=temp), 1000).predicted_turnout_pct
            assert low <= pct <= high


class TestCsv:
    def test_round_trip(self, tmp_path):
        samples = generate_training_data(30, seed=2)
        path = tmp_path / "turnout.csv"
        write_samples_csv(samples, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 31
        loaded = read_samples_csv(path)
        assert len(loaded) == 30
        for original, parsed in zip(samples, loaded):
            assert parsed.registered_count == original.registered_count
            assert parsed.participant_count == original.participant_count
            assert parsed.temperature_c == pytest.approx(original.temperature_c, abs=1e-6)

    def test_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_samples_csv(path)


def test_dataset_uses_turnout_pct_target():
    samples = generate_training_data(60, seed=4)
    data = samples_to_dataset(samples)
    assert data.feature_names == FEATURE_NAMES
    assert np.allclose(
        data.y, [s.participant_count / s.registered_count * 100.0 for s in samples]
    )
