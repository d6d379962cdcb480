"""Weather-driven voter turnout prediction.

The model regresses turnout *percentage* on the five current-conditions
features, so one trained model generalizes across electorate sizes; the
participant count is recovered by scaling with the registered count.

The original attendance records are not available, so a fully seeded
synthetic generator stands in.  Its ground truth:

    pct = clamp(35 + 0.9*(temp - 18) - 0.15*clouds - 0.6*wind
                + 0.8*visibility - 0.1*(humidity - 40) + eps, 5, 95)

with eps ~ Normal(0, 3).  Warmer days raise turnout; clouds, wind and
humidity depress it.  Per sample the generator draws, in order:
visibility, humidity, temperature, wind, cloudiness, registered count,
noise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import OutOfRange, TooFewSamples
from .forest import (
    Dataset,
    Forest,
    ForestParams,
    SplitSpec,
    Task,
    evaluate,
    model_id,
    predict,
    split_dataset,
    train_forest,
)
from .rng import SplitMix64

FEATURE_NAMES = [
    "visibility_km",
    "humidity_pct",
    "temperature_c",
    "wind_speed_ms",
    "cloudiness_pct",
]

CSV_HEADER = FEATURE_NAMES + ["registered_count", "participant_count"]

MIN_TRAINING_SAMPLES = 50


def round_half_up(x: float) -> int:
    """Round .5 away from zero for non-negative x (plain counting rounding)."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class WeatherObservation:
    visibility_km: float
    humidity_pct: float
    temperature_c: float
    wind_speed_ms: float
    cloudiness_pct: float
    observed_at: int = 0
    lat: float = 0.0
    lon: float = 0.0

    def __post_init__(self):
        checks = [
            ("visibility_km", self.visibility_km, 0.0, math.inf),
            ("humidity_pct", self.humidity_pct, 0.0, 100.0),
            ("wind_speed_ms", self.wind_speed_ms, 0.0, math.inf),
            ("cloudiness_pct", self.cloudiness_pct, 0.0, 100.0),
            ("lat", self.lat, -90.0, 90.0),
            ("lon", self.lon, -180.0, 180.0),
        ]
        for name, value, low, high in checks:
            if not (low <= value <= high) or not math.isfinite(value):
                raise OutOfRange(f"{name}={value} outside [{low}, {high}]")
        if not math.isfinite(self.temperature_c):
            raise OutOfRange("temperature_c must be finite")


@dataclass(frozen=True)
class TurnoutSample:
    visibility_km: float
    humidity_pct: float
    temperature_c: float
    wind_speed_ms: float
    cloudiness_pct: float
    registered_count: int
    participant_count: int

    def __post_init__(self):
        if self.registered_count < 1:
            raise ValueError("registered_count must be positive")
        if not 0 <= self.participant_count <= self.registered_count:
            raise ValueError("participant_count must be in [0, registered_count]")

    @property
    def turnout_pct(self) -> float:
        return self.participant_count / self.registered_count * 100.0

    def features(self) -> list[float]:
        return [
            self.visibility_km,
            self.humidity_pct,
            self.temperature_c,
            self.wind_speed_ms,
            self.cloudiness_pct,
        ]


@dataclass(frozen=True)
class TurnoutPrediction:
    predicted_turnout_pct: float
    predicted_participants: int
    features_used: list[float]
    model_id: str


def build_feature_vector(obs: WeatherObservation) -> list[float]:
    """Fixed feature order; no scaling (trees are scale-invariant)."""
    return [
        obs.visibility_km,
        obs.humidity_pct,
        obs.temperature_c,
        obs.wind_speed_ms,
        obs.cloudiness_pct,
    ]


def turnout_percentage(
    visibility_km: float,
    humidity_pct: float,
    temperature_c: float,
    wind_speed_ms: float,
    cloudiness_pct: float,
    noise: float = 0.0,
) -> float:
    """Ground-truth turnout rule used by the synthetic generator."""
    pct = (
        35.0
        + 0.9 * (temperature_c - 18.0)
        - 0.15 * cloudiness_pct
        - 0.6 * wind_speed_ms
        + 0.8 * visibility_km
        - 0.1 * (humidity_pct - 40.0)
        + noise
    )
    return min(max(pct, 5.0), 95.0)


def generate_training_data(n: int = 500, seed: int = 0) -> list[TurnoutSample]:
    if n < 1:
        raise ValueError("n must be positive")
    rng = SplitMix64(seed)
    samples = []
    for _ in range(n):
        visibility = rng.uniform(0.5, 10.0)
        humidity = rng.uniform(40.0, 100.0)
        temperature = rng.uniform(15.0, 35.0)
        wind = rng.uniform(0.0, 15.0)
        clouds = rng.uniform(0.0, 100.0)
        registered = rng.randint(500, 20000)
        pct = turnout_percentage(
            visibility, humidity, temperature, wind, clouds, noise=rng.normal(0.0, 3.0)
        )
        samples.append(
            TurnoutSample(
                visibility_km=visibility,
                humidity_pct=humidity,
                temperature_c=temperature,
                wind_speed_ms=wind,
                cloudiness_pct=clouds,
                registered_count=registered,
                participant_count=round_half_up(pct / 100.0 * registered),
            )
        )
    return samples


def samples_to_dataset(samples: list[TurnoutSample]) -> Dataset:
    return Dataset(
        feature_names=list(FEATURE_NAMES),
        X=[s.features() for s in samples],
        y=[s.turnout_pct for s in samples],
        task=Task.REGRESSION,
    )


@dataclass
class TurnoutModelResult:
    model: Forest
    model_id: str
    test_metrics: dict
    holdout_metrics: dict


def train_turnout_model(
    samples: list[TurnoutSample],
    split_spec: SplitSpec | None = None,
    forest_params: ForestParams | None = None,
) -> TurnoutModelResult:
    if len(samples) < MIN_TRAINING_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_TRAINING_SAMPLES} samples, got {len(samples)}")
    split_spec = split_spec or SplitSpec(0.7, 0.15, 0.15, seed=0)
    forest_params = forest_params or ForestParams()
    splits = split_dataset(samples_to_dataset(samples), split_spec)
    model = train_forest(splits.train, forest_params)
    return TurnoutModelResult(
        model=model,
        model_id=model_id(model),
        test_metrics=evaluate(model, splits.test),
        holdout_metrics=evaluate(model, splits.holdout),
    )


def predict_turnout(
    model: Forest, obs: WeatherObservation, registered_count: int
) -> TurnoutPrediction:
    if registered_count < 1:
        raise OutOfRange("registered_count must be at least 1")
    features = build_feature_vector(obs)
    pct = min(max(float(predict(model, features)), 0.0), 100.0)
    return TurnoutPrediction(
        predicted_turnout_pct=pct,
        predicted_participants=round_half_up(pct / 100.0 * registered_count),
        features_used=features,
        model_id=model_id(model),
    )


# --- CSV persistence ---------------------------------------------------------

def write_samples_csv(samples: list[TurnoutSample], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for s in samples:
            writer.writerow(
                [
                    f"{s.visibility_km:.6f}",
                    f"{s.humidity_pct:.6f}",
                    f"{s.temperature_c:.6f}",
                    f"{s.wind_speed_ms:.6f}",
                    f"{s.cloudiness_pct:.6f}",
                    s.registered_count,
                    s.participant_count,
                ]
            )


def read_samples_csv(path) -> list[TurnoutSample]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {Path(path).name}: {reader.fieldnames}")
        return [
            TurnoutSample(
                visibility_km=float(row["visibility_km"]),
                humidity_pct=float(row["humidity_pct"]),
                temperature_c=float(row["temperature_c"]),
                wind_speed_ms=float(row["wind_speed_ms"]),
                cloudiness_pct=float(row["cloudiness_pct"]),
                registered_count=int(row["registered_count"]),
                participant_count=int(row["participant_count"]),
            )
            for row in reader
        ]
