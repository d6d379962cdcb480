"""Per-area election violence risk classification.

A binary forest classifier over five per-area history features.  Real
incident data can be dropped in through the CSV contract; the bundled
synthetic generator draws features uniformly and labels them from a
logistic ground truth

    p = sigmoid(0.4*prior_incidents + 0.05*rallies - 0.5*police_density
                + 0.03*(50 - margin))

sampling the incident flag from p.  Per area the generator draws, in
order: prior incidents, previous turnout, margin, rallies, police
density, then the label coin.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import EmptyList, SingleClass, TooFewRows
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
    "prior_incident_count",
    "previous_turnout_pct",
    "margin_pct_last_election",
    "rally_count",
    "police_stations_per_10k",
]

CSV_HEADER = ["area_code"] + FEATURE_NAMES + ["incident_occurred"]

MIN_TRAINING_ROWS = 50

TIER_HIGH = 0.66
TIER_MEDIUM = 0.33


@dataclass(frozen=True)
class AreaHistory:
    area_code: str
    prior_incident_count: int
    previous_turnout_pct: float
    margin_pct_last_election: float
    rally_count: int
    police_stations_per_10k: float
    incident_occurred: bool | None = None  # None for prediction inputs

    def __post_init__(self):
        if self.prior_incident_count < 0 or self.rally_count < 0:
            raise ValueError("counts must be non-negative")
        if not 0.0 <= self.previous_turnout_pct <= 100.0:
            raise ValueError("previous_turnout_pct must be in [0, 100]")
        if not 0.0 <= self.margin_pct_last_election <= 100.0:
            raise ValueError("margin_pct_last_election must be in [0, 100]")
        if self.police_stations_per_10k < 0.0:
            raise ValueError("police_stations_per_10k must be non-negative")

    def features(self) -> list[float]:
        return [
            float(self.prior_incident_count),
            self.previous_turnout_pct,
            self.margin_pct_last_election,
            float(self.rally_count),
            self.police_stations_per_10k,
        ]


@dataclass(frozen=True)
class RiskReport:
    area_code: str
    probability: float
    tier: str
    model_id: str


def tier_for(probability: float) -> str:
    """high at p >= 0.66, medium at p in [0.33, 0.66), low below."""
    if probability >= TIER_HIGH:
        return "high"
    if probability >= TIER_MEDIUM:
        return "medium"
    return "low"


def incident_probability(
    prior_incident_count: float,
    rally_count: float,
    police_stations_per_10k: float,
    margin_pct_last_election: float,
) -> float:
    z = (
        0.4 * prior_incident_count
        + 0.05 * rally_count
        - 0.5 * police_stations_per_10k
        + 0.03 * (50.0 - margin_pct_last_election)
    )
    return 1.0 / (1.0 + math.exp(-z))


def generate_history(
    n: int = 500, seed: int = 0, separable: bool = False
) -> list[AreaHistory]:
    """Synthetic per-area history corpus.

    ``separable=True`` swaps the logistic label for the deterministic rule
    incident_occurred = (prior_incident_count > 5), which a tree can learn
    exactly; used to sanity-check the training pipeline.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = SplitMix64(seed)
    rows = []
    for i in range(n):
        prior = rng.randint(0, 12)
        turnout = rng.uniform(30.0, 90.0)
        margin = rng.uniform(0.0, 50.0)
        rallies = rng.randint(0, 30)
        police = rng.uniform(0.0, 10.0)
        if separable:
            label = prior > 5
            rng.random()  # keep the draw sequence aligned with the logistic path
        else:
            label = rng.random() < incident_probability(prior, rallies, police, margin)
        rows.append(
            AreaHistory(
                area_code=f"AREA-{i:03d}",
                prior_incident_count=prior,
                previous_turnout_pct=turnout,
                margin_pct_last_election=margin,
                rally_count=rallies,
                police_stations_per_10k=police,
                incident_occurred=label,
            )
        )
    return rows


def history_to_dataset(history: list[AreaHistory]) -> Dataset:
    if any(row.incident_occurred is None for row in history):
        raise ValueError("training rows must carry the incident_occurred label")
    return Dataset(
        feature_names=list(FEATURE_NAMES),
        X=[row.features() for row in history],
        y=[int(row.incident_occurred) for row in history],
        task=Task.CLASSIFICATION,
    )


@dataclass
class ViolenceModelResult:
    model: Forest
    model_id: str
    test_metrics: dict
    holdout_metrics: dict


def train_violence_model(
    history: list[AreaHistory],
    split_spec: SplitSpec | None = None,
    forest_params: ForestParams | None = None,
) -> ViolenceModelResult:
    if len(history) < MIN_TRAINING_ROWS:
        raise TooFewRows(f"need at least {MIN_TRAINING_ROWS} rows, got {len(history)}")
    labels = {row.incident_occurred for row in history}
    if labels != {True, False}:
        raise SingleClass("training corpus must contain both classes")
    split_spec = split_spec or SplitSpec(0.7, 0.15, 0.15, stratified=True, seed=0)
    forest_params = forest_params or ForestParams()
    splits = split_dataset(history_to_dataset(history), split_spec)
    model = train_forest(splits.train, forest_params)
    return ViolenceModelResult(
        model=model,
        model_id=model_id(model),
        test_metrics=evaluate(model, splits.test),
        holdout_metrics=evaluate(model, splits.holdout),
    )


def predict_risk(model: Forest, area: AreaHistory) -> RiskReport:
    result = predict(model, area.features())
    probability = result.probabilities.get(1, 0.0)
    return RiskReport(
        area_code=area.area_code,
        probability=probability,
        tier=tier_for(probability),
        model_id=model_id(model),
    )


def rank_areas(model: Forest, areas: list[AreaHistory]) -> list[RiskReport]:
    """Reports sorted by probability descending, ties by area code ascending."""
    if not areas:
        raise EmptyList("no areas to rank")
    reports = [predict_risk(model, area) for area in areas]
    return sorted(reports, key=lambda r: (-r.probability, r.area_code))


# --- CSV persistence ---------------------------------------------------------

def write_history_csv(history: list[AreaHistory], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in history:
            writer.writerow(
                [
                    row.area_code,
                    row.prior_incident_count,
                    f"{row.previous_turnout_pct:.6f}",
                    f"{row.margin_pct_last_election:.6f}",
                    row.rally_count,
                    f"{row.police_stations_per_10k:.6f}",
                    int(row.incident_occurred) if row.incident_occurred is not None else "",
                ]
            )


def read_history_csv(path) -> list[AreaHistory]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
        return [
            AreaHistory(
                area_code=row["area_code"],
                prior_incident_count=int(row["prior_incident_count"]),
                previous_turnout_pct=float(row["previous_turnout_pct"]),
                margin_pct_last_election=float(row["margin_pct_last_election"]),
                rally_count=int(row["rally_count"]),
                police_stations_per_10k=float(row["police_stations_per_10k"]),
                incident_occurred=(
                    bool(int(row["incident_occurred"])) if row["incident_occurred"] != "" else None
                ),
            )
            for row in reader
        ]
