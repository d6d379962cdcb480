"""Weather-based turnout prediction end to end.

Generates the 500-record synthetic corpus, trains the regression forest
on turnout percentage, and answers the operational question: given
current conditions at a location, how many of the registered voters will
show up?
"""

from votekit.forest import ForestParams, SplitSpec, feature_importance
from votekit.turnout import (
    WeatherObservation,
    generate_training_data,
    predict_turnout,
    train_turnout_model,
)

samples = generate_training_data(n=500, seed=42)
print(f"corpus: {len(samples)} records, e.g. {samples[0]}")

result = train_turnout_model(
    samples,
    split_spec=SplitSpec(0.7, 0.15, 0.15, seed=42),
    forest_params=ForestParams(seed=42),
)
print(f"\nmodel {result.model_id}")
print("test:   ", {k: round(v, 3) for k, v in result.test_metrics.items()})
print("holdout:", {k: round(v, 3) for k, v in result.holdout_metrics.items()})
print("importance:", {k: round(v, 3) for k, v in feature_importance(result.model).items()})

sunny = WeatherObservation(
    visibility_km=10.0, humidity_pct=55.0, temperature_c=31.0,
    wind_speed_ms=2.0, cloudiness_pct=10.0, lat=6.91, lon=79.86,
)
stormy = WeatherObservation(
    visibility_km=2.0, humidity_pct=95.0, temperature_c=18.0,
    wind_speed_ms=12.0, cloudiness_pct=95.0, lat=6.91, lon=79.86,
)

registered = 8000
for label, conditions in (("sunny", sunny), ("stormy", stormy)):
    prediction = predict_turnout(result.model, conditions, registered)
    print(f"\n{label}: predicted turnout {prediction.predicted_turnout_pct:.1f}% "
          f"-> {prediction.predicted_participants} of {registered} registered")
