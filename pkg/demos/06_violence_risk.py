"""Per-area election-violence risk ranking for election administrators.

Trains the binary classification forest on (synthetic) area histories
and prints the risk board: every area with its incident probability and
low/medium/high tier, highest risk first.
"""

from votekit.forest import ForestParams, SplitSpec
from votekit.violence import AreaHistory, generate_history, rank_areas, train_violence_model

history = generate_history(n=500, seed=7)
positives = sum(1 for row in history if row.incident_occurred)
print(f"history: {len(history)} areas, {positives} with recorded incidents")

result = train_violence_model(
    history,
    split_spec=SplitSpec(0.7, 0.15, 0.15, stratified=True, seed=7),
    forest_params=ForestParams(seed=7),
)
print(f"model {result.model_id}")
print("holdout:", {k: round(v, 3) if isinstance(v, float) else v
                   for k, v in result.holdout_metrics.items() if k == "accuracy"})

# score a handful of upcoming areas (unlabeled)
upcoming = [
    AreaHistory("NUWARA-01", prior_incident_count=11, previous_turnout_pct=74.0,
                margin_pct_last_election=3.0, rally_count=26, police_stations_per_10k=1.0),
    AreaHistory("GALLE-02", prior_incident_count=0, previous_turnout_pct=61.0,
                margin_pct_last_election=35.0, rally_count=2, police_stations_per_10k=6.5),
    AreaHistory("KANDY-03", prior_incident_count=5, previous_turnout_pct=68.0,
                margin_pct_last_election=12.0, rally_count=14, police_stations_per_10k=3.0),
    AreaHistory("MATARA-04", prior_incident_count=8, previous_turnout_pct=70.0,
                margin_pct_last_election=6.0, rally_count=20, police_stations_per_10k=2.0),
]

print("\nrisk board (highest first):")
for report in rank_areas(result.model, upcoming):
    bar = "#" * int(report.probability * 20)
    print(f"  {report.area_code:10s} {report.probability:5.2f} {report.tier:6s} {bar}")
