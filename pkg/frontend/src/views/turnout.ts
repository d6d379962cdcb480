/**
 * Turnout prediction query: latitude/longitude + registered count in,
 * predicted participants and the five weather features out.
 *
 * Validation happens client-side before any request; out-of-range input
 * never reaches the network.  The card renders server values verbatim.
 */

import { ApiClient, ApiError, TurnoutPredictionDocument } from "../api.js";
import { VNode, h } from "../vdom.js";

export interface TurnoutQuery {
  lat: number;
  lon: number;
  registered: number;
}

export type TurnoutState =
  | { kind: "idle" }
  | { kind: "invalid"; message: string }
  | { kind: "pending"; query: TurnoutQuery }
  | { kind: "loaded"; query: TurnoutQuery; prediction: TurnoutPredictionDocument }
  | { kind: "failed"; query: TurnoutQuery; message: string };

export function validateQuery(lat: number, lon: number, registered: number): string | null {
  if (!Number.isFinite(lat) || lat < -90 || lat > 90) {
    return "latitude must be between -90 and 90";
  }
  if (!Number.isFinite(lon) || lon < -180 || lon > 180) {
    return "longitude must be between -180 and 180";
  }
  if (!Number.isInteger(registered) || registered < 1) {
    return "registered count must be a positive integer";
  }
  return null;
}

export class TurnoutController {
  state: TurnoutState = { kind: "idle" };
  requestsIssued = 0;

  constructor(
    private api: ApiClient,
    private onChange: (state: TurnoutState) => void = () => {},
  ) {}

  private transition(state: TurnoutState): void {
    this.state = state;
    this.onChange(state);
  }

  async submit(lat: number, lon: number, registered: number): Promise<TurnoutState> {
    const problem = validateQuery(lat, lon, registered);
    if (problem !== null) {
      this.transition({ kind: "invalid", message: problem });
      return this.state;
    }
    const query = { lat, lon, registered };
    this.transition({ kind: "pending", query });
    try {
      this.requestsIssued += 1;
      const prediction = await this.api.turnoutPrediction(lat, lon, registered);
      this.transition({ kind: "loaded", query, prediction });
    } catch (error) {
      const message =
        error instanceof ApiError && error.status >= 500
          ? "prediction service unavailable, try again"
          : `prediction failed: ${error instanceof ApiError ? error.code : String(error)}`;
      this.transition({ kind: "failed", query, message });
    }
    return this.state;
  }
}

const FEATURE_LABELS: Record<string, string> = {
  visibility_km: "Visibility (km)",
  humidity_pct: "Humidity (%)",
  temperature_c: "Temperature (C)",
  wind_speed_ms: "Wind speed (m/s)",
  cloudiness_pct: "Cloudiness (%)",
};

export function renderTurnout(state: TurnoutState): VNode {
  const rows: VNode[] = [
    h("h2", {}, ["Weather-based turnout prediction"]),
    h("label", {}, ["Latitude"]),
    h("input", { class: "turnout-lat", type: "number" }),
    h("label", {}, ["Longitude"]),
    h("input", { class: "turnout-lon", type: "number" }),
    h("label", {}, ["Registered voters"]),
    h("input", { class: "turnout-registered", type: "number" }),
    h("button", { class: "turnout-submit" }, ["Predict"]),
  ];
  if (state.kind === "invalid") {
    rows.push(h("div", { class: "inline-error" }, [state.message]));
  }
  if (state.kind === "failed") {
    rows.push(
      h("div", { class: "error-card" }, [
        state.message,
        h("button", { class: "turnout-retry" }, ["Retry"]),
      ]),
    );
  }
  if (state.kind === "loaded") {
    const { prediction, query } = state;
    rows.push(
      h("div", { class: "prediction-card" }, [
        h("div", { class: "predicted-participants" }, [
          `${prediction.predicted_participants}`,
        ]),
        h("div", { class: "predicted-caption" }, [
          `expected participants of ${query.registered} registered`,
        ]),
        h("div", { class: "predicted-pct" }, [
          `${prediction.predicted_turnout_pct.toFixed(1)}% turnout`,
        ]),
        h(
          "dl",
          { class: "features-used" },
          Object.entries(prediction.features_used).flatMap(([key, value]) => [
            h("dt", {}, [FEATURE_LABELS[key] ?? key]),
            h("dd", { class: `feature-${key}` }, [`${value}`]),
          ]),
        ),
        h("div", { class: "model-id" }, [`model ${prediction.model_id}`]),
      ]),
    );
  }
  return h("section", { class: "turnout-view" }, rows);
}
