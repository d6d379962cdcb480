/**
 * Violence risk board: the ranked area list exactly as served, with tier
 * color coding.  Admin-only; the router never mounts this view for
 * lesser roles, and a 403 from the service is surfaced, not swallowed.
 */

import { ApiClient, ApiError, RiskArea } from "../api.js";
import { VNode, h } from "../vdom.js";

export type RiskState =
  | { kind: "idle" }
  | { kind: "pending" }
  | { kind: "loaded"; areas: RiskArea[] }
  | { kind: "forbidden" }
  | { kind: "error"; message: string };

export class RiskController {
  state: RiskState = { kind: "idle" };

  constructor(
    private api: ApiClient,
    private onChange: (state: RiskState) => void = () => {},
  ) {}

  private transition(state: RiskState): void {
    this.state = state;
    this.onChange(state);
  }

  async refresh(): Promise<RiskState> {
    this.transition({ kind: "pending" });
    try {
      const board = await this.api.violenceBoard();
      this.transition({ kind: "loaded", areas: board.areas });
    } catch (error) {
      if (error instanceof ApiError && error.status === 403) {
        this.transition({ kind: "forbidden" });
      } else {
        this.transition({ kind: "error", message: String(error) });
      }
    }
    return this.state;
  }
}

export function renderRiskBoard(state: RiskState): VNode {
  const rows: VNode[] = [h("h2", {}, ["Election violence risk by area"])];
  switch (state.kind) {
    case "idle":
    case "pending":
      rows.push(h("div", { class: "risk-loading" }, ["Loading risk board..."]));
      break;
    case "forbidden":
      rows.push(h("div", { class: "risk-forbidden" }, ["Admin role required for the risk board"]));
      break;
    case "error":
      rows.push(h("div", { class: "error-banner" }, [state.message]));
      break;
    case "loaded":
      if (state.areas.length === 0) {
        rows.push(h("div", { class: "risk-empty" }, ["No risk data available"]));
        break;
      }
      rows.push(
        h(
          "table",
          { class: "risk-table" },
          state.areas.map((area) =>
            // rendered in server order: already sorted by probability
            h("tr", { class: `risk-row tier-${area.tier}` }, [
              h("td", { class: "risk-area" }, [area.area_code]),
              h("td", { class: "risk-probability" }, [area.probability.toFixed(2)]),
              h("td", { class: "risk-tier" }, [area.tier]),
            ]),
          ),
        ),
      );
      break;
  }
  return h("section", { class: "risk-view" }, rows);
}
