/**
 * Live tally and projection panel.
 *
 * Polls the tally and projection endpoints once per interval per panel,
 * never overlapping requests, and stops entirely when the election
 * closes or the tab is hidden.  Transient failures keep the last good
 * data on screen with a stale marker.
 */

import { ApiClient, ProjectionDocument, TallyDocument } from "../api.js";
import { VNode, h } from "../vdom.js";

export interface TallyViewState {
  tally: TallyDocument | null;
  projection: ProjectionDocument | null;
  stale: boolean;
  closed: boolean;
  lastUpdated: number | null;
}

export interface PollerOptions {
  electionId: string;
  intervalSeconds: number;
  /** day fraction used for the projection query */
  dayFraction: () => number;
  /** scheduled close; polling stops once now passes it */
  closesAt?: number;
  now?: () => number;
  onChange?: (state: TallyViewState) => void;
}

export class TallyPoller {
  state: TallyViewState = {
    tally: null,
    projection: null,
    stale: false,
    closed: false,
    lastUpdated: null,
  };
  private timer: ReturnType<typeof setInterval> | null = null;
  private visible = true;
  private inFlight = { tally: false, projection: false };

  constructor(
    private api: ApiClient,
    private options: PollerOptions,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    void this.tick();
    this.timer = setInterval(() => void this.tick(), this.options.intervalSeconds * 1000);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get polling(): boolean {
    return this.timer !== null;
  }

  /** Wire to document.visibilitychange; hidden tabs stop issuing requests. */
  setVisible(visible: boolean): void {
    this.visible = visible;
  }

  private emit(): void {
    this.options.onChange?.(this.state);
  }

  async tick(): Promise<void> {
    if (this.state.closed) return;
    const nowSeconds = this.options.now?.() ?? Date.now() / 1000;
    if (this.options.closesAt !== undefined && nowSeconds >= this.options.closesAt) {
      this.markClosed();
      return;
    }
    if (!this.visible) return;

    // one request per panel per tick; skip a panel whose request is
    // still in flight rather than stacking another
    const work: Promise<void>[] = [];
    if (!this.inFlight.tally) {
      this.inFlight.tally = true;
      work.push(
        this.api
          .tally(this.options.electionId)
          .then((tally) => {
            this.state = { ...this.state, tally, stale: false, lastUpdated: nowSeconds };
          })
          .catch(() => {
            this.state = { ...this.state, stale: true };
          })
          .finally(() => {
            this.inFlight.tally = false;
          }),
      );
    }
    if (!this.inFlight.projection) {
      this.inFlight.projection = true;
      const t = Math.min(Math.max(this.options.dayFraction(), 0.001), 1.0);
      work.push(
        this.api
          .projection(this.options.electionId, t)
          .then((projection) => {
            this.state = { ...this.state, projection };
          })
          .catch(() => {
            // an empty tally or transient failure keeps the last projection
          })
          .finally(() => {
            this.inFlight.projection = false;
          }),
      );
    }
    await Promise.all(work);
    this.emit();
  }

  /** Called when the election is known closed (operator action or schedule). */
  markClosed(): void {
    this.state = { ...this.state, closed: true };
    this.stop();
    this.emit();
  }
}

export function renderTally(state: TallyViewState): VNode {
  const rows: VNode[] = [h("h2", {}, ["Live tally"])];
  if (state.tally === null) {
    rows.push(h("div", { class: "tally-empty" }, ["Waiting for first results..."]));
    return h("section", { class: "tally-view" }, rows);
  }
  const counts = state.tally.counts;
  const maxVotes = Math.max(1, ...counts.map((c) => c.votes));
  rows.push(
    h(
      "table",
      { class: "tally-table" },
      counts.map((count) =>
        h("tr", { class: "tally-row" }, [
          h("td", { class: "tally-candidate" }, [count.candidate_id]),
          h("td", { class: "tally-votes" }, [`${count.votes}`]),
          h("td", {}, [
            h(
              "div",
              {
                class: "tally-bar",
                style: `width: ${((count.votes / maxVotes) * 100).toFixed(0)}%`,
              },
              [],
            ),
          ]),
        ]),
      ),
    ),
  );
  rows.push(h("div", { class: "tally-total" }, [`${state.tally.total} votes counted`]));

  if (state.projection !== null) {
    rows.push(
      h("div", { class: "projection-panel" }, [
        h("h3", {}, [`Projection (${state.projection.method})`]),
        h(
          "ul",
          { class: "projection-counts" },
          state.projection.projected_counts.map((count) =>
            h("li", { class: "projection-row" }, [
              `${count.candidate_id}: ${count.votes}`,
            ]),
          ),
        ),
        h("div", { class: "projection-leader" }, [`leader ${state.projection.leader}`]),
        h("div", { class: "projection-win" }, [
          `win probability ${state.projection.win_probability.toFixed(3)}`,
        ]),
      ]),
    );
  }
  if (state.stale) {
    rows.push(h("div", { class: "stale-indicator" }, ["connection lost, showing last good data"]));
  }
  if (state.closed) {
    rows.push(h("div", { class: "final-banner" }, ["Election closed - final results"]));
  }
  if (state.lastUpdated !== null) {
    rows.push(
      h("div", { class: "last-updated" }, [
        `updated ${new Date(state.lastUpdated * 1000).toISOString()}`,
      ]),
    );
  }
  return h("section", { class: "tally-view" }, rows);
}
