/**
 * Browser bootstrap: wires controllers to the DOM.
 *
 * The only runtime setting is the API base URL (?api=... query parameter
 * or localStorage "votekit_api", default same origin).
 */

import { ApiClient } from "./api.js";
import { navigate, visibleRoutes } from "./router.js";
import { DashboardSession } from "./session.js";
import { VNode, h, mount } from "./vdom.js";
import { LoginController, renderLogin } from "./views/login.js";
import { OpsController, renderOps } from "./views/ops.js";
import { RiskController, renderRiskBoard } from "./views/risk.js";
import { TallyPoller, renderTally } from "./views/tally.js";
import { TurnoutController, renderTurnout } from "./views/turnout.js";

function apiBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery;
  return localStorage.getItem("votekit_api") ?? window.location.origin;
}

function readFileAsBase64(input: HTMLInputElement): Promise<string> {
  return new Promise((resolve, reject) => {
    const file = input.files?.[0];
    if (!file) {
      reject(new Error("no capture file selected"));
      return;
    }
    const reader = new FileReader();
    reader.onload = () => {
      const url = reader.result as string; // data:...;base64,xxxx
      resolve(url.slice(url.indexOf(",") + 1));
    };
    reader.onerror = () => reject(reader.error);
    reader.readAsDataURL(file);
  });
}

class Dashboard {
  private api = new ApiClient(apiBaseUrl());
  private session: DashboardSession | null = null;
  private root = document.getElementById("app")!;
  private poller: TallyPoller | null = null;
  private currentView = "tally";

  private login = new LoginController(this.api, 5, () => this.render());
  private turnout = new TurnoutController(this.api, () => this.render());
  private risk = new RiskController(this.api, () => this.render());
  private ops = new OpsController(this.api, () => this.render());

  start(): void {
    document.addEventListener("visibilitychange", () => {
      this.poller?.setVisible(document.visibilityState === "visible");
    });
    this.render();
  }

  private async handleLogin(): Promise<void> {
    const nic = (document.querySelector(".login-nic") as HTMLInputElement).value;
    try {
      const fp = await readFileAsBase64(document.querySelector(".login-fp") as HTMLInputElement);
      const face = await readFileAsBase64(document.querySelector(".login-face") as HTMLInputElement);
      const state = await this.login.submit(nic, fp, face);
      if (state.kind === "authenticated") {
        this.session = state.session;
      }
    } catch (error) {
      alert(String(error));
    }
    this.render();
  }

  private nav(): VNode {
    const items = visibleRoutes(this.session).map((route) =>
      h(
        "button",
        { class: `nav-${route.name}` },
        [route.name],
        { click: () => this.show(route.name) },
      ),
    );
    return h("nav", { class: "top-nav" }, items);
  }

  private show(name: string): void {
    const result = navigate(this.session, name);
    if (result.kind !== "view") return;
    this.currentView = name;
    if (name === "risk") void this.risk.refresh();
    this.render();
  }

  /** Attach the live panel for one election (called from the ops flow). */
  watchElection(electionId: string, opensAt: number, closesAt: number): void {
    this.poller?.stop();
    this.poller = new TallyPoller(this.api, {
      electionId,
      intervalSeconds: this.session?.pollIntervalSeconds ?? 5,
      closesAt,
      dayFraction: () => {
        const now = Date.now() / 1000;
        return Math.min(Math.max((now - opensAt) / (closesAt - opensAt), 0.001), 1.0);
      },
      onChange: () => this.render(),
    });
    this.poller.start();
  }

  private render(): void {
    if (this.session === null) {
      const view = renderLogin(this.login.state);
      mount(this.root, h("main", {}, [view]));
      const button = this.root.querySelector(".login-submit");
      button?.addEventListener("click", () => void this.handleLogin());
      return;
    }
    let body: VNode;
    switch (this.currentView) {
      case "turnout":
        body = renderTurnout(this.turnout.state);
        break;
      case "risk":
        body = renderRiskBoard(this.risk.state);
        break;
      case "ops":
        body = renderOps(this.ops.state);
        break;
      default:
        body = renderTally(
          this.poller?.state ?? {
            tally: null,
            projection: null,
            stale: false,
            closed: false,
            lastUpdated: null,
          },
        );
    }
    mount(this.root, h("main", {}, [this.nav(), body]));
    this.wire();
  }

  private wire(): void {
    const text = (selector: string) =>
      (this.root.querySelector(selector) as HTMLInputElement | null)?.value ?? "";
    const num = (selector: string) => Number(text(selector));

    this.root.querySelector(".turnout-submit")?.addEventListener("click", () => {
      void this.turnout.submit(num(".turnout-lat"), num(".turnout-lon"), num(".turnout-registered"));
    });
    this.root.querySelector(".turnout-retry")?.addEventListener("click", () => {
      const state = this.turnout.state;
      if (state.kind === "failed") {
        void this.turnout.submit(state.query.lat, state.query.lon, state.query.registered);
      }
    });

    this.root.querySelector(".ops-enroll")?.addEventListener("click", () => {
      void (async () => {
        const fp = await readFileAsBase64(this.root.querySelector(".enroll-fp") as HTMLInputElement);
        const face = await readFileAsBase64(this.root.querySelector(".enroll-face") as HTMLInputElement);
        await this.ops.enroll(text(".enroll-nic"), text(".enroll-name"), text(".enroll-area"), fp, face);
      })().catch((error) => alert(String(error)));
    });
    this.root.querySelector(".ops-create")?.addEventListener("click", () => {
      const candidates = text(".election-candidates")
        .split(",")
        .map((pair) => pair.trim())
        .filter(Boolean)
        .map((pair) => {
          const [id, display] = pair.split(":");
          return { candidate_id: id.trim(), display_name: (display ?? id).trim() };
        });
      const areas = text(".election-areas").split(",").map((a) => a.trim()).filter(Boolean);
      void this.ops
        .createElection(text(".election-name"), areas, candidates,
                        num(".election-opens"), num(".election-closes"))
        .then(() => {
          const election = this.ops.state.election;
          if (election) this.watchElection(election.election_id, election.opens_at, election.closes_at);
        });
    });
    this.root.querySelector(".ops-open")?.addEventListener("click", () => void this.ops.openElection());
    this.root.querySelector(".ops-close")?.addEventListener("click", () => {
      void this.ops.closeElection().then(() => this.poller?.markClosed());
    });
    this.root.querySelector(".ops-issue")?.addEventListener("click", () => {
      void this.ops.issueToken(text(".token-nic"));
    });
  }
}

new Dashboard().start();
