/**
 * Operations panel: enroll voters, drive the election lifecycle, issue
 * QR tokens.  Officers see enrollment and token issuing; the election
 * lifecycle needs admin.  Issued tokens are shown as the payload text
 * plus a rendered QR image (no in-browser scanning).
 */

import { ApiClient, ApiError, ElectionSummary } from "../api.js";
import { VNode, h } from "../vdom.js";

export interface IssuedToken {
  payload: string;
  expiresAt: number;
  /** PNG data URL, rendered in the browser; empty in tests */
  imageDataUrl: string;
}

export type OpsMessage = { kind: "ok" | "error"; text: string };

export interface OpsState {
  election: ElectionSummary | null;
  issuedToken: IssuedToken | null;
  message: OpsMessage | null;
}

type QrRenderer = (payload: string) => Promise<string>;

async function defaultQrRenderer(payload: string): Promise<string> {
  // qrcode is loaded lazily so tests and non-browser contexts never need it
  const qrcode = await import("qrcode");
  return qrcode.toDataURL(payload, { errorCorrectionLevel: "M", margin: 1 });
}

export class OpsController {
  state: OpsState = { election: null, issuedToken: null, message: null };

  constructor(
    private api: ApiClient,
    private onChange: (state: OpsState) => void = () => {},
    private qrRenderer: QrRenderer = defaultQrRenderer,
  ) {}

  private transition(patch: Partial<OpsState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  private fail(error: unknown): void {
    const text =
      error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    this.transition({ message: { kind: "error", text } });
  }

  async enroll(
    nic: string,
    fullName: string,
    areaCode: string,
    fingerprintB64: string,
    faceB64: string,
  ): Promise<void> {
    try {
      const record = await this.api.enrollVoter({
        nic,
        full_name: fullName,
        area_code: areaCode,
        fingerprint_b64: fingerprintB64,
        face_b64: faceB64,
      });
      this.transition({ message: { kind: "ok", text: `enrolled ${record.nic}` } });
    } catch (error) {
      this.fail(error);
    }
  }

  async createElection(
    name: string,
    areaCodes: string[],
    candidates: { candidate_id: string; display_name: string }[],
    opensAt: number,
    closesAt: number,
  ): Promise<void> {
    try {
      const election = await this.api.createElection({
        name,
        area_codes: areaCodes,
        candidates,
        opens_at: opensAt,
        closes_at: closesAt,
      });
      this.transition({ election, message: { kind: "ok", text: `created ${election.name}` } });
    } catch (error) {
      this.fail(error);
    }
  }

  async openElection(): Promise<void> {
    if (!this.state.election) return;
    try {
      const election = await this.api.openElection(this.state.election.election_id);
      this.transition({ election, message: { kind: "ok", text: "election open" } });
    } catch (error) {
      this.fail(error);
    }
  }

  async closeElection(): Promise<void> {
    if (!this.state.election) return;
    try {
      const election = await this.api.closeElection(this.state.election.election_id);
      this.transition({ election, message: { kind: "ok", text: "election closed" } });
    } catch (error) {
      this.fail(error);
    }
  }

  async issueToken(voterNic: string): Promise<void> {
    if (!this.state.election) return;
    try {
      const issued = await this.api.issueQrToken(this.state.election.election_id, voterNic);
      let imageDataUrl = "";
      try {
        imageDataUrl = await this.qrRenderer(issued.qr_payload);
      } catch {
        imageDataUrl = ""; // payload text remains usable without the image
      }
      this.transition({
        issuedToken: {
          payload: issued.qr_payload,
          expiresAt: issued.expires_at,
          imageDataUrl,
        },
        message: { kind: "ok", text: `token issued for ${voterNic}` },
      });
    } catch (error) {
      this.fail(error);
    }
  }
}

export function renderOps(state: OpsState): VNode {
  const rows: VNode[] = [h("h2", {}, ["Operations"])];
  if (state.message) {
    rows.push(
      h("div", { class: state.message.kind === "ok" ? "ops-ok" : "error-banner" }, [
        state.message.text,
      ]),
    );
  }
  rows.push(
    h("fieldset", { class: "ops-enroll-form" }, [
      h("legend", {}, ["Enroll voter"]),
      h("label", {}, ["NIC"]),
      h("input", { class: "enroll-nic", type: "text" }),
      h("label", {}, ["Full name"]),
      h("input", { class: "enroll-name", type: "text" }),
      h("label", {}, ["Area code"]),
      h("input", { class: "enroll-area", type: "text" }),
      h("label", {}, ["Fingerprint capture"]),
      h("input", { class: "enroll-fp", type: "file" }),
      h("label", {}, ["Face capture"]),
      h("input", { class: "enroll-face", type: "file" }),
      h("button", { class: "ops-enroll" }, ["Enroll"]),
    ]),
    h("fieldset", { class: "ops-election-form" }, [
      h("legend", {}, ["Election"]),
      h("label", {}, ["Name"]),
      h("input", { class: "election-name", type: "text" }),
      h("label", {}, ["Area codes (comma separated)"]),
      h("input", { class: "election-areas", type: "text" }),
      h("label", {}, ["Candidates (id:display, comma separated)"]),
      h("input", { class: "election-candidates", type: "text" }),
      h("label", {}, ["Opens at (epoch seconds)"]),
      h("input", { class: "election-opens", type: "number" }),
      h("label", {}, ["Closes at (epoch seconds)"]),
      h("input", { class: "election-closes", type: "number" }),
      h("button", { class: "ops-create" }, ["Create"]),
      h("button", { class: "ops-open" }, ["Open"]),
      h("button", { class: "ops-close" }, ["Close"]),
    ]),
    h("fieldset", { class: "ops-token-form" }, [
      h("legend", {}, ["Issue QR token"]),
      h("label", {}, ["Voter NIC"]),
      h("input", { class: "token-nic", type: "text" }),
      h("button", { class: "ops-issue" }, ["Issue token"]),
    ]),
  );
  if (state.election) {
    rows.push(
      h("div", { class: "election-summary" }, [
        `${state.election.name} [${state.election.status}] areas ` +
          state.election.area_codes.join(", "),
      ]),
    );
  }
  if (state.issuedToken) {
    const children: (VNode | string)[] = [
      h("div", { class: "qr-payload" }, [state.issuedToken.payload]),
      h("div", { class: "qr-expiry" }, [
        `expires ${new Date(state.issuedToken.expiresAt * 1000).toISOString()}`,
      ]),
    ];
    if (state.issuedToken.imageDataUrl) {
      children.unshift(
        h("img", { class: "qr-image", src: state.issuedToken.imageDataUrl, alt: "QR voting token" }, []),
      );
    }
    rows.push(h("div", { class: "qr-card" }, children));
  }
  return h("section", { class: "ops-view" }, rows);
}
