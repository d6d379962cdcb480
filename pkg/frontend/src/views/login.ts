/**
 * Biometric login.
 *
 * Posts NIC + captures to the auth endpoint; acceptance stores the
 * session and routes onward, rejection shows both scores with a retry
 * prompt, and a transport failure shows an error banner without losing
 * entered state.
 */

import { ApiClient, ApiError } from "../api.js";
import { DashboardSession, makeSession } from "../session.js";
import { VNode, h } from "../vdom.js";

export type LoginState =
  | { kind: "idle" }
  | { kind: "pending" }
  | { kind: "rejected"; fingerprintScore: number; faceScore: number }
  | { kind: "error"; message: string }
  | { kind: "authenticated"; session: DashboardSession };

export class LoginController {
  state: LoginState = { kind: "idle" };

  constructor(
    private api: ApiClient,
    private pollIntervalSeconds = 5,
    private onChange: (state: LoginState) => void = () => {},
  ) {}

  private transition(state: LoginState): void {
    this.state = state;
    this.onChange(state);
  }

  async submit(nic: string, fingerprintB64: string, faceB64: string): Promise<LoginState> {
    this.transition({ kind: "pending" });
    try {
      const result = await this.api.authenticate(nic, fingerprintB64, faceB64);
      if (result.accepted && result.session_token) {
        this.api.setToken(result.session_token);
        this.transition({
          kind: "authenticated",
          session: makeSession(
            this.api.baseUrl,
            result.session_token,
            result.role ?? "voter",
            this.pollIntervalSeconds,
          ),
        });
      } else {
        this.transition({
          kind: "rejected",
          fingerprintScore: result.fingerprint_score,
          faceScore: result.face_score,
        });
      }
    } catch (error) {
      const message =
        error instanceof ApiError && error.status > 0
          ? `authentication failed (${error.code})`
          : "cannot reach the election service";
      this.transition({ kind: "error", message });
    }
    return this.state;
  }
}

export function renderLogin(state: LoginState): VNode {
  const rows: VNode[] = [
    h("h1", {}, ["Election officer login"]),
    h("label", {}, ["NIC"]),
    h("input", { class: "login-nic", name: "nic", type: "text" }),
    h("label", {}, ["Fingerprint capture"]),
    h("input", { class: "login-fp", name: "fingerprint", type: "file" }),
    h("label", {}, ["Face capture"]),
    h("input", { class: "login-face", name: "face", type: "file" }),
    h("button", { class: "login-submit", disabled: state.kind === "pending" ? "true" : "" }, [
      state.kind === "pending" ? "Checking..." : "Log in",
    ]),
  ];
  if (state.kind === "rejected") {
    rows.push(
      h("div", { class: "login-retry" }, [
        `Not recognized: fingerprint score ${state.fingerprintScore.toFixed(2)}, ` +
          `face score ${state.faceScore.toFixed(2)}. Please capture again.`,
      ]),
    );
  }
  if (state.kind === "error") {
    rows.push(h("div", { class: "error-banner" }, [state.message]));
  }
  if (state.kind === "authenticated") {
    rows.push(h("div", { class: "login-ok" }, [`Signed in as ${state.session.role}`]));
  }
  return h("section", { class: "login-view" }, rows);
}
