import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { textOf, findByClass } from "../src/vdom.js";
import { LoginController, renderLogin } from "../src/views/login.js";
import { failingTransport, stubTransport } from "./helpers.js";

const ACCEPT = {
  accepted: true,
  fingerprint_score: 1.0,
  face_score: 0.97,
  session_token: "sess-abc",
  role: "admin",
};

const REJECT = { accepted: false, fingerprint_score: 0.62, face_score: 0.91 };

describe("login view", () => {
  it("accepted login yields an authenticated session with the served role", async () => {
    const stub = stubTransport([{ method: "POST", path: "/api/auth/biometric", body: ACCEPT }]);
    const controller = new LoginController(new ApiClient("http://svc", null, stub.fetchImpl));
    const state = await controller.submit("901234567V", "ZmluZ2Vy", "ZmFjZQ==");
    expect(state.kind).toBe("authenticated");
    if (state.kind === "authenticated") {
      expect(state.session.sessionToken).toBe("sess-abc");
      expect(state.session.role).toBe("admin");
      expect(state.session.pollIntervalSeconds).toBe(5);
    }
  });

  it("rejected login renders both scores and a retry prompt", async () => {
    const stub = stubTransport([{ method: "POST", path: "/api/auth/biometric", body: REJECT }]);
    const controller = new LoginController(new ApiClient("http://svc", null, stub.fetchImpl));
    await controller.submit("901234567V", "eA==", "eQ==");
    const view = renderLogin(controller.state);
    const prompt = findByClass(view, "login-retry");
    expect(prompt).toHaveLength(1);
    expect(textOf(prompt[0])).toContain("0.62");
    expect(textOf(prompt[0])).toContain("0.91");
    expect(textOf(prompt[0]).toLowerCase()).toContain("again");
  });

  it("network failure shows an error banner, never a blank view", async () => {
    const controller = new LoginController(new ApiClient("http://svc", null, failingTransport()));
    await controller.submit("901234567V", "eA==", "eQ==");
    const view = renderLogin(controller.state);
    const banner = findByClass(view, "error-banner");
    expect(banner).toHaveLength(1);
    expect(textOf(banner[0])).toContain("cannot reach");
    expect(textOf(view).length).toBeGreaterThan(0);
  });

  it("http 401 surfaces as a retry message", async () => {
    const stub = stubTransport([
      { method: "POST", path: "/api/auth/biometric", status: 401, body: { error: "invalid_credential" } },
    ]);
    const controller = new LoginController(new ApiClient("http://svc", null, stub.fetchImpl));
    await controller.submit("901234567V", "eA==", "eQ==");
    expect(controller.state.kind).toBe("error");
    const view = renderLogin(controller.state);
    expect(findByClass(view, "error-banner")).toHaveLength(1);
  });
});
