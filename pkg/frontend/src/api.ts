/**
 * Typed client for the votekit HTTP API.
 *
 * Every dashboard number comes from one of these calls; the views do no
 * computation of record.  `fetchImpl` is injectable so tests can stub the
 * transport completely.
 */

export interface AuthResponse {
  accepted: boolean;
  fingerprint_score: number;
  face_score: number;
  session_token?: string;
  role?: string;
}

export interface CandidateCount {
  candidate_id: string;
  votes: number;
}

export interface TallyDocument {
  election_id: string;
  as_of: number;
  counts: CandidateCount[];
  per_area: { area_code: string; candidate_id: string; votes: number }[];
  total: number;
}

export interface ProjectionDocument {
  election_id: string;
  method: string;
  as_of_fraction: number;
  projected_counts: CandidateCount[];
  projected_total: number;
  leader: string;
  win_probability: number;
}

export interface TurnoutPredictionDocument {
  predicted_turnout_pct: number;
  predicted_participants: number;
  features_used: Record<string, number>;
  model_id: string;
}

export interface RiskArea {
  area_code: string;
  probability: number;
  tier: "low" | "medium" | "high";
  model_id: string;
}

export interface ElectionSummary {
  election_id: string;
  name: string;
  status: "draft" | "open" | "closed";
  area_codes: string[];
  candidates: { candidate_id: string; display_name: string }[];
  opens_at: number;
  closes_at: number;
}

export interface VerifyDocument {
  valid: boolean;
  first_bad_index: number | null;
  entries: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private token: string | null = null,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiError(0, "network", `cannot reach ${this.baseUrl}: ${String(error)}`);
    }
    let doc: unknown = null;
    try {
      doc = await response.json();
    } catch {
      doc = null;
    }
    if (!response.ok) {
      const err = (doc ?? {}) as { error?: string; detail?: unknown };
      throw new ApiError(response.status, err.error ?? "http_error", JSON.stringify(err.detail ?? response.status));
    }
    return doc as T;
  }

  authenticate(nic: string, fingerprintB64: string, faceB64: string): Promise<AuthResponse> {
    return this.request("POST", "/api/auth/biometric", {
      nic,
      fingerprint_b64: fingerprintB64,
      face_b64: faceB64,
    });
  }

  enrollVoter(body: {
    nic: string;
    full_name: string;
    area_code: string;
    fingerprint_b64: string;
    face_b64: string;
  }): Promise<{ nic: string; composite_id: string }> {
    return this.request("POST", "/api/voters", body);
  }

  createElection(body: {
    name: string;
    area_codes: string[];
    candidates: { candidate_id: string; display_name: string }[];
    opens_at: number;
    closes_at: number;
  }): Promise<ElectionSummary> {
    return this.request("POST", "/api/elections", body);
  }

  openElection(electionId: string): Promise<ElectionSummary> {
    return this.request("POST", `/api/elections/${electionId}/open`);
  }

  closeElection(electionId: string): Promise<ElectionSummary> {
    return this.request("POST", `/api/elections/${electionId}/close`);
  }

  issueQrToken(electionId: string, voterNic: string): Promise<{ qr_payload: string; expires_at: number }> {
    return this.request("POST", `/api/elections/${electionId}/qr-tokens`, { voter_nic: voterNic });
  }

  tally(electionId: string): Promise<TallyDocument> {
    return this.request("GET", `/api/elections/${electionId}/tally`);
  }

  projection(electionId: string, t: number): Promise<ProjectionDocument> {
    return this.request("GET", `/api/elections/${electionId}/projection?t=${t}`);
  }

  turnoutPrediction(lat: number, lon: number, registered: number): Promise<TurnoutPredictionDocument> {
    return this.request(
      "GET",
      `/api/predictions/turnout?lat=${lat}&lon=${lon}&registered=${registered}`,
    );
  }

  violenceBoard(): Promise<{ areas: RiskArea[] }> {
    return this.request("GET", "/api/predictions/violence");
  }

  verifyAudit(): Promise<VerifyDocument> {
    return this.request("GET", "/api/audit/verify");
  }
}
