/** Dashboard session and the role order shared with the backend. */

export const ROLE_ORDER = ["voter", "officer", "admin", "super_admin"] as const;

export type Role = (typeof ROLE_ORDER)[number];

export interface DashboardSession {
  apiBaseUrl: string;
  sessionToken: string;
  role: Role;
  pollIntervalSeconds: number;
}

export function roleAtLeast(role: Role, required: Role): boolean {
  return ROLE_ORDER.indexOf(role) >= ROLE_ORDER.indexOf(required);
}

export function makeSession(
  apiBaseUrl: string,
  sessionToken: string,
  role: string,
  pollIntervalSeconds = 5,
): DashboardSession {
  if (!ROLE_ORDER.includes(role as Role)) {
    throw new Error(`unknown role: ${role}`);
  }
  return { apiBaseUrl, sessionToken, role: role as Role, pollIntervalSeconds };
}
