/**
 * Role-gated routing.  A view below the session's role is unreachable:
 * navigation returns an access-denied marker instead of the view, and no
 * controller (hence no request) is ever created for it.
 */

import { DashboardSession, Role, roleAtLeast } from "./session.js";

export interface RouteSpec {
  name: string;
  minRole: Role;
}

export const ROUTES: RouteSpec[] = [
  { name: "tally", minRole: "voter" },
  { name: "turnout", minRole: "officer" },
  { name: "ops", minRole: "officer" },
  { name: "risk", minRole: "admin" },
];

export type NavigationResult =
  | { kind: "view"; name: string }
  | { kind: "denied"; name: string; requires: Role }
  | { kind: "unknown"; name: string };

export function navigate(session: DashboardSession | null, name: string): NavigationResult {
  const route = ROUTES.find((r) => r.name === name);
  if (!route) return { kind: "unknown", name };
  if (session === null || !roleAtLeast(session.role, route.minRole)) {
    return { kind: "denied", name, requires: route.minRole };
  }
  return { kind: "view", name };
}

export function visibleRoutes(session: DashboardSession | null): RouteSpec[] {
  if (session === null) return [];
  return ROUTES.filter((route) => roleAtLeast(session.role, route.minRole));
}
