/** Transport stub: canned responses keyed by method + path prefix. */

import { FetchLike } from "../src/api.js";

export interface StubRoute {
  method: string;
  path: string; // prefix match against the request path
  status?: number;
  body: unknown;
}

export interface StubApi {
  fetchImpl: FetchLike;
  calls: { method: string; path: string }[];
  countMatching(prefix: string): number;
}

export function stubTransport(routes: StubRoute[]): StubApi {
  const calls: { method: string; path: string }[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    calls.push({ method, path });
    const route = routes
      .filter((r) => r.method === method && path.startsWith(r.path))
      .sort((a, b) => b.path.length - a.path.length)[0];
    if (!route) {
      return new Response(JSON.stringify({ error: "not_found", detail: path }), { status: 404 });
    }
    return new Response(JSON.stringify(route.body), { status: route.status ?? 200 });
  };
  return {
    fetchImpl,
    calls,
    countMatching: (prefix) => calls.filter((c) => c.path.startsWith(prefix)).length,
  };
}

export function failingTransport(): FetchLike {
  return async () => {
    throw new TypeError("network down");
  };
}
