// Thin fetch wrappers over the answer engine's HTTP API.

import type { PageView, ResultRecord } from "./types.js";

export async function submitQuery(question: string, minHits?: number,
                                  forcedLevel?: string): Promise<ResultRecord> {
  const body: Record<string, unknown> = { question };
  if (minHits !== undefined) body.minHits = minHits;
  if (forcedLevel !== undefined) body.forcedLevel = forcedLevel;
  const response = await fetch("/api/query", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    const detail = await response.json().catch(() => ({ error: response.statusText }));
    throw new Error(detail.error ?? `query failed: ${response.status}`);
  }
  return response.json() as Promise<ResultRecord>;
}

export async function fetchPage(name: string, question: string): Promise<PageView> {
  const url = `/api/pages/${encodeURIComponent(name)}?q=${encodeURIComponent(question)}`;
  const response = await fetch(url);
  if (response.status === 404) {
    throw new Error(`page not found: ${name}`);
  }
  if (!response.ok) {
    throw new Error(`page fetch failed: ${response.status}`);
  }
  return response.json() as Promise<PageView>;
}

export async function fetchPages(): Promise<string[]> {
  const response = await fetch("/api/pages");
  if (!response.ok) {
    throw new Error(`page list failed: ${response.status}`);
  }
  return response.json() as Promise<string[]>;
}
