/**
 * Read-only client for the portal's JSON API. All querying goes through
 * these endpoints; the UI holds no RDF logic of its own.
 *
 * Searches are latest-wins: issuing a new search aborts the in-flight one.
 */

import { BrowseState, FACETS } from "./state.js";

export interface FacetCount {
  value: string;
  count: number;
}

export interface SearchResponse {
  total: number;
  page: number;
  pageSize: number;
  results: Array<{
    id: string;
    title: string | null;
    languages: string[];
    type: string | null;
  }>;
  facets: Record<string, FacetCount[]>;
}

export interface SparqlCell {
  type: "uri" | "literal" | "bnode";
  value: string;
  "xml:lang"?: string;
  datatype?: string;
}

export interface SparqlResponse {
  head: { vars: string[] };
  results: { bindings: Array<Record<string, SparqlCell>> };
}

export interface SparqlError {
  error: string;
  line?: number;
  column?: number;
  detail?: string;
  token?: string;
}

/** Expanded JSON-LD node object as served at /resource/... */
export type JsonLdNode = Record<string, unknown> & { "@id": string };

export function searchUrl(base: string, state: BrowseState, pageSize = 10): string {
  const params = new URLSearchParams();
  if (state.textQuery) {
    params.set("q", state.textQuery);
  }
  for (const facet of FACETS) {
    const value = state.activeFilters[facet];
    if (value !== undefined) {
      params.set(facet.toLowerCase(), value);
    }
  }
  params.set("page", String(state.page));
  params.set("pageSize", String(pageSize));
  return `${base}/api/search?${params.toString()}`;
}

export class PortalClient {
  private inflight: AbortController | null = null;

  constructor(readonly base: string = "") {}

  /** Latest-wins search; an aborted request resolves to null. */
  async search(state: BrowseState, pageSize = 10): Promise<SearchResponse | null> {
    if (this.inflight !== null) {
      this.inflight.abort();
    }
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await fetch(searchUrl(this.base, state, pageSize), {
        signal: controller.signal,
      });
      if (!response.ok) {
        throw new Error(`search failed: ${response.status}`);
      }
      return (await response.json()) as SearchResponse;
    } catch (err) {
      if (controller.signal.aborted) {
        return null;
      }
      throw err;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }

  async facets(): Promise<{ total: number; facets: Record<string, FacetCount[]> }> {
    const response = await fetch(`${this.base}/api/facets`);
    if (!response.ok) {
      throw new Error(`facets failed: ${response.status}`);
    }
    return await response.json();
  }

  /** Record as expanded JSON-LD (one node object per subject). */
  async record(localPath: string): Promise<JsonLdNode[]> {
    const response = await fetch(`${this.base}${localPath}`, {
      headers: { Accept: "application/ld+json" },
    });
    if (response.status === 404) {
      throw new NotFoundError(localPath);
    }
    if (!response.ok) {
      throw new Error(`record fetch failed: ${response.status}`);
    }
    return (await response.json()) as JsonLdNode[];
  }

  async sparql(query: string): Promise<SparqlResponse | SparqlError> {
    const response = await fetch(`${this.base}/sparql`, {
      method: "POST",
      headers: { "Content-Type": "application/sparql-query" },
      body: query,
    });
    const payload = await response.json();
    if (!response.ok) {
      return payload as SparqlError;
    }
    return payload as SparqlResponse;
  }
}

export class NotFoundError extends Error {
  constructor(readonly path: string) {
    super(`not found: ${path}`);
  }
}
