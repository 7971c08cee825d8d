/**
 * Read-only client for the portal's JSON API. All querying goes through
 * these endpoints; the UI holds no RDF logic of its own.
 *
 * Searches are latest-wins: issuing a new search aborts the in-flight one.
 */
import { FACETS } from "./state.js";
export function searchUrl(base, state, pageSize = 10) {
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
    constructor(base = "") {
        this.base = base;
        this.inflight = null;
    }
    /** Latest-wins search; an aborted request resolves to null. */
    async search(state, pageSize = 10) {
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
            return (await response.json());
        }
        catch (err) {
            if (controller.signal.aborted) {
                return null;
            }
            throw err;
        }
        finally {
            if (this.inflight === controller) {
                this.inflight = null;
            }
        }
    }
    async facets() {
        const response = await fetch(`${this.base}/api/facets`);
        if (!response.ok) {
            throw new Error(`facets failed: ${response.status}`);
        }
        return await response.json();
    }
    /** Record as expanded JSON-LD (one node object per subject). */
    async record(localPath) {
        const response = await fetch(`${this.base}${localPath}`, {
            headers: { Accept: "application/ld+json" },
        });
        if (response.status === 404) {
            throw new NotFoundError(localPath);
        }
        if (!response.ok) {
            throw new Error(`record fetch failed: ${response.status}`);
        }
        return (await response.json());
    }
    async sparql(query) {
        const response = await fetch(`${this.base}/sparql`, {
            method: "POST",
            headers: { "Content-Type": "application/sparql-query" },
            body: query,
        });
        const payload = await response.json();
        if (!response.ok) {
            return payload;
        }
        return payload;
    }
}
export class NotFoundError extends Error {
    constructor(path) {
        super(`not found: ${path}`);
        this.path = path;
    }
}
