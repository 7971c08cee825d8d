/**
 * Browse state, fully encoded in the page URL so every view is shareable
 * and back/forward restores it exactly.
 */
export const FACETS = [
    "Title",
    "Description",
    "Language",
    "Type",
    "Rights",
    "Creator",
    "Subject",
    "ContactPoint",
    "AccessUrl",
];
export function emptyState() {
    return { activeFilters: {}, textQuery: "", page: 1 };
}
const FACET_LOOKUP = new Map(FACETS.map((f) => [f.toLowerCase(), f]));
/** Encode a state into a query string ("" for the empty state). */
export function encodeState(state) {
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
    if (state.page > 1) {
        params.set("page", String(state.page));
    }
    const text = params.toString();
    return text ? `?${text}` : "";
}
/** Decode a query string (with or without the leading "?"). */
export function decodeState(search) {
    const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
    const state = emptyState();
    for (const [key, value] of params.entries()) {
        if (key === "q") {
            state.textQuery = value;
        }
        else if (key === "page") {
            const page = Number.parseInt(value, 10);
            if (Number.isFinite(page) && page >= 1) {
                state.page = page;
            }
        }
        else {
            const facet = FACET_LOOKUP.get(key.toLowerCase());
            if (facet !== undefined) {
                state.activeFilters[facet] = value;
            }
        }
    }
    return state;
}
export function statesEqual(a, b) {
    return encodeState(a) === encodeState(b);
}
/** Clicking a facet value adds (or replaces) that filter and resets paging. */
export function withFilter(state, facet, value) {
    return {
        activeFilters: { ...state.activeFilters, [facet]: value },
        textQuery: state.textQuery,
        page: 1,
    };
}
export function withoutFilter(state, facet) {
    const filters = { ...state.activeFilters };
    delete filters[facet];
    return { activeFilters: filters, textQuery: state.textQuery, page: 1 };
}
export function withTextQuery(state, text) {
    return { activeFilters: { ...state.activeFilters }, textQuery: text, page: 1 };
}
export function withPage(state, page) {
    return { activeFilters: { ...state.activeFilters }, textQuery: state.textQuery, page };
}
