/**
 * Pure view models: plain data shaped for rendering, kept free of DOM so
 * the node test runner can exercise them directly against API payloads.
 */
import { FACETS } from "./state.js";
export function facetPanelModel(state, response) {
    const groups = [];
    for (const facet of FACETS) {
        const counts = response.facets[facet] ?? [];
        if (counts.length === 0) {
            continue;
        }
        groups.push({
            facet,
            entries: counts.map((row) => ({
                facet,
                value: row.value,
                count: row.count,
                active: state.activeFilters[facet] === row.value,
            })),
        });
    }
    const chips = [];
    for (const facet of FACETS) {
        const value = state.activeFilters[facet];
        if (value !== undefined) {
            chips.push({ facet, value });
        }
    }
    return { groups, chips, empty: response.total === 0 };
}
function localPathOf(recordId) {
    const cut = recordId.indexOf("/resource/");
    return cut >= 0 ? recordId.slice(cut) : recordId;
}
export function resultListModel(response) {
    return {
        total: response.total,
        page: response.page,
        pageSize: response.pageSize,
        rows: response.results.map((row) => ({
            id: row.id,
            localPath: localPathOf(row.id),
            title: row.title ?? row.id,
            languages: row.languages.join(", "),
        })),
    };
}
// -- record view --------------------------------------------------------------
const DCT = "http://purl.org/dc/terms/";
const DCAT = "http://www.w3.org/ns/dcat#";
const RDFS_SEE_ALSO = "http://www.w3.org/2000/01/rdf-schema#seeAlso";
/** Property rows shown in the record table, in display order. */
const RECORD_ROWS = [
    { label: "Description", predicate: DCT + "description", facet: "Description" },
    { label: "Language", predicate: DCT + "language", facet: "Language" },
    { label: "Type", predicate: DCT + "type", facet: "Type" },
    { label: "Rights", predicate: DCT + "rights", facet: "Rights" },
    { label: "Creator", predicate: DCT + "creator", facet: "Creator" },
    { label: "Subject", predicate: DCT + "subject", facet: "Subject" },
    { label: "Contact Point", predicate: DCAT + "contactPoint", facet: "ContactPoint" },
    { label: "Access URL", predicate: DCAT + "accessURL", facet: "AccessUrl" },
    { label: "See Also", predicate: RDFS_SEE_ALSO, facet: null },
];
function valuesOf(node, predicate) {
    const raw = node[predicate];
    if (!Array.isArray(raw)) {
        return [];
    }
    const out = [];
    for (const entry of raw) {
        if (typeof entry !== "object" || entry === null) {
            continue;
        }
        const cell = entry;
        if (typeof cell["@value"] === "string") {
            out.push({ text: cell["@value"], isRef: false });
        }
        else if (typeof cell["@id"] === "string" && !cell["@id"].startsWith("_:")) {
            out.push({ text: cell["@id"], isRef: true });
        }
    }
    return out;
}
export function recordViewModel(recordId, nodes) {
    const node = nodes.find((n) => n["@id"] === recordId) ?? nodes[0];
    if (node === undefined) {
        throw new Error("empty record document");
    }
    const titles = valuesOf(node, DCT + "title");
    const rows = [];
    for (const spec of RECORD_ROWS) {
        for (const value of valuesOf(node, spec.predicate)) {
            rows.push({
                label: spec.label,
                value: value.text,
                isLink: value.isRef,
                searchFacet: value.isRef && spec.facet === null ? null : spec.facet,
            });
        }
    }
    const localPath = localPathOf(node["@id"]);
    return {
        id: node["@id"],
        title: titles.length > 0 ? titles[0].text : node["@id"],
        rows,
        formatLinks: [
            { label: "RDF/XML", href: `${localPath}.rdf` },
            { label: "N-Triples", href: `${localPath}.nt` },
            { label: "Turtle", href: `${localPath}.ttl` },
            { label: "JSON-LD", href: `${localPath}.jsonld` },
        ],
    };
}
// -- sparql console ------------------------------------------------------------
export const SPARQL_TEMPLATES = [
    {
        name: "by language",
        query: 'PREFIX dct: <http://purl.org/dc/terms/>\nSELECT ?resource WHERE {\n  ?resource dct:language "es"\n} LIMIT 50',
    },
    {
        name: "by type and text",
        query: 'PREFIX dct: <http://purl.org/dc/terms/>\nSELECT DISTINCT ?resource WHERE {\n  ?resource dct:type "Corpus" .\n  ?resource dct:description ?d .\n  FILTER(regex(?d, "spanish", "i"))\n} LIMIT 50',
    },
    {
        name: "by rights",
        query: 'PREFIX dct: <http://purl.org/dc/terms/>\nSELECT ?resource ?rights WHERE {\n  ?resource dct:rights ?rights .\n  FILTER(contains(lcase(?rights), "gpl"))\n} LIMIT 50',
    },
];
export function sparqlTableModel(payload) {
    if ("error" in payload) {
        const position = payload.line !== undefined && payload.column !== undefined
            ? ` at line ${payload.line}, column ${payload.column}`
            : "";
        return { vars: [], rows: [], message: `${payload.error}${position}${payload.detail ? ": " + payload.detail : ""}` };
    }
    const vars = payload.head.vars;
    const rows = payload.results.bindings.map((binding) => vars.map((name) => formatCell(binding[name])));
    return { vars, rows, message: rows.length === 0 ? "0 results" : null };
}
function formatCell(cell) {
    if (cell === undefined) {
        return "";
    }
    if (cell.type === "uri") {
        return cell.value;
    }
    if (cell.type === "bnode") {
        return `_:${cell.value}`;
    }
    if (cell["xml:lang"]) {
        return `${cell.value}@${cell["xml:lang"]}`;
    }
    return cell.value;
}
