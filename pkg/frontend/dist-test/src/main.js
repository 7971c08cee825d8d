/**
 * Entry point: wires state, API, and rendering together.
 *
 * The full browse state lives in the URL; navigation pushes history
 * entries and popstate re-renders, so links are shareable and
 * back/forward work. The UI never mutates server state.
 */
import { NotFoundError, PortalClient } from "./api.js";
import { renderErrorBanner, renderFacetPanel, renderRecordView, renderResults, renderSparqlTable, } from "./dom.js";
import { decodeState, encodeState, withFilter, withPage, withTextQuery, withoutFilter, } from "./state.js";
import { SPARQL_TEMPLATES, facetPanelModel, recordViewModel, resultListModel, sparqlTableModel, } from "./views.js";
const client = new PortalClient("");
function mount(id) {
    const node = document.getElementById(id);
    if (node === null) {
        throw new Error(`missing mount point #${id}`);
    }
    return node;
}
let currentState = decodeState(window.location.search);
async function refresh(push) {
    const facetsTarget = mount("facets");
    const resultsTarget = mount("results");
    if (push) {
        history.pushState(null, "", window.location.pathname + encodeState(currentState));
    }
    try {
        const response = await client.search(currentState);
        if (response === null) {
            return; // a newer search superseded this one
        }
        renderFacetPanel(facetsTarget, facetPanelModel(currentState, response), handlers);
        renderResults(resultsTarget, resultListModel(response), handlers);
    }
    catch (err) {
        renderErrorBanner(document.body, `search failed: ${String(err)}`);
    }
}
const handlers = {
    onFacetClick(facet, value) {
        currentState = withFilter(currentState, facet, value);
        void refresh(true);
    },
    onChipRemove(facet) {
        currentState = withoutFilter(currentState, facet);
        void refresh(true);
    },
    onOpenRecord(localPath) {
        void openRecord(localPath);
    },
    onPage(page) {
        currentState = withPage(currentState, page);
        void refresh(true);
    },
};
async function openRecord(localPath) {
    const target = mount("record");
    try {
        const nodes = await client.record(localPath);
        const recordId = nodes.map((n) => n["@id"]).find((id) => id.includes("/resource/")) ?? "";
        renderRecordView(target, recordViewModel(recordId, nodes), (facet, value) => {
            currentState = withFilter(currentState, facet, value);
            target.replaceChildren();
            void refresh(true);
        });
    }
    catch (err) {
        if (err instanceof NotFoundError) {
            target.replaceChildren();
            target.append(Object.assign(document.createElement("p"), { textContent: "record not found" }));
            return;
        }
        renderErrorBanner(document.body, `record failed: ${String(err)}`);
    }
}
function wireSearchBox() {
    const box = mount("query");
    const form = mount("search-form");
    box.value = currentState.textQuery;
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        currentState = withTextQuery(currentState, box.value);
        void refresh(true);
    });
}
function wireSparqlConsole() {
    const textarea = mount("sparql-text");
    const runButton = mount("sparql-run");
    const templatesTarget = mount("sparql-templates");
    const output = mount("sparql-out");
    for (const template of SPARQL_TEMPLATES) {
        const button = document.createElement("button");
        button.textContent = template.name;
        button.addEventListener("click", () => {
            textarea.value = template.query;
        });
        templatesTarget.append(button);
    }
    runButton.addEventListener("click", () => {
        void (async () => {
            const payload = await client.sparql(textarea.value);
            renderSparqlTable(output, sparqlTableModel(payload));
        })();
    });
}
window.addEventListener("popstate", () => {
    currentState = decodeState(window.location.search);
    void refresh(false);
});
wireSearchBox();
wireSparqlConsole();
void refresh(false);
