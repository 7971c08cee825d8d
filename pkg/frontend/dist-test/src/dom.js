/** Thin DOM layer: renders the view models. Browser-only. */
function el(tag, text, className) {
    const node = document.createElement(tag);
    if (text !== undefined) {
        node.textContent = text;
    }
    if (className !== undefined) {
        node.className = className;
    }
    return node;
}
export function renderFacetPanel(target, model, handlers) {
    target.replaceChildren();
    const chipRow = el("div", undefined, "chips");
    for (const chip of model.chips) {
        const button = el("button", `${chip.facet}: ${chip.value} ✕`, "chip");
        button.addEventListener("click", () => handlers.onChipRemove(chip.facet));
        chipRow.append(button);
    }
    target.append(chipRow);
    if (model.empty) {
        target.append(el("p", "no matches", "empty"));
    }
    for (const group of model.groups) {
        const heading = el("h3", group.facet);
        const list = el("ul", undefined, "facet-values");
        for (const entry of group.entries) {
            const item = el("li");
            const link = el("a", `${entry.value} (${entry.count})`, entry.active ? "active" : "");
            link.href = "#";
            link.addEventListener("click", (event) => {
                event.preventDefault();
                handlers.onFacetClick(entry.facet, entry.value);
            });
            item.append(link);
            list.append(item);
        }
        target.append(heading, list);
    }
}
export function renderResults(target, model, handlers) {
    target.replaceChildren();
    target.append(el("p", `${model.total} result(s)`, "total"));
    const list = el("ol");
    for (const row of model.rows) {
        const item = el("li");
        const link = el("a", row.title);
        link.href = row.localPath;
        link.addEventListener("click", (event) => {
            event.preventDefault();
            handlers.onOpenRecord(row.localPath);
        });
        item.append(link, el("small", row.languages ? ` ${row.languages}` : ""));
        list.append(item);
    }
    target.append(list);
    const pages = el("div", undefined, "pager");
    if (model.page > 1) {
        const prev = el("button", "previous");
        prev.addEventListener("click", () => handlers.onPage(model.page - 1));
        pages.append(prev);
    }
    if (model.page * model.pageSize < model.total) {
        const next = el("button", "next");
        next.addEventListener("click", () => handlers.onPage(model.page + 1));
        pages.append(next);
    }
    target.append(pages);
}
export function renderRecordView(target, model, onSearchValue) {
    target.replaceChildren();
    target.append(el("h2", model.title));
    const formats = el("p", undefined, "formats");
    for (const link of model.formatLinks) {
        const anchor = el("a", link.label);
        anchor.href = link.href;
        formats.append(anchor, document.createTextNode(" "));
    }
    target.append(formats, el("p", "Instance of: Resource Info"));
    const table = el("table");
    for (const row of model.rows) {
        const tr = el("tr");
        tr.append(el("td", row.label));
        const valueCell = el("td");
        if (row.isLink) {
            const anchor = el("a", row.value);
            anchor.href = row.value;
            valueCell.append(anchor);
        }
        else {
            valueCell.textContent = row.value;
        }
        tr.append(valueCell);
        const actionCell = el("td");
        if (row.searchFacet !== null) {
            const facet = row.searchFacet;
            const button = el("button", "🔍");
            button.title = "search this value";
            button.addEventListener("click", () => onSearchValue(facet, row.value));
            actionCell.append(button);
        }
        tr.append(actionCell);
        table.append(tr);
    }
    target.append(table);
}
export function renderSparqlTable(target, model) {
    target.replaceChildren();
    if (model.message !== null) {
        target.append(el("p", model.message, "message"));
        if (model.vars.length === 0) {
            return;
        }
    }
    const table = el("table");
    const header = el("tr");
    for (const name of model.vars) {
        header.append(el("th", `?${name}`));
    }
    table.append(header);
    for (const row of model.rows) {
        const tr = el("tr");
        for (const cell of row) {
            tr.append(el("td", cell));
        }
        table.append(tr);
    }
    target.append(table);
}
export function renderErrorBanner(target, message) {
    const banner = el("div", message, "error-banner");
    target.prepend(banner);
    setTimeout(() => banner.remove(), 6000);
}
