// HTML renderers for the queue and line views. Pure string builders so they
// can be tested against recorded server payloads without a DOM.
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#x27;");
}
// Renders the glyph matrix the same way the server's HTML view does: one
// row per half-row offset (top first), a right-aligned gutter, and one
// color class per symbol class. Unknown cells display as a loud "?".
export function renderGrid(cells) {
    const byRow = new Map();
    for (const cell of cells) {
        const row = byRow.get(cell.row);
        if (row) {
            row.push(cell);
        }
        else {
            byRow.set(cell.row, [cell]);
        }
    }
    if (!byRow.has(0)) {
        byRow.set(0, []);
    }
    const rows = [...byRow.keys()].sort((a, b) => a - b);
    const out = [];
    for (const row of rows) {
        const rowCells = byRow.get(row);
        const width = rowCells.reduce((w, c) => Math.max(w, c.col + 1), 0);
        const spans = new Array(width).fill(" ");
        for (const cell of rowCells) {
            let char = cell.unicode ? [...cell.unicode][0] : "?";
            if (cell.class === "unknown") {
                char = "?";
            }
            spans[cell.col] = `<span class="sym-${cell.class}">${escapeHtml(char)}</span>`;
        }
        out.push(`${String(row).padStart(3)} |` + spans.join(""));
    }
    return '<pre class="chi-grid">' + out.join("\n") + "</pre>";
}
function badge(status) {
    return `<span class="badge badge-${status}">${escapeHtml(status)}</span>`;
}
export function pendingCount(items) {
    const pending = items.filter((item) => item.status === "pending").length;
    return `${pending} pending`;
}
export function renderQueue(items, selected) {
    if (items.length === 0) {
        return '<p class="empty-state">0 pending</p>';
    }
    const rows = items.map((item, idx) => {
        const cls = idx === selected ? "queue-item selected" : "queue-item";
        return (`<li class="${cls}" data-idx="${idx}">` +
            badge(item.status) +
            `<code class="loc">${escapeHtml(item.file)}:${item.index}</code>` +
            `<span class="preview">${escapeHtml(item.preview)}</span>` +
            "</li>");
    });
    return '<ul class="queue-list">' + rows.join("") + "</ul>";
}
export function renderDetail(detail) {
    const resolved = detail.status === "resolved";
    const prefill = detail.resolution?.latex || detail.auto_attempt || "";
    const reasons = detail.reasons
        .map((r) => `<li><code>${escapeHtml(r)}</code></li>`)
        .join("");
    const attempt = detail.auto_attempt
        ? `<p class="attempt">auto attempt: <code>${escapeHtml(detail.auto_attempt)}</code></p>`
        : '<p class="attempt none">no auto attempt</p>';
    return ('<div class="detail-head">' +
        `<code class="loc">${escapeHtml(detail.file)}:${detail.index}</code>` +
        badge(detail.status) +
        `<code class="crc">${escapeHtml(detail.crc)}</code>` +
        "</div>" +
        `<ul class="reasons">${reasons}</ul>` +
        renderGrid(detail.grid.cells) +
        `<p class="raw">raw <code>${escapeHtml(detail.raw)}</code></p>` +
        attempt +
        '<label for="latex-input">LaTeX</label>' +
        `<textarea id="latex-input" rows="4" spellcheck="false"${resolved ? " readonly" : ""}>` +
        escapeHtml(prefill) +
        "</textarea>" +
        '<p id="balance-error" class="inline-error" hidden></p>' +
        `<button id="submit-btn" type="button"${resolved ? " disabled" : ""}>Submit resolution</button>`);
}
export function renderError(message) {
    return (`<span class="error-text">${escapeHtml(message)}</span>` +
        '<button id="retry-btn" type="button">Retry</button>');
}
