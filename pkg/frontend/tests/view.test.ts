import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import type { Grid, GridCell, LineDetail, QueueItem } from "../src/api.js";
import {
  escapeHtml,
  pendingCount,
  renderDetail,
  renderError,
  renderGrid,
  renderQueue,
} from "../src/view.js";

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8")) as T;
}

const queue = fixture<QueueItem[]>("queue.json");
const detail = fixture<LineDetail>("detail.json");
const eqGrid = fixture<Grid>("grid_eq142.json");

describe("escapeHtml", () => {
  it("escapes markup characters", () => {
    expect(escapeHtml(`<b a="1">&'`)).toBe("&lt;b a=&quot;1&quot;&gt;&amp;&#x27;");
  });

  it("leaves cyrillic alone", () => {
    expect(escapeHtml("вз")).toBe("вз");
  });
});

describe("renderQueue", () => {
  it("lists items with status badges", () => {
    const html = renderQueue(queue, 0);
    expect(html).toContain('class="badge badge-pending"');
    expect(html).toContain("fixtures/review_sample.chi:1");
    expect(html).toContain("L = L + M");
  });

  it("marks the selected item", () => {
    const html = renderQueue(queue, 0);
    expect(html).toContain('"queue-item selected"');
  });

  it("renders the empty state as 0 pending", () => {
    expect(renderQueue([], 0)).toContain("0 pending");
  });
});

describe("pendingCount", () => {
  it("counts pending items", () => {
    expect(pendingCount(queue)).toBe("1 pending");
    expect(pendingCount([])).toBe("0 pending");
    expect(pendingCount([{ ...queue[0], status: "resolved" }])).toBe("0 pending");
  });
});

describe("renderGrid", () => {
  it("lays rows out top first with an aligned gutter", () => {
    const html = renderGrid(detail.grid.cells);
    const lines = html.replace(/<[^>]+>/g, "").split("\n");
    expect(lines[0].startsWith(" -1 |")).toBe(true);
    expect(lines[1].startsWith("  0 |")).toBe(true);
  });

  it("keeps glyphs in their columns", () => {
    const text = renderGrid(detail.grid.cells).replace(/<[^>]+>/g, "");
    expect(text.split("\n")[1]).toBe("  0 |L = L  + M");
  });

  it("wraps every glyph in its symbol class", () => {
    const html = renderGrid(detail.grid.cells);
    expect(html).toContain('<span class="sym-math-latin">L</span>');
    expect(html).toContain('<span class="sym-digit-punct">2</span>');
  });

  it("renders the recorded equation with greek in the greek class", () => {
    const html = renderGrid(eqGrid.cells);
    expect(html.split("\n")).toHaveLength(3);
    expect(html).toContain('<span class="sym-greek">ρ</span>');
    expect(html).toContain('<span class="sym-greek">φ</span>');
  });

  it("shows unknown cells as a loud question mark", () => {
    const cells: GridCell[] = [
      { row: 0, col: 0, font: 2, class: "unknown", unicode: "█" },
    ];
    expect(renderGrid(cells)).toContain('<span class="sym-unknown">?</span>');
  });

  it("renders an empty baseline for an empty grid", () => {
    expect(renderGrid([])).toBe('<pre class="chi-grid">  0 |</pre>');
  });
});

describe("renderDetail", () => {
  it("prefills the editor with the auto attempt", () => {
    const html = renderDetail(detail);
    expect(html).toContain(">$L = L^2 + M$</textarea>");
    expect(html).not.toContain("readonly");
    expect(html).toContain('class="badge badge-pending"');
    expect(html).toContain("0xC05275EC");
    expect(html).toContain("UNKNOWN_ESCAPE");
  });

  it("prefers an existing resolution over the auto attempt", () => {
    const resolved: LineDetail = {
      ...detail,
      status: "resolved",
      resolution: { status: "resolved", latex: "$L = L^{2} + M$" },
    };
    const html = renderDetail(resolved);
    expect(html).toContain(">$L = L^{2} + M$</textarea>");
  });

  it("renders resolved lines read-only", () => {
    const resolved: LineDetail = {
      ...detail,
      status: "resolved",
      resolution: { status: "resolved", latex: "$x$" },
    };
    const html = renderDetail(resolved);
    expect(html).toContain('class="badge badge-resolved"');
    expect(html).toContain(" readonly");
    expect(html).toContain(" disabled");
  });

  it("escapes latex content in the editor", () => {
    const spiky: LineDetail = { ...detail, auto_attempt: "$a<b$", resolution: null };
    expect(renderDetail(spiky)).toContain(">$a&lt;b$</textarea>");
  });
});

describe("renderError", () => {
  it("offers a retry action", () => {
    const html = renderError("cannot reach server");
    expect(html).toContain("cannot reach server");
    expect(html).toContain('id="retry-btn"');
  });
});
