// The client types must mirror the server payloads exactly. These tests run
// the runtime guards over fixtures recorded from a live in-process server
// (scripts/record-fixtures.py), so a drift on either side fails here before
// it fails in a browser.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { isGridCell, isLineDetail, isQueueItem } from "../src/api.js";
import type { Grid, LineDetail, QueueItem } from "../src/api.js";

function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8")) as T;
}

const queue = fixture<QueueItem[]>("queue.json");
const detail = fixture<LineDetail>("detail.json");
const eqGrid = fixture<Grid>("grid_eq142.json");

describe("recorded queue payload", () => {
  it("is a non-empty list of queue items", () => {
    expect(queue.length).toBeGreaterThanOrEqual(1);
    for (const item of queue) {
      expect(isQueueItem(item)).toBe(true);
    }
  });

  it("carries exactly the documented fields", () => {
    for (const item of queue) {
      expect(Object.keys(item).sort()).toEqual([
        "crc",
        "file",
        "index",
        "preview",
        "reasons",
        "status",
      ]);
    }
  });

  it("serializes crc as a 32-bit hex string", () => {
    for (const item of queue) {
      expect(item.crc).toMatch(/^0x[0-9A-F]{8}$/);
    }
  });

  it("names at least one reason per manual line", () => {
    for (const item of queue) {
      expect(item.reasons.length).toBeGreaterThanOrEqual(1);
    }
  });
});

describe("recorded detail payload", () => {
  it("matches the line detail contract", () => {
    expect(isLineDetail(detail)).toBe(true);
  });

  it("extends its own queue item", () => {
    const item = queue.find((q) => q.file === detail.file && q.index === detail.index);
    expect(item).toBeDefined();
    expect(detail.crc).toBe(item!.crc);
    expect(detail.reasons).toEqual(item!.reasons);
  });

  it("encodes the raw line as hex", () => {
    expect(detail.raw).toMatch(/^([0-9a-f]{2})+$/);
  });

  it("sorts grid cells row-major", () => {
    const keys = detail.grid.cells.map((c) => [c.row, c.col]);
    const sorted = [...keys].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
    expect(keys).toEqual(sorted);
  });
});

describe("recorded equation grid", () => {
  it("is made of well-formed cells", () => {
    expect(eqGrid.cells.length).toBeGreaterThan(0);
    for (const cell of eqGrid.cells) {
      expect(isGridCell(cell)).toBe(true);
    }
  });

  it("spans three half-rows", () => {
    const rows = new Set(eqGrid.cells.map((c) => c.row));
    expect([...rows].sort((a, b) => a - b)).toEqual([-1, 0, 1]);
  });
});
