// Typed client for the review server's JSON API.

export interface QueueItem {
  file: string;
  index: number;
  crc: string;
  reasons: string[];
  status: "pending" | "resolved";
  preview: string;
}

export interface GridCell {
  row: number;
  col: number;
  font: number;
  class: string;
  unicode: string;
}

export interface Grid {
  cells: GridCell[];
}

export interface ResolutionView {
  status: string;
  latex: string;
}

export interface LineDetail extends QueueItem {
  raw: string;
  grid: Grid;
  auto_attempt: string | null;
  resolution: ResolutionView | null;
}

export type LineRef = Pick<QueueItem, "file" | "index">;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body: unknown = await response.json();
      if (
        typeof body === "object" &&
        body !== null &&
        typeof (body as { detail?: unknown }).detail === "string"
      ) {
        detail = (body as { detail: string }).detail;
      }
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

function linePath(ref: LineRef): string {
  // The file key may contain slashes; they are path segments server-side.
  return `/api/lines/${encodeURI(ref.file)}/${ref.index}`;
}

export function listLines(base: string, status?: "manual" | "pending" | "resolved"): Promise<QueueItem[]> {
  const query = status ? `?status=${status}` : "";
  return request<QueueItem[]>(base, `/api/lines${query}`);
}

export function getLine(base: string, ref: LineRef): Promise<LineDetail> {
  return request<LineDetail>(base, linePath(ref));
}

export function putResolution(
  base: string,
  ref: LineRef,
  crc: string,
  latex: string,
): Promise<QueueItem> {
  return request<QueueItem>(base, `${linePath(ref)}/resolution`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ crc, latex }),
  });
}

// Runtime guards used by the contract tests (and the flow driver) to verify
// that recorded or live payloads really have the shape the types promise.

function isStringArray(v: unknown): v is string[] {
  return Array.isArray(v) && v.every((x) => typeof x === "string");
}

export function isQueueItem(v: unknown): v is QueueItem {
  if (typeof v !== "object" || v === null) return false;
  const o = v as Record<string, unknown>;
  return (
    typeof o.file === "string" &&
    typeof o.index === "number" &&
    typeof o.crc === "string" &&
    /^0x[0-9A-F]{8}$/.test(o.crc) &&
    isStringArray(o.reasons) &&
    (o.status === "pending" || o.status === "resolved") &&
    typeof o.preview === "string"
  );
}

export function isGridCell(v: unknown): v is GridCell {
  if (typeof v !== "object" || v === null) return false;
  const o = v as Record<string, unknown>;
  return (
    typeof o.row === "number" &&
    typeof o.col === "number" &&
    typeof o.font === "number" &&
    typeof o.class === "string" &&
    typeof o.unicode === "string"
  );
}

export function isLineDetail(v: unknown): v is LineDetail {
  if (!isQueueItem(v)) return false;
  const o = v as unknown as Record<string, unknown>;
  const grid = o.grid as Record<string, unknown> | null;
  if (typeof grid !== "object" || grid === null || !Array.isArray(grid.cells)) return false;
  if (!grid.cells.every(isGridCell)) return false;
  if (typeof o.raw !== "string") return false;
  if (o.auto_attempt !== null && typeof o.auto_attempt !== "string") return false;
  if (o.resolution !== null) {
    const res = o.resolution as Record<string, unknown>;
    if (typeof res !== "object" || res === null) return false;
    if (typeof res.status !== "string" || typeof res.latex !== "string") return false;
  }
  return true;
}
