// Typed client for the review server's JSON API.
export class ApiError extends Error {
    status;
    detail;
    constructor(status, detail) {
        super(`HTTP ${status}: ${detail}`);
        this.status = status;
        this.detail = detail;
        this.name = "ApiError";
    }
}
async function request(base, path, init) {
    const response = await fetch(base + path, init);
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json();
            if (typeof body === "object" &&
                body !== null &&
                typeof body.detail === "string") {
                detail = body.detail;
            }
        }
        catch {
            // non-JSON error body, keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return response.json();
}
function linePath(ref) {
    // The file key may contain slashes; they are path segments server-side.
    return `/api/lines/${encodeURI(ref.file)}/${ref.index}`;
}
export function listLines(base, status) {
    const query = status ? `?status=${status}` : "";
    return request(base, `/api/lines${query}`);
}
export function getLine(base, ref) {
    return request(base, linePath(ref));
}
export function putResolution(base, ref, crc, latex) {
    return request(base, `${linePath(ref)}/resolution`, {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ crc, latex }),
    });
}
// Runtime guards used by the contract tests (and the flow driver) to verify
// that recorded or live payloads really have the shape the types promise.
function isStringArray(v) {
    return Array.isArray(v) && v.every((x) => typeof x === "string");
}
export function isQueueItem(v) {
    if (typeof v !== "object" || v === null)
        return false;
    const o = v;
    return (typeof o.file === "string" &&
        typeof o.index === "number" &&
        typeof o.crc === "string" &&
        /^0x[0-9A-F]{8}$/.test(o.crc) &&
        isStringArray(o.reasons) &&
        (o.status === "pending" || o.status === "resolved") &&
        typeof o.preview === "string");
}
export function isGridCell(v) {
    if (typeof v !== "object" || v === null)
        return false;
    const o = v;
    return (typeof o.row === "number" &&
        typeof o.col === "number" &&
        typeof o.font === "number" &&
        typeof o.class === "string" &&
        typeof o.unicode === "string");
}
export function isLineDetail(v) {
    if (!isQueueItem(v))
        return false;
    const o = v;
    const grid = o.grid;
    if (typeof grid !== "object" || grid === null || !Array.isArray(grid.cells))
        return false;
    if (!grid.cells.every(isGridCell))
        return false;
    if (typeof o.raw !== "string")
        return false;
    if (o.auto_attempt !== null && typeof o.auto_attempt !== "string")
        return false;
    if (o.resolution !== null) {
        const res = o.resolution;
        if (typeof res !== "object" || res === null)
            return false;
        if (typeof res.status !== "string" || typeof res.latex !== "string")
            return false;
    }
    return true;
}
