import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, getLine, listLines, putResolution } from "../src/api.js";

function respond(status: number, body: unknown, json = true): Response {
  return new Response(json ? JSON.stringify(body) : String(body), {
    status,
    headers: json ? { "Content-Type": "application/json" } : {},
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("listLines", () => {
  it("hits /api/lines and parses the list", async () => {
    const fetchMock = vi.fn(async () => respond(200, []));
    vi.stubGlobal("fetch", fetchMock);
    await expect(listLines("http://h")).resolves.toEqual([]);
    expect(fetchMock).toHaveBeenCalledWith("http://h/api/lines", undefined);
  });

  it("passes the status filter through", async () => {
    const fetchMock = vi.fn(async () => respond(200, []));
    vi.stubGlobal("fetch", fetchMock);
    await listLines("http://h", "pending");
    expect(fetchMock).toHaveBeenCalledWith("http://h/api/lines?status=pending", undefined);
  });
});

describe("getLine", () => {
  it("keeps slashes in the file segment", async () => {
    const fetchMock = vi.fn(async () => respond(200, {}));
    vi.stubGlobal("fetch", fetchMock);
    await getLine("http://h", { file: "a/b.chi", index: 3 });
    expect(fetchMock).toHaveBeenCalledWith("http://h/api/lines/a/b.chi/3", undefined);
  });
});

describe("putResolution", () => {
  it("sends crc and latex as json", async () => {
    const fetchMock = vi.fn(async () => respond(200, { status: "resolved" }));
    vi.stubGlobal("fetch", fetchMock);
    await putResolution("http://h", { file: "f.chi", index: 1 }, "0x0000002A", "$x$");
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://h/api/lines/f.chi/1/resolution");
    expect(init.method).toBe("PUT");
    expect(JSON.parse(init.body as string)).toEqual({ crc: "0x0000002A", latex: "$x$" });
  });
});

describe("error handling", () => {
  it("surfaces the server's detail message", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => respond(409, { detail: "stale crc" })));
    const err = await listLines("http://h").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).detail).toBe("stale crc");
  });

  it("falls back to the status text on non-json bodies", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response("boom", { status: 502, statusText: "Bad Gateway" })),
    );
    const err = await listLines("http://h").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).detail).toBe("Bad Gateway");
  });

  it("propagates network failures untouched", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => Promise.reject(new TypeError("fetch failed"))));
    await expect(listLines("http://h")).rejects.toThrow("fetch failed");
  });
});
