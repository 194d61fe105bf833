// Headless end-to-end check of the review flow against a live server:
//   node flow_check.js http://127.0.0.1:8077
// Exits 0 when the full queue -> detail -> resolve loop works and the
// client-side balance check agrees with the server's. Used by the
// acceptance suite; also handy after editing either side of the contract.

import {
  ApiError,
  getLine,
  isLineDetail,
  isQueueItem,
  listLines,
  putResolution,
} from "./api.js";
import { checkBalance } from "./balance.js";
import { renderDetail, renderGrid, renderQueue } from "./view.js";

function fail(message: string): never {
  console.error(`flow_check: FAIL ${message}`);
  process.exit(1);
}

function step(message: string): void {
  console.log(`flow_check: ok ${message}`);
}

function assert(cond: boolean, message: string): asserts cond {
  if (!cond) {
    fail(message);
  }
}

const base = process.argv[2];
if (!base) {
  fail("usage: node flow_check.js <base-url>");
}

const COLOR_CLASSES = [
  "sym-cyrillic",
  "sym-math-latin",
  "sym-greek",
  "sym-operator",
  "sym-unknown",
];

async function main(): Promise<void> {
  const home = await fetch(base + "/");
  assert(home.ok, `GET / returned ${home.status}`);
  assert(
    (home.headers.get("content-type") ?? "").includes("text/html"),
    "GET / is not html",
  );
  step("UI page served at /");

  const css = await fetch(base + "/static/styles.css");
  assert(css.ok, "stylesheet not served");
  const cssText = await css.text();
  for (const cls of COLOR_CLASSES) {
    assert(cssText.includes(`.${cls}`), `stylesheet lacks .${cls}`);
  }
  step("stylesheet carries all five symbol color classes");

  const queue = await listLines(base, "manual");
  assert(queue.length >= 1, "manual queue is empty");
  assert(queue.every(isQueueItem), "queue payload does not match the contract");
  assert(renderQueue(queue, 0).includes("badge-pending"), "no pending badge rendered");
  step(`queue lists ${queue.length} manual line(s)`);

  const item = queue.find((q) => q.status === "pending");
  assert(item !== undefined, "no pending item to resolve");

  const detail = await getLine(base, item);
  assert(isLineDetail(detail), "detail payload does not match the contract");
  assert(detail.grid.cells.length > 0, "detail grid has no cells");
  const gridHtml = renderGrid(detail.grid.cells);
  assert(gridHtml.startsWith('<pre class="chi-grid">'), "grid did not render");
  assert(gridHtml.includes("sym-"), "grid rendered without symbol classes");
  assert(renderDetail(detail).includes("latex-input"), "detail view lacks the editor");
  step(`detail renders ${detail.grid.cells.length} cells for ${item.file}:${item.index}`);

  const unbalanced = "${a";
  const local = checkBalance(unbalanced);
  assert(local !== null, "client accepted an unbalanced string");
  try {
    await putResolution(base, item, item.crc, unbalanced);
    fail("server accepted an unbalanced resolution");
  } catch (err) {
    assert(err instanceof ApiError && err.status === 422, `expected 422, got ${err}`);
    assert(
      err.detail === local,
      `balance messages diverge: server ${JSON.stringify(err.detail)}, client ${JSON.stringify(local)}`,
    );
  }
  step("client and server agree on the unbalanced rejection (422)");

  try {
    await putResolution(base, item, "0xDEADBEEF", "$x$");
    fail("server accepted a stale crc");
  } catch (err) {
    assert(err instanceof ApiError && err.status === 409, `expected 409, got ${err}`);
  }
  step("stale crc rejected (409)");

  const latex =
    detail.auto_attempt && checkBalance(detail.auto_attempt) === null
      ? detail.auto_attempt
      : "$x$";
  const updated = await putResolution(base, item, item.crc, latex);
  assert(updated.status === "resolved", `resolution did not stick: ${updated.status}`);
  step("balanced resolution accepted (200, resolved)");

  const resolved = await listLines(base, "resolved");
  assert(
    resolved.some((q) => q.file === item.file && q.index === item.index),
    "resolved line missing from the resolved queue",
  );
  const pending = await listLines(base, "pending");
  assert(
    !pending.some((q) => q.file === item.file && q.index === item.index),
    "resolved line still shows as pending",
  );
  step("queue reflects the new status");

  console.log("flow_check: PASS");
}

main().catch((err) => fail(String(err)));
