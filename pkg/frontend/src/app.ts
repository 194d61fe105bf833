// DOM bootstrap: walks the manual queue, shows the grid and auto attempt,
// and submits resolutions. State lives on the server; every mutation is a
// PUT followed by re-rendering from fetched data, so a refresh always
// reproduces what the server has.

import { ApiError, getLine, listLines, putResolution } from "./api.js";
import type { LineDetail, QueueItem } from "./api.js";
import { checkBalance } from "./balance.js";
import { pendingCount, renderDetail, renderError, renderQueue } from "./view.js";

const BASE = "";

let items: QueueItem[] = [];
let cursor = 0;
let current: LineDetail | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function showBanner(message: string): void {
  const banner = el<HTMLDivElement>("banner");
  banner.innerHTML = renderError(message);
  banner.hidden = false;
  document.getElementById("retry-btn")?.addEventListener("click", () => void refresh());
}

function hideBanner(): void {
  el<HTMLDivElement>("banner").hidden = true;
}

function renderList(): void {
  el<HTMLElement>("queue").innerHTML = renderQueue(items, cursor);
  el<HTMLElement>("pending-count").textContent = pendingCount(items);
  for (const node of document.querySelectorAll<HTMLElement>(".queue-item")) {
    node.addEventListener("click", () => {
      void select(Number(node.dataset.idx));
    });
  }
}

async function select(idx: number): Promise<void> {
  if (items.length === 0) {
    el<HTMLElement>("detail").innerHTML = "";
    return;
  }
  cursor = Math.max(0, Math.min(idx, items.length - 1));
  renderList();
  try {
    current = await getLine(BASE, items[cursor]);
  } catch (err) {
    showBanner(String(err));
    return;
  }
  hideBanner();
  el<HTMLElement>("detail").innerHTML = renderDetail(current);
  document.getElementById("submit-btn")?.addEventListener("click", () => void submit());
}

function showInlineError(message: string): void {
  const box = el<HTMLParagraphElement>("balance-error");
  box.textContent = message;
  box.hidden = false;
}

async function submit(): Promise<void> {
  if (!current || current.status === "resolved") {
    return;
  }
  const latex = el<HTMLTextAreaElement>("latex-input").value;
  const problem = latex.trim() ? checkBalance(latex) : "empty latex";
  if (problem) {
    // Pre-check mirrors the server; an unbalanced string never leaves the page.
    showInlineError(problem);
    return;
  }
  try {
    const updated = await putResolution(BASE, current, current.crc, latex);
    items[cursor] = updated;
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      showBanner(`source changed under you: ${err.detail}`);
    } else if (err instanceof ApiError && err.status === 422) {
      showInlineError(err.detail);
    } else {
      showBanner(String(err));
    }
    return;
  }
  const next = items.findIndex((item) => item.status === "pending");
  await select(next === -1 ? cursor : next);
}

async function refresh(): Promise<void> {
  try {
    items = await listLines(BASE, "manual");
  } catch (err) {
    showBanner(`cannot reach server: ${String(err)}`);
    return;
  }
  hideBanner();
  const firstPending = items.findIndex((item) => item.status === "pending");
  await select(firstPending === -1 ? 0 : firstPending);
}

function onKey(event: KeyboardEvent): void {
  if (event.target instanceof HTMLTextAreaElement) {
    return;
  }
  if (event.key === "j" || event.key === "ArrowDown") {
    void select(cursor + 1);
  } else if (event.key === "k" || event.key === "ArrowUp") {
    void select(cursor - 1);
  }
}

document.addEventListener("keydown", onKey);
void refresh();
