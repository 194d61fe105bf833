"""HTTP review API serving the manual queue and accepting resolutions.

One process, one sidecar: reads run lock-free against immutable parsed
records, writes serialize on a lock and land via atomic file replacement, so
a crash can never leave a half-written sidecar.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .pipeline import (
    DEFAULT_RESOLUTIONS,
    LineRecord,
    RunConfig,
    analyze_inputs,
    load_fonts_config,
)
from .errors import CrcMismatch
from .fonts import FontTables
from .reader import line_preview
from .render import render_grid
from .sidecar import Resolution, flag_record, load_sidecar, save_sidecar
from .translate import attempt_translate, check_balance

STATIC_DIR = Path(__file__).parent / "static"

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>chi2tex review</title></head>
<body><h1>chi2tex review API</h1>
<p>The browser UI assets are not built. The JSON API is live under
<code>/api/lines</code>.</p></body></html>
"""


class QueueItem(BaseModel):
    file: str
    index: int
    crc: str
    reasons: list[str]
    status: str
    preview: str


class ResolutionView(BaseModel):
    status: str
    latex: str


class LineDetail(QueueItem):
    raw: str
    grid: dict
    auto_attempt: str | None
    resolution: ResolutionView | None


class ResolutionIn(BaseModel):
    crc: str | int
    latex: str


def _crc_value(crc: str | int) -> int:
    if isinstance(crc, int):
        return crc & 0xFFFFFFFF
    try:
        return int(crc, 0) & 0xFFFFFFFF
    except ValueError:
        raise HTTPException(status_code=422, detail=f"bad crc {crc!r}") from None


class ReviewState:
    """Manual-line records plus the sidecar they resolve into."""

    def __init__(
        self,
        records: list[LineRecord],
        tables: FontTables,
        sidecar_path: str,
        resolutions: dict[tuple[str, int], Resolution],
    ):
        self._lock = threading.Lock()
        self.tables = tables
        self.sidecar_path = sidecar_path
        self.records = {
            (r.file, r.index): r for r in records if r.fragment is None
        }
        self.resolutions = resolutions

    def check_stale(self) -> None:
        """Refuse to start over a sidecar whose entries no longer match."""
        for key, rec in self.records.items():
            res = self.resolutions.get(key)
            if res is not None and res.crc != rec.line.crc:
                raise CrcMismatch(*key, expected=res.crc, found=rec.line.crc)

    def ensure_pending(self) -> None:
        """Create pending blocks for flagged lines the sidecar lacks."""
        with self._lock:
            changed = False
            for key in sorted(self.records):
                if key in self.resolutions:
                    continue
                rec = self.records[key]
                self.resolutions[key] = flag_record(
                    rec.file,
                    rec.index,
                    rec.line.crc,
                    rec.verdict.reasons,
                    auto_attempt=attempt_translate(rec.line, self.tables),
                    preview=line_preview(rec.line),
                )
                changed = True
            if changed or not os.path.exists(self.sidecar_path):
                save_sidecar(self.sidecar_path, self.resolutions)

    def status_of(self, key: tuple[str, int]) -> str:
        res = self.resolutions.get(key)
        return "resolved" if res is not None and res.resolved else "pending"

    def queue_item(self, key: tuple[str, int]) -> QueueItem:
        rec = self.records[key]
        return QueueItem(
            file=rec.file,
            index=rec.index,
            crc=f"0x{rec.line.crc:08X}",
            reasons=list(rec.verdict.reasons),
            status=self.status_of(key),
            preview=line_preview(rec.line),
        )

    def queue(self, status: str) -> list[QueueItem]:
        items = [self.queue_item(key) for key in sorted(self.records)]
        if status == "manual":
            return items
        return [item for item in items if item.status == status]

    def detail(self, file: str, index: int) -> LineDetail:
        key = (file, index)
        rec = self.records.get(key)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"no manual line {file}:{index}")
        res = self.resolutions.get(key)
        item = self.queue_item(key)
        return LineDetail(
            **item.model_dump(),
            raw=rec.line.raw.hex(),
            grid=json.loads(render_grid(rec.line, self.tables, "json")),
            auto_attempt=attempt_translate(rec.line, self.tables),
            resolution=(
                ResolutionView(status=res.status, latex=res.latex) if res else None
            ),
        )

    def resolve(self, file: str, index: int, crc: str | int, latex: str) -> QueueItem:
        key = (file, index)
        rec = self.records.get(key)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"no manual line {file}:{index}")
        if _crc_value(crc) != rec.line.crc:
            raise HTTPException(
                status_code=409,
                detail=(
                    f"stale crc: line {file}:{index} is now 0x{rec.line.crc:08X}"
                ),
            )
        if not latex.strip():
            raise HTTPException(status_code=422, detail="empty latex")
        problem = check_balance(latex)
        if problem:
            raise HTTPException(status_code=422, detail=problem)
        with self._lock:
            old = self.resolutions.get(key)
            self.resolutions[key] = Resolution(
                file=file,
                index=index,
                crc=rec.line.crc,
                status="resolved",
                latex=latex,
                override=old.override if old else False,
                comments=old.comments if old else [],
            )
            save_sidecar(self.sidecar_path, self.resolutions)
        return self.queue_item(key)


def build_state(cfg: RunConfig) -> ReviewState:
    tables = load_fonts_config(cfg)
    records = analyze_inputs(cfg, tables)
    sidecar_path = cfg.resolutions_path or DEFAULT_RESOLUTIONS
    resolutions = load_sidecar(sidecar_path) if os.path.exists(sidecar_path) else {}
    state = ReviewState(records, tables, sidecar_path, resolutions)
    state.check_stale()
    state.ensure_pending()
    return state


def create_app(state: ReviewState) -> FastAPI:
    app = FastAPI(title="chi2tex review")

    @app.get("/api/lines", response_model=list[QueueItem])
    def list_lines(status: str = "manual") -> list[QueueItem]:
        if status not in ("manual", "pending", "resolved"):
            raise HTTPException(status_code=422, detail=f"bad status {status!r}")
        return state.queue(status)

    @app.put(
        "/api/lines/{file:path}/{index:int}/resolution",
        response_model=QueueItem,
    )
    def put_resolution(file: str, index: int, body: ResolutionIn) -> QueueItem:
        return state.resolve(file, index, body.crc, body.latex)

    @app.get("/api/lines/{file:path}/{index:int}", response_model=LineDetail)
    def get_line(file: str, index: int) -> LineDetail:
        return state.detail(file, index)

    @app.get("/", response_class=HTMLResponse)
    def home():
        index_page = STATIC_DIR / "index.html"
        if index_page.exists():
            return FileResponse(index_page)
        return HTMLResponse(_PLACEHOLDER_PAGE)

    if STATIC_DIR.is_dir():
        app.mount("/static", StaticFiles(directory=STATIC_DIR), name="static")

    return app


def serve_review(cfg: RunConfig, host: str, port: int) -> None:
    import uvicorn

    app = create_app(build_state(cfg))
    uvicorn.run(app, host=host, port=port, log_level="warning")
