"""Regenerate tests/fixtures/*.json from an in-process review server.

The vitest suite contract-tests the client types and renderers against
these recorded payloads, so refresh them whenever the API shape changes:

    python scripts/record-fixtures.py
"""

import json
import os
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from chi2tex.fonts import builtin_tables
from chi2tex.pipeline import RunConfig
from chi2tex.reader import parse_document
from chi2tex.render import render_grid
from chi2tex.server import build_state, create_app

REPO = Path(__file__).resolve().parents[2]
OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    OUT.joinpath(name).write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote tests/fixtures/{name}")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    # Record from the repo root with a relative input so the file key in the
    # fixtures stays machine-independent.
    os.chdir(REPO)
    with tempfile.TemporaryDirectory() as tmp:
        cfg = RunConfig(
            inputs=["fixtures/review_sample.chi"], resolutions_path=f"{tmp}/res.txt"
        )
        client = TestClient(create_app(build_state(cfg)))

        queue = client.get("/api/lines").json()
        dump("queue.json", queue)

        first = queue[0]
        detail = client.get(f"/api/lines/{first['file']}/{first['index']}").json()
        dump("detail.json", detail)

    # A deeper grid than the sample line: the tagged equation spans three
    # half-rows and carries greek, operator, and cyrillic cells.
    doc = parse_document((REPO / "fixtures" / "eq142.chi").read_bytes(), "eq142.chi")
    grid = json.loads(render_grid(doc.lines[4], builtin_tables(), "json"))
    dump("grid_eq142.json", grid)


if __name__ == "__main__":
    main()
