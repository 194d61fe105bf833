"""Review service endpoints: queue, detail, resolution, staleness."""

import pytest
from fastapi.testclient import TestClient

from chi2tex.errors import CrcMismatch
from chi2tex.pipeline import RunConfig
from chi2tex.server import build_state, create_app
from chi2tex.sidecar import load_sidecar, serialize_sidecar


@pytest.fixture()
def review_path(fixtures_dir):
    return str(fixtures_dir / "review_sample.chi")


@pytest.fixture()
def client(review_path, tmp_path):
    res_path = tmp_path / "res.txt"
    cfg = RunConfig(inputs=[review_path], resolutions_path=str(res_path))
    state = build_state(cfg)
    with TestClient(create_app(state)) as tc:
        tc.res_path = res_path
        tc.review_path = review_path
        yield tc


def detail_url(item):
    return f"/api/lines/{item['file']}/{item['index']}"


class TestQueue:
    def test_lists_manual_lines(self, client, review_path):
        resp = client.get("/api/lines")
        assert resp.status_code == 200
        items = resp.json()
        assert len(items) == 1
        item = items[0]
        assert item["file"] == review_path
        assert item["index"] == 1
        assert item["status"] == "pending"
        assert item["crc"].startswith("0x")
        assert "UNKNOWN_ESCAPE" in item["reasons"]
        assert item["preview"]

    def test_status_filter(self, client):
        assert len(client.get("/api/lines", params={"status": "pending"}).json()) == 1
        assert client.get("/api/lines", params={"status": "resolved"}).json() == []

    def test_startup_writes_pending_sidecar(self, client):
        res = load_sidecar(str(client.res_path))
        assert len(res) == 1
        (rec,) = res.values()
        assert rec.status == "pending"


class TestDetail:
    def test_known_line(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.get(detail_url(item))
        assert resp.status_code == 200
        detail = resp.json()
        assert detail["file"] == item["file"]
        assert detail["raw"]
        assert detail["auto_attempt"] == "$L = L^2 + M$"
        assert detail["grid"]["cells"]
        classes = {c["class"] for c in detail["grid"]["cells"]}
        assert "math-latin" in classes
        assert detail["resolution"]["status"] == "pending"

    def test_unknown_line_404(self, client):
        assert client.get("/api/lines/nope.chi/0").status_code == 404

    def test_auto_line_404(self, client, review_path):
        # Only manual lines are reviewable.
        assert client.get(f"/api/lines/{review_path}/0").status_code == 404


class TestResolve:
    def test_accepts_balanced_latex(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.put(
            detail_url(item) + "/resolution",
            json={"crc": item["crc"], "latex": "$L = \\hat{L}^2 + M$"},
        )
        assert resp.status_code == 200
        assert resp.json()["status"] == "resolved"
        # Persisted, not just in memory.
        res = load_sidecar(str(client.res_path))
        (rec,) = res.values()
        assert rec.status == "resolved"
        assert rec.latex == "$L = \\hat{L}^2 + M$"

    def test_resolved_line_leaves_queue(self, client):
        item = client.get("/api/lines").json()[0]
        client.put(
            detail_url(item) + "/resolution",
            json={"crc": item["crc"], "latex": "$x$"},
        )
        assert client.get("/api/lines", params={"status": "pending"}).json() == []
        resolved = client.get("/api/lines", params={"status": "resolved"}).json()
        assert len(resolved) == 1

    def test_stale_crc_409(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.put(
            detail_url(item) + "/resolution",
            json={"crc": "0x00000001", "latex": "$x$"},
        )
        assert resp.status_code == 409

    def test_unbalanced_latex_422(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.put(
            detail_url(item) + "/resolution",
            json={"crc": item["crc"], "latex": "$x"},
        )
        assert resp.status_code == 422
        assert "unclosed" in resp.text

    def test_empty_latex_422(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.put(
            detail_url(item) + "/resolution",
            json={"crc": item["crc"], "latex": "  "},
        )
        assert resp.status_code == 422

    def test_unknown_line_404(self, client):
        resp = client.put(
            "/api/lines/nope.chi/9/resolution",
            json={"crc": "0x0", "latex": "$x$"},
        )
        assert resp.status_code == 404

    def test_integer_crc_accepted(self, client):
        item = client.get("/api/lines").json()[0]
        resp = client.put(
            detail_url(item) + "/resolution",
            json={"crc": int(item["crc"], 16), "latex": "$x$"},
        )
        assert resp.status_code == 200


class TestStartup:
    def test_stale_sidecar_refuses_to_start(self, review_path, tmp_path):
        res_path = tmp_path / "res.txt"
        cfg = RunConfig(inputs=[review_path], resolutions_path=str(res_path))
        build_state(cfg)
        res = load_sidecar(str(res_path))
        (key,) = res
        res[key].crc ^= 1
        res_path.write_text(serialize_sidecar(res), encoding="utf-8")
        with pytest.raises(CrcMismatch):
            build_state(cfg)

    def test_existing_resolutions_survive_restart(self, client, review_path, tmp_path):
        item = client.get("/api/lines").json()[0]
        client.put(
            detail_url(item) + "/resolution",
            json={"crc": item["crc"], "latex": "$done$"},
        )
        cfg = RunConfig(
            inputs=[review_path], resolutions_path=str(client.res_path)
        )
        state = build_state(cfg)
        with TestClient(create_app(state)) as tc:
            resolved = tc.get("/api/lines", params={"status": "resolved"}).json()
            assert len(resolved) == 1


class TestIndexPage:
    def test_root_serves_html(self, client):
        resp = client.get("/")
        assert resp.status_code == 200
        assert "text/html" in resp.headers["content-type"]
