"""Contract tests for the HTTP classifier/embedder backends, driven by
scripted stub servers."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest

from vidreq.errors import BackendUnavailable
from vidreq.relevance import HttpClassifier
from vidreq.themes import EmbeddingSource, HttpEmbedder


class _StubHandler(BaseHTTPRequestHandler):
    behavior = "good"

    def log_message(self, *args):
        pass

    def _body(self):
        length = int(self.headers.get("Content-Length", 0))
        return json.loads(self.rfile.read(length)) if length else {}

    def _send(self, status, payload):
        data = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        if self.path == "/healthz":
            if self.behavior == "sick":
                self._send(500, {"status": "down"})
            else:
                self._send(200, {"status": "ok"})
        else:
            self._send(404, {})

    def do_POST(self):
        body = self._body()
        texts = body.get("texts", [])
        if self.path == "/classify":
            if self.behavior == "good":
                self._send(
                    200, {"scores": [0.9 if len(t) > 100 else 0.1 for t in texts]}
                )
            elif self.behavior == "short":
                self._send(200, {"scores": [0.5] * max(0, len(texts) - 1)})
            elif self.behavior == "out-of-range":
                self._send(200, {"scores": [1.5] * len(texts)})
            elif self.behavior == "error":
                self._send(500, {"error": "boom"})
        elif self.path == "/embed":
            if self.behavior == "good":
                self._send(200, {"vectors": [[float(len(t)), 1.0, 0.0] for t in texts]})
            elif self.behavior == "short":
                self._send(200, {"vectors": [[0.0, 0.0]] * max(0, len(texts) - 1)})
            else:
                self._send(500, {"error": "boom"})
        else:
            self._send(404, {})


@pytest.fixture()
def stub_server():
    servers = []

    def start(behavior):
        handler = type("Handler", (_StubHandler,), {"behavior": behavior})
        server = HTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_port}"

    yield start
    for server in servers:
        server.shutdown()
        server.server_close()


def test_classifier_contract_pass(stub_server):
    client = HttpClassifier(stub_server("good"))
    client.check_health()
    scores = client.score_texts(["x" * 200, "short"])
    assert scores == [0.9, 0.1]
    assert all(0.0 <= s <= 1.0 for s in scores)


def test_classifier_cardinality_violation(stub_server):
    client = HttpClassifier(stub_server("short"))
    with pytest.raises(BackendUnavailable, match="scores"):
        client.score_texts(["a", "b"])


def test_classifier_range_violation(stub_server):
    client = HttpClassifier(stub_server("out-of-range"))
    with pytest.raises(BackendUnavailable, match=r"\[0, 1\]"):
        client.score_texts(["a"])


def test_classifier_http_error(stub_server):
    client = HttpClassifier(stub_server("error"))
    with pytest.raises(BackendUnavailable):
        client.score_texts(["a"])


def test_classifier_health_check_failure(stub_server):
    client = HttpClassifier(stub_server("sick"))
    with pytest.raises(BackendUnavailable):
        client.check_health()


def test_classifier_connection_refused():
    client = HttpClassifier("http://127.0.0.1:9")  # nothing listens on discard
    with pytest.raises(BackendUnavailable):
        client.check_health()
    with pytest.raises(BackendUnavailable):
        client.score_texts(["a"])


def test_embedder_contract_pass(stub_server):
    client = HttpEmbedder(stub_server("good"))
    matrix = client.embed(["abc", "de"], record_ids=["r1", "r2"])
    assert matrix.source is EmbeddingSource.EXTERNAL
    assert matrix.vectors.shape == (2, 3)
    assert np.isfinite(matrix.vectors).all()


def test_embedder_cardinality_violation(stub_server):
    client = HttpEmbedder(stub_server("short"))
    with pytest.raises(BackendUnavailable):
        client.embed(["a", "b"], record_ids=["r1", "r2"])


def test_embedder_http_error(stub_server):
    client = HttpEmbedder(stub_server("error"))
    with pytest.raises(BackendUnavailable):
        client.embed(["a"], record_ids=["r1"])


def test_classify_cli_exit_code_2_on_backend_failure(stub_server, corpus12, tmp_path, monkeypatch):
    from vidreq.cli import main

    out = tmp_path / "out"
    out.mkdir()
    monkeypatch.setenv("VIDREQ_CLASSIFIER_URL", stub_server("sick"))
    code = main([
        "classify", "--corpus", str(corpus12 / "corpus.json"), "--out", str(out),
    ])
    assert code == 2


def test_classify_cli_with_good_backend(stub_server, corpus12, tmp_path, monkeypatch):
    from vidreq.cli import main

    out = tmp_path / "out"
    out.mkdir()
    monkeypatch.setenv("VIDREQ_CLASSIFIER_URL", stub_server("good"))
    code = main([
        "classify", "--corpus", str(corpus12 / "corpus.json"), "--out", str(out),
    ])
    assert code == 0
    lines = (out / "verdicts.jsonl").read_text().splitlines()
    assert len(lines) == 12  # no filter report: every record gets a verdict
    for line in lines:
        verdict = json.loads(line)
        assert verdict["score"] in (0.9, 0.1)
