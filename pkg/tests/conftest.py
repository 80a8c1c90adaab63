"""Shared fixtures: toy corpora, a scripted chat-completions server."""

from __future__ import annotations

import io
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from dialex import corpus, fixtures
from dialex.dataset import DatasetItem


@pytest.fixture(scope="session")
def toy_tagged_tokens():
    data = fixtures.toy_tagged_text().encode("utf-8")
    return list(corpus.ingest_tagged_corpus(io.BytesIO(data)))


@pytest.fixture(scope="session")
def toy_dialect_records():
    data = fixtures.toy_dialect_text().encode("utf-8")
    return list(
        corpus.ingest_dialect_corpus(
            io.BytesIO(data), format="plain-lines", doc_id="toy-bar"
        )
    )


@pytest.fixture
def judged_items():
    return [
        DatasetItem(
            "p01", "dazwischen", "ADV", "dozwischn", 3,
            ("I bin dozwischn gstandn.",), gold="yes", split="dev",
        ),
        DatasetItem(
            "p02", "erwischen", "VERB", "dawischn", 3,
            ("Se hod eam dawischt.",), gold="no", split="dev",
        ),
        DatasetItem(
            "p03", "zweisprachig", "ADJ", "zwaasprochig", 3,
            ("A zwaasprochigs Kind.",), gold="yes", split="dev",
        ),
        DatasetItem(
            "p04", "dreisprachig", "ADJ", "dreisprochige", 4,
            ("De dreisprochige Schuid.",), gold="inflected", split="dev",
        ),
    ]


class ScriptedLLMServer:
    """Chat-completions endpoint with scripted replies and failure injection.

    `script` maps a prompt substring to the reply; unmatched prompts get
    `default_reply`. `fail_next` makes the next N requests return HTTP
    500. `calls` counts every request received.
    """

    def __init__(self):
        self.calls = 0
        self.script: dict[str, str] = {}
        self.default_reply = "no"
        self.fail_next = 0
        self.last_request: dict | None = None
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                outer.calls += 1
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length))
                outer.last_request = body
                if outer.fail_next > 0:
                    outer.fail_next -= 1
                    self.send_response(500)
                    self.end_headers()
                    return
                prompt = body["messages"][0]["content"]
                reply = outer.default_reply
                for fragment, answer in outer.script.items():
                    if fragment in prompt:
                        reply = answer
                        break
                data = json.dumps(
                    {"choices": [{"message": {"content": reply}}]}
                ).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.base_url = f"http://127.0.0.1:{self._server.server_address[1]}"
        self._thread = threading.Thread(
            target=self._server.serve_forever, daemon=True
        )
        self._thread.start()

    def shutdown(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def llm_server():
    server = ScriptedLLMServer()
    yield server
    server.shutdown()


@pytest.fixture(autouse=True)
def no_backoff_sleep(monkeypatch):
    from dialex.llm import client

    monkeypatch.setattr(client, "_sleep", lambda seconds: None)
