"""Shared test helpers: toy passage builders and a throwaway HTTP double."""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, HTTPServer

from ecoqa.corpus import Document, Passage


def make_passage(passage_id: int, text: str, doc_id: int = 0, index_in_doc: int = 0) -> Passage:
    return Passage(
        passage_id=passage_id,
        doc_id=doc_id,
        index_in_doc=index_in_doc,
        text=text,
        word_count=len(text.split()),
    )


def make_passages(texts) -> list[Passage]:
    return [make_passage(i, text, doc_id=i) for i, text in enumerate(texts)]


def make_document(doc_id: int, body: str, source: str = "wiki", **kwargs) -> Document:
    return Document(id=doc_id, source=source, title=f"doc {doc_id}", body=body, **kwargs)


@contextmanager
def http_double(respond):
    """Serve ``respond(payload) -> (status, body_bytes, content_type)`` on a
    local port; yields the base URL."""

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            payload = json.loads(self.rfile.read(length) or b"{}")
            status, body, content_type = respond(payload)
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    server = HTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}"
    finally:
        server.shutdown()
        thread.join(timeout=5)
