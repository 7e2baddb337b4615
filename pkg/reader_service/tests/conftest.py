"""Fixtures: an in-process TestClient and a real HTTP server for the
wire-contract suite (which talks over sockets through the primary
toolkit's client)."""

from __future__ import annotations

import socket
import threading
import time
from pathlib import Path

import pytest
import uvicorn
from fastapi.testclient import TestClient

from reader_service.app import create_app

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def stub_client():
    return TestClient(create_app(mode="stub"))


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def stub_server_url():
    """A real uvicorn server running the stub app; yields its base URL."""
    port = _free_port()
    config = uvicorn.Config(create_app(mode="stub"), host="127.0.0.1", port=port, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("stub server did not start in time")
        time.sleep(0.02)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


@pytest.fixture(scope="session")
def train_fixture_path() -> Path:
    return DATA_DIR / "train_fixture.jsonl"
