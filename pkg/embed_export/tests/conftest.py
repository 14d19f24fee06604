import os

# Hermetic by default: load models from the local HF cache, never the
# network. Pre-fetch the model once (or set HF_HUB_OFFLINE=0) elsewhere.
os.environ.setdefault("HF_HUB_OFFLINE", "1")

import threading

import pytest

from embed_export.encoder import Encoder
from embed_export.errors import EncoderError
from embed_export.server import make_server

MODEL_ID = "sentence-transformers/all-MiniLM-L6-v2"


@pytest.fixture(scope="session")
def encoder():
    try:
        return Encoder(MODEL_ID)
    except EncoderError as exc:
        pytest.skip(f"{MODEL_ID} not available locally: {exc}")


@pytest.fixture(scope="session")
def server_url(encoder):
    server = make_server(encoder, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    thread.join(timeout=5)
