"""HTTP embedding service speaking the reviewscope remote-provider protocol.

POST ``/embed`` with ``{"texts": ["...", ...]}`` returns status 200 and
``{"dim": d, "vectors": [[...], ...]}``, one row per text in request
order. Malformed or empty requests get 400, encoder failures 500, other
paths 404. Request handling is threaded but encoder calls are serialized
behind a lock — model inference is not assumed thread-safe.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .encoder import Encoder


def _parse_texts(body: bytes) -> list[str]:
    """Validated "texts" list, or ValueError describing the defect."""
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"body is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "texts" not in payload:
        raise ValueError('body must be a JSON object with a "texts" key')
    texts = payload["texts"]
    if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
        raise ValueError('"texts" must be a list of strings')
    if not texts:
        raise ValueError('"texts" is empty')
    return texts


class _EmbedHandler(BaseHTTPRequestHandler):
    encoder: Encoder  # set on the subclass by make_server
    lock: threading.Lock

    def do_POST(self):
        if self.path != "/embed":
            self._reply(404, {"error": f"unknown path {self.path}"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        try:
            texts = _parse_texts(self.rfile.read(length))
        except ValueError as exc:
            self._reply(400, {"error": str(exc)})
            return
        try:
            with self.lock:
                matrix = self.encoder.encode(texts)
        except Exception as exc:
            self._reply(500, {"error": f"encoder failure: {exc}"})
            return
        self._reply(200, {"dim": int(matrix.shape[1]), "vectors": matrix.tolist()})

    def _reply(self, status: int, payload: dict):
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):  # quiet by default
        pass


def make_server(encoder, host: str = "127.0.0.1", port: int = 8765) -> ThreadingHTTPServer:
    """Server bound to host:port (port 0 picks a free one); caller serves it."""
    handler = type(
        "EmbedHandler", (_EmbedHandler,), {"encoder": encoder, "lock": threading.Lock()}
    )
    return ThreadingHTTPServer((host, port), handler)


def serve_embed(model_id: str, port: int = 8765, host: str = "127.0.0.1") -> None:
    """Load the model and serve until interrupted."""
    encoder = Encoder(model_id)
    server = make_server(encoder, host=host, port=port)
    print(f"serving {model_id} (dim {encoder.dim}) on http://{host}:{server.server_address[1]}/embed")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
