"""Phrase-embedding exporter and HTTP service for reviewscope.

Feeds real sentence-encoder vectors to the pipeline through its two
external interfaces: `.embs` store files and the POST /embed protocol.
"""

from .encoder import Encoder
from .errors import EmbedExportError, EncoderError, ExportError
from .exporting import ExportJob, ExportResult, export_store, read_phrases
from .server import make_server, serve_embed
from .store import store_bytes, write_store

__all__ = [
    "Encoder",
    "EmbedExportError",
    "EncoderError",
    "ExportError",
    "ExportJob",
    "ExportResult",
    "export_store",
    "make_server",
    "read_phrases",
    "serve_embed",
    "store_bytes",
    "write_store",
]
