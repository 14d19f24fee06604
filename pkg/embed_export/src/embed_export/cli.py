"""Command-line interface: `export` and `serve`.

Exit codes match the pipeline package: 0 success, 1 usage error, 2
runtime failure. The model identifier is always explicit — there is no
default checkpoint.
"""

from __future__ import annotations

import argparse
import sys

from .errors import EmbedExportError
from .exporting import ExportJob, export_store
from .server import serve_embed


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 (2 is reserved for runtime failures)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def cmd_export(args) -> int:
    job = ExportJob(input=args.input, output=args.output, model=args.model, batch_size=args.batch)
    result = export_store(job)
    print(f"export: {result.count} vectors (dim {result.dim}, {result.bytes_written} bytes) -> {result.path}")
    return 0


def cmd_serve(args) -> int:
    serve_embed(args.model, port=args.port, host=args.host)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="embed-export", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("export", help="encode a phrase file into an .embs store")
    p.add_argument("--input", required=True, help="one phrase per line, UTF-8")
    p.add_argument("--output", required=True, help="store file to write")
    p.add_argument("--model", required=True, help="sentence-transformers model identifier")
    p.add_argument("--batch", type=int, default=64, help="encoder batch size")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="serve POST /embed for a model")
    p.add_argument("--model", required=True, help="sentence-transformers model identifier")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EmbedExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
