"""CLI: run the fake instance in the foreground.

    mock-instance --corpus path/to/corpus.json --port 8081
"""

from __future__ import annotations

import argparse
import logging

from .corpus import default_corpus_path, load_corpus
from .server import serve


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mock-instance", description="deterministic fake Mastodon server"
    )
    parser.add_argument(
        "--corpus",
        default=str(default_corpus_path()),
        help="corpus JSON file (default: bundled fixture)",
    )
    parser.add_argument("--port", type=int, default=8081)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(message)s")
    corpus = load_corpus(args.corpus)
    handle = serve(corpus, port=args.port, host=args.host)
    logging.info(
        "mock instance for %s: %d posts, %d accounts, listening on %s",
        corpus.domain,
        len(corpus.posts),
        len(corpus.accounts),
        handle.base_url,
    )
    try:
        handle._thread.join()
    except KeyboardInterrupt:
        handle.shutdown()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
