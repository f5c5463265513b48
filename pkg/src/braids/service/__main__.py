"""CLI: run the curation service.

    braids-service --listen 127.0.0.1:8080 --session-store ./braids.db \
        --redirect-uri http://127.0.0.1:8080/api/v1/auth/callback

The token-sealing secret comes from the BRAIDS_SECRET environment variable; a
random one is generated (and all stored sessions invalidated on restart) when
it is unset.
"""

from __future__ import annotations

import argparse
import logging
import os
import secrets
from pathlib import Path

import uvicorn

from .app import create_app
from .sessions import SessionStore


def parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError("expected addr:port, e.g. 127.0.0.1:8080")
    return host, int(port)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="braids-service")
    parser.add_argument("--listen", type=parse_listen, default=("127.0.0.1", 8080))
    parser.add_argument("--session-store", default="braids-sessions.db")
    parser.add_argument("--redirect-uri", default=None)
    parser.add_argument(
        "--log-level",
        default="info",
        choices=["critical", "error", "warning", "info", "debug"],
    )
    args = parser.parse_args(argv)

    host, port = args.listen
    logging.basicConfig(level=args.log_level.upper())
    log = logging.getLogger("braids")

    secret = os.environ.get("BRAIDS_SECRET")
    if not secret:
        secret = secrets.token_urlsafe(32)
        log.warning(
            "BRAIDS_SECRET is unset; using an ephemeral secret, existing "
            "sessions will not survive a restart"
        )

    redirect_uri = args.redirect_uri or f"http://{host}:{port}/api/v1/auth/callback"
    store_path = Path(args.session_store)
    store = SessionStore(store_path, secret)

    ui_dir = Path("frontend") / "dist"
    app = create_app(
        store,
        redirect_uri,
        static_dir=ui_dir if ui_dir.is_dir() else None,
        app_cache_path=store_path.with_suffix(".apps.json"),
    )
    log.info("listening on http://%s:%d (redirect_uri=%s)", host, port, redirect_uri)
    uvicorn.run(app, host=host, port=port, log_level=args.log_level)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
