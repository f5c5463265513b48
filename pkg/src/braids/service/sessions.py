"""Session persistence.

One sqlite file holds every session: credentials, curation config, pagination
cursors, and the seen-id set.  Access tokens never touch disk in the clear;
they are sealed with a key derived from the service secret.  Concurrent
requests for the same session serialize on a per-session lock because a feed
page mutates cursors and seen ids.
"""

from __future__ import annotations

import base64
import hashlib
import json
import sqlite3
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from cryptography.fernet import Fernet, InvalidToken

from ..client import InstanceCredentials, PageCursor
from ..types import CurationConfig, SourceCategory, format_timestamp, parse_timestamp
from .wire import config_from_wire, config_to_wire


def _fernet_for(secret: str) -> Fernet:
    digest = hashlib.sha256(secret.encode("utf-8")).digest()
    return Fernet(base64.urlsafe_b64encode(digest))


@dataclass
class SessionState:
    session_id: str
    credentials: InstanceCredentials
    config: CurationConfig = field(default_factory=CurationConfig)
    cursors: dict[SourceCategory, PageCursor] = field(default_factory=dict)
    seen_ids: set[str] = field(default_factory=set)
    account_ids: dict[str, str | None] = field(default_factory=dict)
    follow_cache: set[str] = field(default_factory=set)
    follow_cache_at: datetime | None = None
    created_at: datetime = field(
        default_factory=lambda: datetime.now(tz=timezone.utc)
    )

    def reset_pagination(self) -> None:
        # Cursors and seen ids live and die together: stale seen ids would
        # silently drop posts from a freshly configured first page.
        self.cursors = {}
        self.seen_ids = set()


def _cursor_to_dict(cursor: PageCursor) -> dict:
    return {
        "source": cursor.source.to_wire(),
        "max_id": cursor.max_id,
        "offset": cursor.offset,
    }


def _cursor_from_dict(raw: dict) -> PageCursor:
    return PageCursor(
        source=SourceCategory.from_wire(raw["source"]),
        max_id=raw.get("max_id"),
        offset=raw.get("offset"),
    )


class SessionStore:
    """sqlite-backed map session_id → SessionState."""

    def __init__(self, path: Path | str, secret: str) -> None:
        self.path = Path(path)
        self._fernet = _fernet_for(secret)
        self._db = sqlite3.connect(self.path, check_same_thread=False)
        self._db.execute(
            "CREATE TABLE IF NOT EXISTS sessions ("
            " session_id TEXT PRIMARY KEY,"
            " payload TEXT NOT NULL)"
        )
        self._db.commit()
        self._db_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._session_locks.get(session_id)
            if lock is None:
                lock = threading.Lock()
                self._session_locks[session_id] = lock
            return lock

    def save(self, state: SessionState) -> None:
        payload = json.dumps(self._serialize(state))
        with self._db_lock:
            self._db.execute(
                "INSERT INTO sessions (session_id, payload) VALUES (?, ?)"
                " ON CONFLICT(session_id) DO UPDATE SET payload = excluded.payload",
                (state.session_id, payload),
            )
            self._db.commit()

    def load(self, session_id: str) -> SessionState | None:
        with self._db_lock:
            row = self._db.execute(
                "SELECT payload FROM sessions WHERE session_id = ?", (session_id,)
            ).fetchone()
        if row is None:
            return None
        try:
            return self._deserialize(session_id, json.loads(row[0]))
        except (InvalidToken, KeyError, ValueError):
            # Secret rotation or a corrupt row: the session is unusable, treat
            # it as logged out rather than serving a broken state.
            self.delete(session_id)
            return None

    def delete(self, session_id: str) -> None:
        with self._db_lock:
            self._db.execute(
                "DELETE FROM sessions WHERE session_id = ?", (session_id,)
            )
            self._db.commit()

    def close(self) -> None:
        with self._db_lock:
            self._db.close()

    def _serialize(self, state: SessionState) -> dict:
        creds = state.credentials
        token = creds.access_token
        return {
            "credentials": {
                "instance_base_url": creds.instance_base_url,
                "client_id": creds.client_id,
                "client_secret": creds.client_secret,
                "sealed_token": (
                    self._fernet.encrypt(token.encode()).decode() if token else None
                ),
            },
            "config": config_to_wire(state.config),
            "cursors": [_cursor_to_dict(c) for c in state.cursors.values()],
            "seen_ids": sorted(state.seen_ids),
            "account_ids": state.account_ids,
            "follow_cache": sorted(state.follow_cache),
            "follow_cache_at": (
                format_timestamp(state.follow_cache_at)
                if state.follow_cache_at
                else None
            ),
            "created_at": format_timestamp(state.created_at),
        }

    def _deserialize(self, session_id: str, raw: dict) -> SessionState:
        creds_raw = raw["credentials"]
        sealed = creds_raw.get("sealed_token")
        token = self._fernet.decrypt(sealed.encode()).decode() if sealed else None
        cursors = {}
        for cursor_raw in raw.get("cursors", ()):
            cursor = _cursor_from_dict(cursor_raw)
            cursors[cursor.source] = cursor
        return SessionState(
            session_id=session_id,
            credentials=InstanceCredentials(
                instance_base_url=creds_raw["instance_base_url"],
                client_id=creds_raw.get("client_id", ""),
                client_secret=creds_raw.get("client_secret", ""),
                access_token=token,
            ),
            config=config_from_wire(raw["config"]),
            cursors=cursors,
            seen_ids=set(raw.get("seen_ids", ())),
            account_ids=dict(raw.get("account_ids", {})),
            follow_cache=set(raw.get("follow_cache", ())),
            follow_cache_at=(
                parse_timestamp(raw["follow_cache_at"])
                if raw.get("follow_cache_at")
                else None
            ),
            created_at=parse_timestamp(raw["created_at"]),
        )
