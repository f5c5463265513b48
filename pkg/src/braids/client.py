"""HTTP client for Mastodon-compatible servers.

Covers the read-only surface the feed service needs: the OAuth 2.0
authorization-code flow, the four timeline/status endpoints with pagination
cursors, account resolution, and follow-relationship checks.  Everything is
requested under scope "read"; the client never asks for write or push access.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from html import unescape
from html.parser import HTMLParser
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence
from urllib.parse import urlencode

import httpx

from .types import (
    Post,
    PostCounts,
    SourceCategory,
    SourceKind,
    parse_timestamp,
)

OAUTH_SCOPE = "read"
MAX_PAGE_LIMIT = 40
RELATIONSHIP_BATCH = 40
REQUEST_TIMEOUT = 10.0
RATE_LIMIT_RETRIES = 2


class ClientError(Exception):
    """Base for everything this module raises on purpose."""


class NetworkError(ClientError):
    pass


class AuthError(ClientError):
    pass


class RateLimitError(ClientError):
    def __init__(self, message: str, retry_after: float | None = None) -> None:
        super().__init__(message)
        self.retry_after = retry_after


class UpstreamError(ClientError):
    def __init__(self, message: str, status: int) -> None:
        super().__init__(message)
        self.status = status


class ResolutionError(ClientError):
    pass


class ConfigurationError(ClientError):
    pass


@dataclass
class InstanceCredentials:
    """Registered-app and token state for one instance."""

    instance_base_url: str
    client_id: str = ""
    client_secret: str = ""
    access_token: str | None = None
    scope: str = OAUTH_SCOPE


@dataclass(frozen=True)
class PageCursor:
    """Position within one source's stream.

    Chronological sources page by max_id (an opaque status id); the trending
    source pages by offset.  Which field applies is fixed by the source kind.
    """

    source: SourceCategory
    max_id: str | None = None
    offset: int | None = None

    def __post_init__(self) -> None:
        if self.source.kind is SourceKind.TRENDING:
            if self.max_id is not None:
                raise ValueError("trending cursors page by offset, not max_id")
            if self.offset is None or self.offset < 0:
                raise ValueError("trending cursors need a nonnegative offset")
        elif self.offset is not None:
            raise ValueError(f"{self.source.kind.value} cursors page by max_id")

    @classmethod
    def initial(cls, source: SourceCategory) -> "PageCursor":
        if source.kind is SourceKind.TRENDING:
            return cls(source=source, offset=0)
        return cls(source=source)


class _TextExtractor(HTMLParser):
    # Block-ish boundaries become whitespace so "<p>a</p><p>b</p>" reads "a b".
    _BREAKS = {"p", "br", "div", "li"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.pieces: list[str] = []

    def handle_starttag(self, tag: str, attrs: object) -> None:
        if tag in self._BREAKS:
            self.pieces.append(" ")

    def handle_endtag(self, tag: str) -> None:
        if tag in self._BREAKS:
            self.pieces.append(" ")

    def handle_data(self, data: str) -> None:
        self.pieces.append(data)


def strip_html(markup: str) -> str:
    """Plain text of a status body: tags dropped, entities resolved."""
    extractor = _TextExtractor()
    extractor.feed(unescape(markup) if "&" in markup and "<" not in markup else markup)
    return " ".join("".join(extractor.pieces).split())


def normalize_handle(raw: str, local_domain: str) -> str:
    """Canonical user@domain form; bare local names get the instance domain."""
    handle = raw[1:] if raw.startswith("@") else raw
    if not handle or handle.startswith("@") or handle.count("@") > 1:
        raise ValueError(f"malformed account handle: {raw!r}")
    if "@" not in handle:
        handle = f"{handle}@{local_domain}"
    user, _, domain = handle.partition("@")
    if not user or not domain:
        raise ValueError(f"malformed account handle: {raw!r}")
    return handle


def parse_status(payload: Mapping[str, Any], local_domain: str) -> Post:
    """One API status object → Post.

    Boost wrappers keep their own id for pagination; displayed content,
    hashtags, and interaction counts come from the boosted status.
    """
    reblog = payload.get("reblog")
    shown = reblog if reblog else payload
    html = str(shown.get("content", ""))
    hashtags = tuple(
        sorted({str(tag["name"]).lower() for tag in shown.get("tags", ())})
    )
    return Post(
        id=str(payload["id"]),
        author_handle=normalize_handle(str(payload["account"]["acct"]), local_domain),
        created_at=parse_timestamp(str(payload["created_at"])),
        content_text=strip_html(html),
        content_html=html,
        is_boost=bool(reblog),
        boosted_id=str(reblog["id"]) if reblog else None,
        hashtags=hashtags,
        counts=PostCounts(
            boosts=int(shown.get("reblogs_count", 0)),
            favorites=int(shown.get("favourites_count", 0)),
        ),
    )


@dataclass
class MastodonClient:
    """One authenticated session against one instance.

    ``app_cache_path`` persists dynamic app registrations so repeated service
    starts reuse the same client_id.  ``http`` accepts a preconfigured
    ``httpx.Client`` (tests inject one pointed at the mock instance).
    """

    credentials: InstanceCredentials
    app_cache_path: Path | None = None
    http: httpx.Client | None = None
    app_name: str = "braids"
    _handle_ids: dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.http is None:
            self.http = httpx.Client(
                base_url=self.credentials.instance_base_url,
                timeout=REQUEST_TIMEOUT,
            )

    @classmethod
    def for_instance(
        cls, instance_base_url: str, app_cache_path: Path | None = None
    ) -> "MastodonClient":
        return cls(
            credentials=InstanceCredentials(instance_base_url=instance_base_url.rstrip("/")),
            app_cache_path=app_cache_path,
        )

    @property
    def local_domain(self) -> str:
        url = self.credentials.instance_base_url
        return url.split("://", 1)[-1].split("/", 1)[0].split(":", 1)[0]

    # -- OAuth -----------------------------------------------------------

    def register_app(self, redirect_uri: str) -> None:
        """Dynamic client registration, cached on disk per (instance, redirect)."""
        if self.credentials.client_id:
            return
        cache_key = f"{self.credentials.instance_base_url}|{redirect_uri}"
        cached = self._read_app_cache().get(cache_key)
        if cached:
            self.credentials = replace(
                self.credentials,
                client_id=cached["client_id"],
                client_secret=cached["client_secret"],
            )
            return
        payload = self._request(
            "POST",
            "/api/v1/apps",
            data={
                "client_name": self.app_name,
                "redirect_uris": redirect_uri,
                "scopes": OAUTH_SCOPE,
            },
            authenticated=False,
        )
        self.credentials = replace(
            self.credentials,
            client_id=str(payload["client_id"]),
            client_secret=str(payload["client_secret"]),
        )
        self._write_app_cache(
            cache_key,
            {
                "client_id": self.credentials.client_id,
                "client_secret": self.credentials.client_secret,
            },
        )

    def begin_authorization(self, redirect_uri: str) -> str:
        self.register_app(redirect_uri)
        query = urlencode(
            {
                "response_type": "code",
                "client_id": self.credentials.client_id,
                "redirect_uri": redirect_uri,
                "scope": OAUTH_SCOPE,
            }
        )
        return f"{self.credentials.instance_base_url}/oauth/authorize?{query}"

    def exchange_code(self, code: str, redirect_uri: str) -> str:
        if not code:
            raise ValueError("authorization code must be non-empty")
        payload = self._request(
            "POST",
            "/oauth/token",
            data={
                "grant_type": "authorization_code",
                "code": code,
                "client_id": self.credentials.client_id,
                "client_secret": self.credentials.client_secret,
                "redirect_uri": redirect_uri,
                "scope": OAUTH_SCOPE,
            },
            authenticated=False,
            auth_status_codes=(400, 401),
        )
        granted = str(payload.get("scope", ""))
        if granted != OAUTH_SCOPE:
            raise ConfigurationError(
                f"server granted scope {granted!r} instead of {OAUTH_SCOPE!r}"
            )
        token = str(payload["access_token"])
        self.credentials = replace(self.credentials, access_token=token)
        return token

    # -- Timelines -------------------------------------------------------

    def fetch_home(
        self, cursor: PageCursor, limit: int
    ) -> tuple[list[Post], PageCursor]:
        return self._fetch_chronological("/api/v1/timelines/home", {}, cursor, limit)

    def fetch_local(
        self, cursor: PageCursor, limit: int
    ) -> tuple[list[Post], PageCursor]:
        return self._fetch_chronological(
            "/api/v1/timelines/public", {"local": "true"}, cursor, limit
        )

    def fetch_trending(
        self, cursor: PageCursor, limit: int
    ) -> tuple[list[Post], PageCursor]:
        self._check_limit(limit)
        offset = cursor.offset or 0
        payload = self._request(
            "GET",
            "/api/v1/trends/statuses",
            params={"limit": str(limit), "offset": str(offset)},
        )
        posts = self._parse_statuses(payload)
        if not posts:
            return [], cursor
        return posts, replace(cursor, offset=offset + len(posts))

    def fetch_account_statuses(
        self, account_id: str, cursor: PageCursor, limit: int
    ) -> tuple[list[Post], PageCursor]:
        return self._fetch_chronological(
            f"/api/v1/accounts/{account_id}/statuses", {}, cursor, limit
        )

    def _fetch_chronological(
        self,
        path: str,
        base_params: Mapping[str, str],
        cursor: PageCursor,
        limit: int,
    ) -> tuple[list[Post], PageCursor]:
        self._check_limit(limit)
        params = dict(base_params, limit=str(limit))
        if cursor.max_id is not None:
            params["max_id"] = cursor.max_id
        posts = self._parse_statuses(self._request("GET", path, params=params))
        if not posts:
            return [], cursor
        return posts, replace(cursor, max_id=posts[-1].id)

    # -- Accounts --------------------------------------------------------

    def resolve_account(self, handle: str) -> str:
        wanted = normalize_handle(handle, self.local_domain)
        payload = self._request(
            "GET",
            "/api/v2/search",
            params={"q": wanted, "type": "accounts", "resolve": "true", "limit": "5"},
        )
        for account in payload.get("accounts", ()):
            acct = normalize_handle(str(account["acct"]), self.local_domain)
            if acct == wanted:
                self._handle_ids[acct] = str(account["id"])
                return str(account["id"])
        raise ResolutionError(f"no account found for {handle!r}")

    def check_follows(self, author_ids: Sequence[str]) -> set[str]:
        """Subset of the given account ids the session user follows."""
        followed: set[str] = set()
        ids = list(dict.fromkeys(author_ids))
        for start in range(0, len(ids), RELATIONSHIP_BATCH):
            batch = ids[start : start + RELATIONSHIP_BATCH]
            payload = self._request(
                "GET",
                "/api/v1/accounts/relationships",
                params=[("id[]", account_id) for account_id in batch],
            )
            for relation in payload:
                if relation.get("following"):
                    followed.add(str(relation["id"]))
        return followed

    def account_id_for(self, handle: str) -> str | None:
        """Best-effort id lookup from statuses parsed earlier this session."""
        return self._handle_ids.get(handle)

    def followed_handles(self, handles: Iterable[str]) -> set[str]:
        """Which of these handles the user follows, via the id directory.

        Handles never seen in a parsed status have no known id and are
        reported as not followed rather than failing the page.
        """
        id_to_handle = {}
        for handle in set(handles):
            account_id = self._handle_ids.get(handle)
            if account_id is not None:
                id_to_handle[account_id] = handle
        if not id_to_handle:
            return set()
        followed_ids = self.check_follows(list(id_to_handle))
        return {id_to_handle[account_id] for account_id in followed_ids}

    # -- Plumbing --------------------------------------------------------

    def _check_limit(self, limit: int) -> None:
        if not 1 <= limit <= MAX_PAGE_LIMIT:
            raise ValueError(f"limit must be in [1, {MAX_PAGE_LIMIT}], got {limit}")

    def _parse_statuses(self, payload: Any) -> list[Post]:
        posts = [parse_status(item, self.local_domain) for item in payload]
        for item, post in zip(payload, posts):
            self._handle_ids.setdefault(post.author_handle, str(item["account"]["id"]))
        return posts

    def _request(
        self,
        method: str,
        path: str,
        *,
        params: Any = None,
        data: Mapping[str, str] | None = None,
        authenticated: bool = True,
        auth_status_codes: tuple[int, ...] = (401,),
    ) -> Any:
        headers = {}
        if authenticated:
            if not self.credentials.access_token:
                raise AuthError("no access token; complete the OAuth flow first")
            headers["Authorization"] = f"Bearer {self.credentials.access_token}"
        assert self.http is not None
        attempts = 0
        while True:
            try:
                response = self.http.request(
                    method, path, params=params, data=data, headers=headers
                )
            except httpx.TimeoutException as exc:
                raise NetworkError(f"timeout talking to {path}: {exc}") from exc
            except httpx.HTTPError as exc:
                raise NetworkError(
                    f"network failure talking to "
                    f"{self.credentials.instance_base_url}{path}: {exc}"
                ) from exc
            if response.status_code == 429:
                retry_after = _parse_retry_after(response.headers.get("Retry-After"))
                if attempts < RATE_LIMIT_RETRIES:
                    attempts += 1
                    time.sleep(retry_after or 0.0)
                    continue
                raise RateLimitError(
                    f"rate limited on {path}", retry_after=retry_after
                )
            break
        if response.status_code in auth_status_codes:
            raise AuthError(f"{path} rejected credentials ({response.status_code})")
        if response.status_code >= 400:
            raise UpstreamError(
                f"{path} failed with status {response.status_code}",
                status=response.status_code,
            )
        return response.json()

    def _read_app_cache(self) -> dict[str, Any]:
        if self.app_cache_path is None or not self.app_cache_path.exists():
            return {}
        try:
            return json.loads(self.app_cache_path.read_text())
        except (OSError, json.JSONDecodeError):
            return {}

    def _write_app_cache(self, key: str, value: Mapping[str, str]) -> None:
        if self.app_cache_path is None:
            return
        cache = self._read_app_cache()
        cache[key] = dict(value)
        self.app_cache_path.parent.mkdir(parents=True, exist_ok=True)
        self.app_cache_path.write_text(json.dumps(cache, indent=2, sort_keys=True))


def _parse_retry_after(value: str | None) -> float | None:
    if value is None:
        return None
    try:
        return max(float(value), 0.0)
    except ValueError:
        return None
