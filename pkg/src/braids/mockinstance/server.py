"""Scriptable fake Mastodon server.

A plain WSGI app behind wsgiref: every response is a pure function of the
corpus, the request, and an endpoint call counter (only faults and the OAuth
code ledger consult the counter).  Tests read ``MockInstanceApp.request_log``
to assert batching, auth headers, and retry counts.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable
from urllib.parse import parse_qs, urlencode
from wsgiref.simple_server import WSGIRequestHandler, make_server

from ..types import format_timestamp
from .corpus import Corpus, CorpusPost
from .oracle import trending_order

CLIENT_ID = "mock-client-id"
CLIENT_SECRET = "mock-client-secret"


@dataclass
class LoggedRequest:
    method: str
    path: str
    query: dict[str, list[str]]
    bearer: str | None


@dataclass
class MockInstanceApp:
    corpus: Corpus
    request_log: list[LoggedRequest] = field(default_factory=list)
    registered_redirect: str | None = None
    issued_codes: int = 0
    redeemed_codes: set[str] = field(default_factory=set)
    call_counts: dict[str, int] = field(default_factory=dict)

    # -- WSGI entry ------------------------------------------------------

    def __call__(self, environ: dict[str, Any], start_response: Callable) -> Iterable[bytes]:
        method = environ["REQUEST_METHOD"]
        path = environ.get("PATH_INFO", "/")
        query = parse_qs(environ.get("QUERY_STRING", ""))
        bearer = self._bearer(environ)
        self.request_log.append(LoggedRequest(method, path, query, bearer))
        self.call_counts[path] = self.call_counts.get(path, 0) + 1

        fault = self._matching_fault(path)
        if fault is not None:
            headers = [("Content-Type", "application/json")]
            if fault.status == 429:
                headers.append(("Retry-After", format(fault.retry_after, "g")))
            start_response(f"{fault.status} scripted", headers)
            return [json.dumps({"error": "scripted fault"}).encode()]

        try:
            status, headers, body = self._route(method, path, query, environ, bearer)
        except _HttpError as exc:
            status, headers, body = exc.status, [], {"error": exc.message}
        payload = json.dumps(body).encode()
        start_response(
            f"{status} mock",
            [("Content-Type", "application/json"), *headers],
        )
        return [payload]

    # -- Routing ---------------------------------------------------------

    def _route(
        self,
        method: str,
        path: str,
        query: dict[str, list[str]],
        environ: dict[str, Any],
        bearer: str | None,
    ) -> tuple[int, list[tuple[str, str]], Any]:
        if method == "POST" and path == "/api/v1/apps":
            return self._register_app(self._form(environ))
        if method == "GET" and path == "/oauth/authorize":
            return self._authorize(query)
        if method == "POST" and path == "/oauth/token":
            return self._token(self._form(environ))
        if method != "GET":
            raise _HttpError(404, f"no route for {method} {path}")

        self._require_auth(bearer)
        if path == "/api/v1/timelines/home":
            return self._timeline_page(self.corpus.home_timeline(), query)
        if path == "/api/v1/timelines/public":
            local = query.get("local", ["false"])[0] == "true"
            stream = (
                self.corpus.local_timeline() if local else self.corpus.public_timeline()
            )
            return self._timeline_page(stream, query)
        if path == "/api/v1/trends/statuses":
            return self._trending_page(query)
        if path == "/api/v1/accounts/relationships":
            return self._relationships(query)
        if path.startswith("/api/v1/accounts/") and path.endswith("/statuses"):
            account_id = path[len("/api/v1/accounts/") : -len("/statuses")]
            return self._timeline_page(self.corpus.account_statuses(account_id), query)
        if path == "/api/v2/search":
            return self._search(query)
        raise _HttpError(404, f"no route for GET {path}")

    # -- OAuth -----------------------------------------------------------

    def _register_app(self, form: dict[str, list[str]]) -> tuple[int, list, Any]:
        redirect = form.get("redirect_uris", [""])[0]
        if not redirect:
            raise _HttpError(400, "redirect_uris required")
        self.registered_redirect = redirect
        return (
            200,
            [],
            {
                "id": "1",
                "client_id": CLIENT_ID,
                "client_secret": CLIENT_SECRET,
                "redirect_uri": redirect,
            },
        )

    def _authorize(self, query: dict[str, list[str]]) -> tuple[int, list, Any]:
        if query.get("client_id", [""])[0] != CLIENT_ID:
            raise _HttpError(400, "unknown client_id")
        if query.get("response_type", [""])[0] != "code":
            raise _HttpError(400, "response_type must be code")
        redirect = query.get("redirect_uri", [""])[0]
        if self.registered_redirect and redirect != self.registered_redirect:
            raise _HttpError(400, "redirect_uri does not match registration")
        if self.issued_codes >= len(self.corpus.oauth_codes):
            raise _HttpError(400, "authorization codes exhausted")
        code = self.corpus.oauth_codes[self.issued_codes]
        self.issued_codes += 1
        params = {"code": code}
        state = query.get("state", [""])[0]
        if state:
            params["state"] = state
        location = f"{redirect}{'&' if '?' in redirect else '?'}{urlencode(params)}"
        return 302, [("Location", location)], {}

    def _token(self, form: dict[str, list[str]]) -> tuple[int, list, Any]:
        def one(name: str) -> str:
            return form.get(name, [""])[0]

        if one("client_id") != CLIENT_ID or one("client_secret") != CLIENT_SECRET:
            raise _HttpError(401, "bad client credentials")
        if self.registered_redirect and one("redirect_uri") != self.registered_redirect:
            raise _HttpError(400, "redirect_uri mismatch")
        code = one("code")
        if code not in self.corpus.oauth_codes or code in self.redeemed_codes:
            raise _HttpError(400, "invalid or used code")
        self.redeemed_codes.add(code)
        return (
            200,
            [],
            {
                "access_token": self.corpus.oauth_token,
                "token_type": "Bearer",
                "scope": self.corpus.oauth_scope,
                "created_at": 0,
            },
        )

    # -- Read endpoints --------------------------------------------------

    def _timeline_page(
        self, stream: list[CorpusPost], query: dict[str, list[str]]
    ) -> tuple[int, list, Any]:
        limit = self._limit(query)
        max_id = query.get("max_id", [None])[0]
        if max_id is not None:
            stream = [post for post in stream if post.id < max_id]
        return 200, [], [self._status_json(post) for post in stream[:limit]]

    def _trending_page(self, query: dict[str, list[str]]) -> tuple[int, list, Any]:
        limit = self._limit(query)
        offset = int(query.get("offset", ["0"])[0])
        window = trending_order(self.corpus)[offset : offset + limit]
        return 200, [], [self._status_json(post) for post in window]

    def _relationships(self, query: dict[str, list[str]]) -> tuple[int, list, Any]:
        wanted = query.get("id[]", []) + query.get("id", [])
        followed_ids = {
            account.id
            for account in self.corpus.accounts
            if account.followed_by_test_user
        }
        return (
            200,
            [],
            [
                {"id": account_id, "following": account_id in followed_ids}
                for account_id in wanted
            ],
        )

    def _search(self, query: dict[str, list[str]]) -> tuple[int, list, Any]:
        term = query.get("q", [""])[0].lstrip("@")
        if "@" not in term:
            term = f"{term}@{self.corpus.domain}"
        matches = [
            {"id": account.id, "acct": account.handle, "username": account.handle.split("@")[0]}
            for account in self.corpus.accounts
            if account.handle == term
        ]
        return 200, [], {"accounts": matches}

    # -- Helpers ---------------------------------------------------------

    def _status_json(self, post: CorpusPost) -> dict[str, Any]:
        account = self.corpus.account_by_handle(post.author)
        assert account is not None
        base: dict[str, Any] = {
            "id": post.id,
            "account": {
                "id": account.id,
                "acct": account.handle,
                "username": account.handle.split("@")[0],
            },
            "created_at": format_timestamp(post.created_at),
            "content": post.html,
            "tags": [{"name": tag} for tag in post.hashtags],
            "reblogs_count": post.boosts,
            "favourites_count": post.favorites,
            "reblog": None,
        }
        if post.boost_of is not None:
            base["content"] = ""
            base["reblog"] = self._status_json(self.corpus.post_by_id(post.boost_of))
        return base

    def _matching_fault(self, path: str):
        count = self.call_counts[path]
        for fault in self.corpus.faults:
            if fault.endpoint != path:
                continue
            if fault.on_call is None or fault.on_call == count:
                return fault
        return None

    def _require_auth(self, bearer: str | None) -> None:
        if bearer != self.corpus.oauth_token:
            raise _HttpError(401, "missing or invalid bearer token")

    @staticmethod
    def _limit(query: dict[str, list[str]]) -> int:
        try:
            limit = int(query.get("limit", ["20"])[0])
        except ValueError:
            raise _HttpError(400, "bad limit") from None
        if limit < 1:
            raise _HttpError(400, "bad limit")
        return min(limit, 40)

    @staticmethod
    def _bearer(environ: dict[str, Any]) -> str | None:
        header = environ.get("HTTP_AUTHORIZATION", "")
        if header.startswith("Bearer "):
            return header[len("Bearer ") :]
        return None

    @staticmethod
    def _form(environ: dict[str, Any]) -> dict[str, list[str]]:
        try:
            length = int(environ.get("CONTENT_LENGTH") or 0)
        except ValueError:
            length = 0
        body = environ["wsgi.input"].read(length) if length else b""
        return parse_qs(body.decode("utf-8"))


class _HttpError(Exception):
    def __init__(self, status: int, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.message = message


class _QuietHandler(WSGIRequestHandler):
    def log_message(self, format: str, *args: Any) -> None:  # noqa: A002
        pass


@dataclass
class ServerHandle:
    app: MockInstanceApp
    base_url: str
    _server: Any
    _thread: threading.Thread

    def shutdown(self) -> None:
        self._server.shutdown()
        self._thread.join(timeout=5)
        self._server.server_close()

    def __enter__(self) -> "ServerHandle":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.shutdown()


def serve(corpus: Corpus, port: int = 0, host: str = "127.0.0.1") -> ServerHandle:
    """Start the mock on a background thread; port 0 picks a free one."""
    app = MockInstanceApp(corpus)
    server = make_server(host, port, app, handler_class=_QuietHandler)
    # Short poll interval so shutdown() returns promptly in test teardown.
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.05), daemon=True
    )
    thread.start()
    bound_port = server.server_address[1]
    return ServerHandle(
        app=app,
        base_url=f"http://{host}:{bound_port}",
        _server=server,
        _thread=thread,
    )
