"""HTTP surface of the curation service.

All JSON endpoints live under /api/v1; the built browser UI, when present, is
served statically at /.  Each request loads its session from the store, works
on it in memory, and persists only after success.
"""

from __future__ import annotations

import secrets
from pathlib import Path
from typing import Any
from urllib.parse import urlencode

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.responses import HTMLResponse, JSONResponse, RedirectResponse
from fastapi.staticfiles import StaticFiles

from ..client import (
    AuthError,
    ClientError,
    ConfigurationError,
    MastodonClient,
    NetworkError,
    ResolutionError,
)
from .feed import AllSourcesFailed, assemble_feed_page
from .sessions import SessionState, SessionStore
from .wire import config_from_wire, config_to_wire, feed_page_to_wire

SESSION_COOKIE = "braids_session"


def create_app(
    store: SessionStore,
    redirect_uri: str,
    *,
    static_dir: Path | None = None,
    app_cache_path: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="braids", docs_url=None, redoc_url=None)
    pending_flows: dict[str, MastodonClient] = {}

    def client_for(state: SessionState) -> MastodonClient:
        return MastodonClient(
            credentials=state.credentials, app_cache_path=app_cache_path
        )

    def require_session(request: Request) -> SessionState:
        session_id = request.cookies.get(SESSION_COOKIE)
        state = store.load(session_id) if session_id else None
        if state is None:
            raise HTTPException(status_code=401, detail="not signed in")
        return state

    @app.get("/api/v1/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/api/v1/auth/login")
    def auth_login(instance: str) -> RedirectResponse:
        base = instance if "://" in instance else f"https://{instance}"
        client = MastodonClient.for_instance(base, app_cache_path=app_cache_path)
        try:
            authorize_url = client.begin_authorization(redirect_uri)
        except NetworkError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        except ClientError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        flow_state = secrets.token_urlsafe(16)
        pending_flows[flow_state] = client
        return RedirectResponse(
            f"{authorize_url}&{urlencode({'state': flow_state})}", status_code=302
        )

    @app.get("/api/v1/auth/callback")
    def auth_callback(code: str = "", state: str = "") -> RedirectResponse:
        client = pending_flows.pop(state, None)
        if client is None:
            raise HTTPException(status_code=400, detail="unknown or replayed state")
        try:
            client.exchange_code(code, redirect_uri)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except AuthError as exc:
            raise HTTPException(status_code=401, detail=str(exc)) from exc
        except (ConfigurationError, NetworkError) as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        session = SessionState(
            session_id=secrets.token_urlsafe(24), credentials=client.credentials
        )
        store.save(session)
        response = RedirectResponse("/", status_code=302)
        response.set_cookie(
            SESSION_COOKIE, session.session_id, httponly=True, samesite="lax"
        )
        return response

    @app.get("/api/v1/feed")
    def get_feed(
        first_page: bool = False,
        seed: int | None = None,
        session: SessionState = Depends(require_session),
    ) -> JSONResponse:
        with store.lock_for(session.session_id):
            state = store.load(session.session_id)
            if state is None:
                raise HTTPException(status_code=401, detail="session expired")
            client = client_for(state)
            try:
                assembled = assemble_feed_page(
                    state, client, first_page=first_page, seed=seed
                )
            except AuthError as exc:
                raise HTTPException(status_code=401, detail=str(exc)) from exc
            except AllSourcesFailed as exc:
                raise HTTPException(
                    status_code=502,
                    detail={
                        "message": "every configured source failed",
                        "failures": exc.failures,
                    },
                ) from exc
            store.save(state)
        return JSONResponse(
            feed_page_to_wire(assembled.page, assembled.seed, assembled.warnings)
        )

    @app.get("/api/v1/config")
    def get_config(session: SessionState = Depends(require_session)) -> dict[str, Any]:
        return config_to_wire(session.config)

    @app.put("/api/v1/config")
    async def put_config(
        request: Request, session: SessionState = Depends(require_session)
    ) -> dict[str, Any]:
        try:
            body = await request.json()
        except Exception as exc:
            raise HTTPException(status_code=422, detail="body must be JSON") from exc
        try:
            config = config_from_wire(body)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

        with store.lock_for(session.session_id):
            state = store.load(session.session_id)
            if state is None:
                raise HTTPException(status_code=401, detail="session expired")
            client = client_for(state)
            unresolved: list[str] = []
            account_ids: dict[str, str | None] = {}
            for entry in config.prioritized_accounts:
                try:
                    account_ids[entry.handle] = client.resolve_account(entry.handle)
                except AuthError as exc:
                    raise HTTPException(status_code=401, detail=str(exc)) from exc
                except ValueError as exc:
                    raise HTTPException(
                        status_code=422, detail=f"{entry.handle}: {exc}"
                    ) from exc
                except (ResolutionError, ClientError):
                    account_ids[entry.handle] = None
                    unresolved.append(entry.handle)
            state.config = config
            state.account_ids = account_ids
            state.reset_pagination()
            store.save(state)
        return {"ok": True, "unresolved": unresolved}

    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def placeholder() -> str:
            return (
                "<!doctype html><title>braids</title>"
                "<p>API is up. No UI bundle found; see the README for how to "
                "build the browser interface.</p>"
            )

    return app
