"""Corpus model for the fake Mastodon server.

A corpus is one JSON fixture describing everything the mock serves: accounts,
posts (including boost wrappers), the test user's follow graph and followed
hashtags, the scripted OAuth exchange, and optional fault injections.  All
derived views (home timeline, local timeline, trending order, per-account
streams) are pure functions of the corpus so repeated test runs see identical
responses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable

from ..types import parse_timestamp


@dataclass(frozen=True)
class CorpusAccount:
    id: str
    handle: str
    origin: str  # "local" or "remote"
    followed_by_test_user: bool = False


@dataclass(frozen=True)
class CorpusPost:
    """One status.  Boost wrappers set boost_of and carry no content of their own."""

    id: str
    author: str
    created_at: datetime
    html: str = ""
    hashtags: tuple[str, ...] = ()
    boosts: int = 0
    favorites: int = 0
    boost_of: str | None = None


@dataclass(frozen=True)
class Fault:
    """Scripted failure: a matching request gets `status` instead of data.

    `on_call` counts requests to that endpoint starting at 1; None fires on
    every call.
    """

    endpoint: str
    status: int
    on_call: int | None = None
    retry_after: float = 0.0


@dataclass
class Corpus:
    domain: str
    now: datetime
    test_user_id: str
    test_user_handle: str
    followed_hashtags: tuple[str, ...]
    accounts: list[CorpusAccount]
    posts: list[CorpusPost]
    oauth_codes: tuple[str, ...] = ()
    oauth_token: str = "mock-token"
    oauth_scope: str = "read"
    faults: list[Fault] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        handles = {account.handle for account in self.accounts}
        if len(handles) != len(self.accounts):
            raise ValueError("duplicate account handles in corpus")
        ids = {account.id for account in self.accounts}
        if len(ids) != len(self.accounts):
            raise ValueError("duplicate account ids in corpus")
        post_ids = [post.id for post in self.posts]
        if len(set(post_ids)) != len(post_ids):
            raise ValueError("duplicate post ids in corpus")
        known = set(post_ids)
        by_author: dict[str, list[CorpusPost]] = {}
        for post in self.posts:
            if post.author not in handles:
                raise ValueError(f"post {post.id} by unknown account {post.author}")
            if post.boost_of is not None:
                if post.boost_of not in known:
                    raise ValueError(f"post {post.id} boosts unknown id {post.boost_of}")
                if post.html or post.hashtags:
                    raise ValueError(f"boost wrapper {post.id} must carry no content")
            by_author.setdefault(post.author, []).append(post)
        for author, stream in by_author.items():
            stamps = [post.created_at for post in stream]
            if len(set(stamps)) != len(stamps):
                raise ValueError(f"account {author} has posts sharing a timestamp")

    # -- Lookups ---------------------------------------------------------

    def account_by_handle(self, handle: str) -> CorpusAccount | None:
        for account in self.accounts:
            if account.handle == handle:
                return account
        return None

    def account_by_id(self, account_id: str) -> CorpusAccount | None:
        for account in self.accounts:
            if account.id == account_id:
                return account
        return None

    def post_by_id(self, post_id: str) -> CorpusPost:
        return self._post_index()[post_id]

    def _post_index(self) -> dict[str, CorpusPost]:
        return {post.id: post for post in self.posts}

    def displayed(self, post: CorpusPost) -> CorpusPost:
        """The status whose content is shown: the boosted one for wrappers."""
        if post.boost_of is None:
            return post
        return self.post_by_id(post.boost_of)

    def followed_handles(self) -> set[str]:
        return {a.handle for a in self.accounts if a.followed_by_test_user}

    # -- Timeline views (all newest-first) -------------------------------

    def _newest_first(self, posts: Iterable[CorpusPost]) -> list[CorpusPost]:
        return sorted(posts, key=lambda p: (p.created_at, p.id), reverse=True)

    def home_timeline(self) -> list[CorpusPost]:
        """Posts by followed accounts plus posts carrying a followed hashtag."""
        followed = self.followed_handles()
        tags = set(self.followed_hashtags)
        members = []
        for post in self.posts:
            if post.author in followed:
                members.append(post)
            elif set(self.displayed(post).hashtags) & tags:
                members.append(post)
        return self._newest_first(members)

    def local_timeline(self) -> list[CorpusPost]:
        by_handle = {a.handle: a for a in self.accounts}
        return self._newest_first(
            p for p in self.posts if by_handle[p.author].origin == "local"
        )

    def public_timeline(self) -> list[CorpusPost]:
        return self._newest_first(self.posts)

    def account_statuses(self, account_id: str) -> list[CorpusPost]:
        account = self.account_by_id(account_id)
        if account is None:
            return []
        return self._newest_first(p for p in self.posts if p.author == account.handle)


def corpus_from_dict(data: dict[str, Any]) -> Corpus:
    accounts = [
        CorpusAccount(
            id=str(raw["id"]),
            handle=str(raw["handle"]),
            origin=str(raw["origin"]),
            followed_by_test_user=bool(raw.get("followed_by_test_user", False)),
        )
        for raw in data["accounts"]
    ]
    posts = [
        CorpusPost(
            id=str(raw["id"]),
            author=str(raw["author"]),
            created_at=parse_timestamp(str(raw["created_at"])),
            html=str(raw.get("html", "")),
            hashtags=tuple(str(t).lower() for t in raw.get("hashtags", ())),
            boosts=int(raw.get("boosts", 0)),
            favorites=int(raw.get("favorites", 0)),
            boost_of=str(raw["boost_of"]) if raw.get("boost_of") else None,
        )
        for raw in data["posts"]
    ]
    oauth = data.get("oauth_script", {})
    faults = [
        Fault(
            endpoint=str(raw["endpoint"]),
            status=int(raw["status"]),
            on_call=int(raw["on_call"]) if raw.get("on_call") is not None else None,
            retry_after=float(raw.get("retry_after", 0.0)),
        )
        for raw in data.get("fault_script", ())
    ]
    return Corpus(
        domain=str(data["domain"]),
        now=parse_timestamp(str(data["now"])),
        test_user_id=str(data["test_user"]["id"]),
        test_user_handle=str(data["test_user"]["handle"]),
        followed_hashtags=tuple(str(t).lower() for t in data.get("followed_hashtags", ())),
        accounts=accounts,
        posts=posts,
        oauth_codes=tuple(str(c) for c in oauth.get("codes", ())),
        oauth_token=str(oauth.get("token", "mock-token")),
        oauth_scope=str(oauth.get("scope", "read")),
        faults=faults,
    )


def load_corpus(path: Path | str) -> Corpus:
    with open(path, "r", encoding="utf-8") as handle:
        return corpus_from_dict(json.load(handle))


def default_corpus_path() -> Path:
    return Path(__file__).parent / "data" / "corpus.json"


def load_default_corpus() -> Corpus:
    return load_corpus(default_corpus_path())
