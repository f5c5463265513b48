"""Feed page assembly: fetch per allocation, merge, track pagination state.

One call here is one page of the unified feed.  The session object is mutated
in memory (cursor advance, seen-id growth, follow cache); the caller persists
it only after the page assembles, so a failed request leaves the stored
session untouched.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..client import (
    AuthError,
    ClientError,
    MastodonClient,
    PageCursor,
)
from ..merge import allocate_fetch_counts, combine_posts, detect_ran_out
from ..types import PAGE_SIZE, FeedPage, Post, SourceCategory, SourceKind
from .sessions import SessionState

SEED_BITS = 63


@dataclass
class AssembledPage:
    page: FeedPage
    seed: int
    warnings: list[dict[str, str]] = field(default_factory=list)


class AllSourcesFailed(Exception):
    def __init__(self, failures: list[dict[str, str]]) -> None:
        super().__init__("every configured source failed")
        self.failures = failures


def assemble_feed_page(
    state: SessionState,
    client: MastodonClient,
    *,
    first_page: bool,
    seed: int | None = None,
    page_size: int = PAGE_SIZE,
) -> AssembledPage:
    if first_page:
        state.reset_pagination()
    page_seed = seed if seed is not None else secrets.randbits(SEED_BITS)

    allocation = allocate_fetch_counts(state.config, page_size)
    if not allocation:
        return AssembledPage(
            page=FeedPage(posts=[], ran_out=False, page_size_requested=page_size),
            seed=page_seed,
        )

    warnings: list[dict[str, str]] = []
    queues: dict[SourceCategory, list[Post]] = {}
    requested: dict[SourceCategory, int] = {}
    responses: dict[SourceCategory, int] = {}
    next_cursors: dict[SourceCategory, PageCursor] = {}
    failures = 0

    for category, count in allocation.items():
        if count == 0:
            requested[category] = 0
            responses[category] = 0
            continue
        cursor = state.cursors.get(category) or PageCursor.initial(category)
        if category.kind is SourceKind.ACCOUNT:
            account_id = state.account_ids.get(category.account or "")
            if account_id is None:
                # Unresolved handles still weigh into the allocation but can
                # deliver nothing, which is exactly a finite-source run-out.
                requested[category] = count
                responses[category] = 0
                warnings.append(
                    {
                        "source": category.to_wire(),
                        "message": "account handle is unresolved on this instance",
                    }
                )
                continue
        try:
            posts, next_cursor = _fetch(client, category, cursor, count, state)
        except AuthError:
            raise
        except ClientError as exc:
            failures += 1
            warnings.append(
                {"source": category.to_wire(), "message": f"fetch failed: {exc}"}
            )
            continue
        queues[category] = posts
        requested[category] = count
        responses[category] = len(posts)
        next_cursors[category] = next_cursor

    fetchable = sum(1 for count in allocation.values() if count > 0)
    if fetchable > 0 and failures == fetchable:
        raise AllSourcesFailed(warnings)

    ran_out = detect_ran_out(requested, responses)
    follow_set = _follow_set(state, client, queues, warnings)

    combined = combine_posts(queues, state.config, follow_set, state.seen_ids, page_seed)
    state.cursors.update(next_cursors)
    return AssembledPage(
        page=FeedPage(posts=combined, ran_out=ran_out, page_size_requested=page_size),
        seed=page_seed,
        warnings=warnings,
    )


def _fetch(
    client: MastodonClient,
    category: SourceCategory,
    cursor: PageCursor,
    count: int,
    state: SessionState,
) -> tuple[list[Post], PageCursor]:
    if category.kind is SourceKind.FOLLOWING:
        return client.fetch_home(cursor, count)
    if category.kind is SourceKind.LOCAL:
        return client.fetch_local(cursor, count)
    if category.kind is SourceKind.TRENDING:
        return client.fetch_trending(cursor, count)
    account_id = state.account_ids[category.account or ""]
    assert account_id is not None
    return client.fetch_account_statuses(account_id, cursor, count)


def _follow_set(
    state: SessionState,
    client: MastodonClient,
    queues: dict[SourceCategory, list[Post]],
    warnings: list[dict[str, str]],
) -> set[str]:
    """Which home-queue authors the user follows, via the relationship API.

    Results accumulate in the session's follow cache; only handles not already
    confirmed get re-checked.  A failed check degrades badges (followed-user
    posts fall back to the hashtag badge) instead of failing the page.
    """
    authors: set[str] = set()
    for category, posts in queues.items():
        if category.kind is SourceKind.FOLLOWING:
            authors.update(post.author_handle for post in posts)
    unknown = authors - state.follow_cache
    if unknown:
        try:
            confirmed = client.followed_handles(unknown)
        except AuthError:
            raise
        except ClientError as exc:
            warnings.append(
                {"source": "following", "message": f"follow check failed: {exc}"}
            )
            confirmed = set()
        state.follow_cache |= confirmed
        state.follow_cache_at = datetime.now(tz=timezone.utc)
    return state.follow_cache & authors
