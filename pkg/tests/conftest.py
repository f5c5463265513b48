from __future__ import annotations

import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from braids.types import Post, PostCounts

BASE_TIME = datetime(2025, 6, 1, 12, 0, 0, tzinfo=timezone.utc)


def make_post(
    post_id: str,
    *,
    author: str = "someone@remote.test",
    minutes_ago: float = 0.0,
    text: str | None = None,
    html: str | None = None,
    is_boost: bool = False,
    boosted_id: str | None = None,
    hashtags: tuple[str, ...] = (),
    boosts: int = 0,
    favorites: int = 0,
) -> Post:
    body = text if text is not None else f"post {post_id}"
    return Post(
        id=post_id,
        author_handle=author,
        created_at=BASE_TIME - timedelta(minutes=minutes_ago),
        content_text=body,
        content_html=html if html is not None else f"<p>{body}</p>",
        is_boost=is_boost,
        boosted_id=boosted_id,
        hashtags=hashtags,
        counts=PostCounts(boosts=boosts, favorites=favorites),
    )


@pytest.fixture
def post_factory():
    return make_post
