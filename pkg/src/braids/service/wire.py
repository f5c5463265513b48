"""Wire schema for the curation API: feed pages, config, canonical JSON."""

from __future__ import annotations

import json
from typing import Any

from ..types import (
    AccountPriority,
    AnnotatedPost,
    CurationConfig,
    FeedPage,
    OrderingMode,
    PriorityLevel,
    SourceKind,
    format_timestamp,
)

_FEED_SOURCE_KEYS = ("following", "local", "trending")


def annotated_post_to_wire(entry: AnnotatedPost) -> dict[str, Any]:
    post = entry.post
    return {
        "id": post.id,
        "author": post.author_handle,
        "created_at": format_timestamp(post.created_at),
        "html": post.content_html,
        "badge": entry.badge.value,
        "source": entry.source.to_wire(),
        "boost_of": post.boosted_id if post.is_boost else None,
    }


def feed_page_to_wire(
    page: FeedPage, seed: int, warnings: list[dict[str, str]] | None = None
) -> dict[str, Any]:
    return {
        "posts": [annotated_post_to_wire(entry) for entry in page.posts],
        "ran_out": page.ran_out,
        "seed": seed,
        "warnings": warnings or [],
    }


def config_to_wire(config: CurationConfig) -> dict[str, Any]:
    return {
        "priorities": {
            key: config.priorities[SourceKind(key)].to_wire() for key in _FEED_SOURCE_KEYS
        },
        "accounts": [
            {"handle": entry.handle, "level": entry.level.to_wire()}
            for entry in config.prioritized_accounts
        ],
        "filters": list(config.filters),
        "ordering_mode": config.ordering_mode.value,
    }


def config_from_wire(data: Any) -> CurationConfig:
    """Parse and validate a config payload; raises ValueError with a reason."""
    if not isinstance(data, dict):
        raise ValueError("config must be an object")
    priorities_raw = data.get("priorities")
    if not isinstance(priorities_raw, dict):
        raise ValueError("priorities must be an object")
    priorities = {}
    for key in _FEED_SOURCE_KEYS:
        if key not in priorities_raw:
            raise ValueError(f"priorities missing {key}")
        level = priorities_raw[key]
        if not isinstance(level, str):
            raise ValueError(f"priority for {key} must be a string")
        priorities[SourceKind(key)] = PriorityLevel.from_wire(level)

    accounts: list[AccountPriority] = []
    for item in _expect_list(data.get("accounts", []), "accounts"):
        if not isinstance(item, dict):
            raise ValueError("account entries must be objects")
        handle = item.get("handle")
        level = item.get("level")
        if not isinstance(handle, str) or "@" not in handle.lstrip("@"):
            raise ValueError(f"account handle must be user@domain: {handle!r}")
        if not isinstance(level, str):
            raise ValueError("account level must be a string")
        accounts.append(AccountPriority(handle.lstrip("@"), PriorityLevel.from_wire(level)))

    filters = []
    for phrase in _expect_list(data.get("filters", []), "filters"):
        if not isinstance(phrase, str):
            raise ValueError("filter phrases must be strings")
        filters.append(phrase.strip())

    mode_raw = data.get("ordering_mode", OrderingMode.WEIGHTED_INTERLEAVE.value)
    try:
        mode = OrderingMode(mode_raw)
    except ValueError:
        raise ValueError(f"unknown ordering_mode: {mode_raw!r}") from None

    config = CurationConfig(
        priorities=priorities,
        prioritized_accounts=accounts,
        filters=filters,
        ordering_mode=mode,
    )
    config.validate()
    return config


def canonical_json(obj: Any) -> bytes:
    """Deterministic byte serialization: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def _expect_list(value: Any, name: str) -> list[Any]:
    if not isinstance(value, list):
        raise ValueError(f"{name} must be a list")
    return value
