"""Allocation and weighted-interleave merge of per-source chronological post queues.

Everything here is a pure function of its inputs; the only mutation is the
caller-owned ``seen`` set passed to :func:`combine_posts`.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping, Sequence

from .types import (
    AnnotatedPost,
    Badge,
    CurationConfig,
    OrderingMode,
    Post,
    PriorityLevel,
    SourceCategory,
    SourceKind,
)


def priority_weight(level: PriorityLevel) -> int:
    """Interleave weight of a slider stop: none=0, low=1, medium=2, high=3."""
    return level.value


def allocate_fetch_counts(config: CurationConfig, page_size: int) -> dict[SourceCategory, int]:
    """Split a page between sources proportionally to their weights.

    Each source with weight w gets floor(w * page_size / S) where S sums the
    weights of the three feed sources and every prioritized account.  Flooring
    can leave the counts summing below page_size; the remainder is deliberately
    not redistributed, so pages may come up short.  Weight-0 sources are absent
    from the result; S == 0 yields an empty allocation.
    """
    if page_size <= 0:
        raise ValueError("page_size must be positive")
    weights = {
        category: config.weight_of(category) for category in config.source_categories()
    }
    total = sum(weights.values())
    if total == 0:
        return {}
    return {
        category: (weight * page_size) // total
        for category, weight in weights.items()
        if weight > 0
    }


def assign_badge(post: Post, source: SourceCategory, follow_set: Iterable[str]) -> Badge:
    """Label a post by the source it was drawn from.

    Posts from the following source split on authorship: a followed author gets
    the followed-user badge, anything else arrived via a followed hashtag.
    """
    if source.kind is SourceKind.FOLLOWING:
        if post.author_handle in follow_set:
            return Badge.USER_YOU_FOLLOW
        return Badge.HASHTAG_YOU_FOLLOW
    if source.kind is SourceKind.LOCAL:
        return Badge.LOCAL_POST
    if source.kind is SourceKind.TRENDING:
        return Badge.TRENDING_POST
    return Badge.PRIORITIZED_ACCOUNT


def matches_filter(post: Post, filters: Sequence[str]) -> bool:
    """True iff any phrase occurs case-insensitively as a substring of the text."""
    text = post.content_text.casefold()
    return any(phrase.casefold() in text for phrase in filters)


def normalized_id(post: Post) -> str:
    """Dedup key: boosts collapse onto the original status id."""
    if post.is_boost and post.boosted_id:
        return post.boosted_id
    return post.id


def detect_ran_out(
    requests: Mapping[SourceCategory, int], responses: Mapping[SourceCategory, int]
) -> bool:
    """True iff a finite source was asked for posts and delivered none.

    Local and trending are bottomless and never trigger the run-out warning.
    """
    if not set(responses) <= set(requests):
        raise ValueError("responses must only cover requested sources")
    for category, requested in requests.items():
        if category.is_finite and requested > 0 and responses.get(category, 0) == 0:
            return True
    return False


def combine_posts(
    queues: Mapping[SourceCategory, Sequence[Post]],
    config: CurationConfig,
    follow_set: Iterable[str],
    seen: set[str],
    rng_seed: int,
) -> list[AnnotatedPost]:
    """Merge chronological per-source queues into one annotated feed.

    Weighted-interleave mode repeats one draw per iteration: with the non-empty
    queues laid out in canonical order (following, local, trending, accounts in
    config order), draw ``r = rng.random() * total_weight`` and walk the
    cumulative weights to pick the queue whose head is popped.  This draw rule
    is part of the contract so a recorded seed replays to an identical feed.
    A popped post is dropped when its normalized id is already in ``seen`` or
    it matches a filter phrase; a drop consumes the draw.  Emitted posts are
    badged, their id added to ``seen``.

    Strict-priority mode instead emits groups of categories by descending
    weight (canonical order breaking ties), merging each group chronologically
    (created_at desc, id desc), with the same dedup/filter/badge rules.

    Queues with weight 0 cannot normally occur (allocation skips them); if
    passed anyway they drain last so every input post is accounted for.
    """
    follow = set(follow_set)
    ordered = [c for c in _canonical_order(queues, config) if queues.get(c)]
    remaining: dict[SourceCategory, list[Post]] = {
        category: list(queues[category]) for category in ordered
    }
    weights = {category: config.weight_of(category) for category in ordered}

    merged: list[AnnotatedPost] = []

    def emit(post: Post, category: SourceCategory) -> None:
        key = normalized_id(post)
        if key in seen or matches_filter(post, config.filters):
            return
        seen.add(key)
        merged.append(AnnotatedPost(post, assign_badge(post, category, follow), category))

    if config.ordering_mode is OrderingMode.STRICT_PRIORITY:
        for group in _priority_groups(ordered, weights):
            for post, category in _chronological(group, remaining):
                emit(post, category)
        return merged

    rng = random.Random(rng_seed)
    while remaining:
        active = [c for c in ordered if remaining.get(c)]
        total = sum(weights[c] for c in active)
        if total == 0:
            chosen = active[rng.randrange(len(active))]
        else:
            draw = rng.random() * total
            cumulative = 0.0
            chosen = active[-1]
            for category in active:
                cumulative += weights[category]
                if draw < cumulative:
                    chosen = category
                    break
        post = remaining[chosen].pop(0)
        if not remaining[chosen]:
            del remaining[chosen]
        emit(post, chosen)
    return merged


def _canonical_order(
    queues: Mapping[SourceCategory, Sequence[Post]], config: CurationConfig
) -> list[SourceCategory]:
    ordered = [c for c in config.source_categories() if c in queues]
    extras = sorted(
        (c for c in queues if c not in ordered), key=lambda c: (c.kind.value, c.account or "")
    )
    return ordered + extras


def _priority_groups(
    ordered: Sequence[SourceCategory], weights: Mapping[SourceCategory, int]
) -> list[list[SourceCategory]]:
    groups: dict[int, list[SourceCategory]] = {}
    for category in ordered:
        groups.setdefault(weights[category], []).append(category)
    return [groups[w] for w in sorted(groups, reverse=True)]


def _chronological(
    group: Sequence[SourceCategory], remaining: Mapping[SourceCategory, Sequence[Post]]
) -> list[tuple[Post, SourceCategory]]:
    entries = [
        (post, category) for category in group for post in remaining[category]
    ]
    entries.sort(key=lambda entry: (entry[0].created_at, entry[0].id), reverse=True)
    return entries
