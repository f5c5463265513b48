"""Brute-force oracles over a corpus.

These functions recompute, by direct enumeration, what a correctly assembled
first feed page must contain.  They deliberately avoid the merge engine's own
code paths: the only shared vocabulary is the allocation formula, applied here
from its closed form.
"""

from __future__ import annotations

import math
import re
from datetime import datetime

from ..types import CurationConfig, OrderingMode, SourceCategory, SourceKind
from .corpus import Corpus, CorpusPost

PAGE_SIZE = 40

# Mock-only popularity score; the real network's formula is not public and no
# test depends on anything beyond "more interactions rank higher, age decays".
def trending_score(post: CorpusPost, now: datetime) -> float:
    if now < post.created_at:
        raise ValueError("trending_score needs now >= post.created_at")
    age_hours = (now - post.created_at).total_seconds() / 3600.0
    interactions = post.boosts + post.favorites + 1
    return interactions / (age_hours + 2.0) ** 1.5


def trending_order(corpus: Corpus) -> list[CorpusPost]:
    """All original posts, best score first, ties broken by id."""
    candidates = [p for p in corpus.posts if p.boost_of is None]
    return sorted(
        candidates, key=lambda p: (-trending_score(p, corpus.now), p.id)
    )


def allocation(config: CurationConfig, page_size: int = PAGE_SIZE) -> dict[SourceCategory, int]:
    weights = {c: config.weight_of(c) for c in config.source_categories()}
    total = sum(weights.values())
    if total == 0:
        return {}
    return {
        c: math.floor(w * page_size / total) for c, w in weights.items() if w > 0
    }


def _window(corpus: Corpus, category: SourceCategory, count: int) -> list[CorpusPost]:
    if category.kind is SourceKind.FOLLOWING:
        stream = corpus.home_timeline()
    elif category.kind is SourceKind.LOCAL:
        stream = corpus.local_timeline()
    elif category.kind is SourceKind.TRENDING:
        stream = trending_order(corpus)
    else:
        account = corpus.account_by_handle(category.account or "")
        stream = corpus.account_statuses(account.id) if account else []
    return stream[:count]


def _normalized_id(post: CorpusPost) -> str:
    return post.boost_of if post.boost_of is not None else post.id


_TAG = re.compile(r"<[^>]+>")


def _passes_filters(corpus: Corpus, post: CorpusPost, filters: list[str]) -> bool:
    # Filters apply to the visible text, so strip markup the blunt way here.
    text = _TAG.sub(" ", corpus.displayed(post).html).casefold()
    return not any(phrase.casefold() in text for phrase in filters)


def oracle_expected_counts(
    config: CurationConfig, corpus: Corpus, page_size: int = PAGE_SIZE
) -> dict[SourceCategory, int]:
    """Per-category post counts of a correct first page.

    StrictPriority pages are seed-independent, so the counts come from a full
    enumeration: allocation windows, descending-weight groups, filters, and
    cross-window dedup.  WeightedInterleave pages hand cross-window duplicates
    to whichever source draws first, so there the per-category count is the
    window's own deduplicated, filtered availability capped by its allocation;
    that is exact exactly when the windows share no normalized ids, which the
    scenario corpora are built to guarantee.
    """
    counts = allocation(config, page_size)
    windows = {c: _window(corpus, c, n) for c, n in counts.items()}

    if config.ordering_mode is OrderingMode.WEIGHTED_INTERLEAVE:
        expected = {}
        for category, window in windows.items():
            kept: set[str] = set()
            for post in window:
                if _passes_filters(corpus, post, config.filters):
                    kept.add(_normalized_id(post))
            expected[category] = min(counts[category], len(kept))
        return expected

    by_weight: dict[int, list[SourceCategory]] = {}
    for category in counts:
        by_weight.setdefault(config.weight_of(category), []).append(category)
    seen: set[str] = set()
    expected = {c: 0 for c in counts}
    for weight in sorted(by_weight, reverse=True):
        pairs = [
            (post, category)
            for category in by_weight[weight]
            for post in windows[category]
        ]
        pairs.sort(key=lambda pc: (pc[0].created_at, pc[0].id), reverse=True)
        for post, category in pairs:
            key = _normalized_id(post)
            if key in seen or not _passes_filters(corpus, post, config.filters):
                continue
            seen.add(key)
            expected[category] += 1
    return expected
