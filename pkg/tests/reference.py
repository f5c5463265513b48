"""Independent brute-force reference for the merge contract, used as a test oracle.

Deliberately re-implements the documented behavior (one uniform draw per
iteration over canonical-ordered non-empty queues, cumulative-weight walk,
drop-consumes-draw) without importing anything from braids.merge.
"""

from __future__ import annotations

import random


def simulate_merge(queues, config, follow_set, seen, rng_seed):
    """Returns a list of (post, badge_name, category) mirroring combine_posts."""
    order = [c for c in _order(queues, config) if queues.get(c)]
    pending = {c: list(queues[c]) for c in order}
    weights = {c: config.weight_of(c) for c in order}
    seen = set(seen)
    out = []

    def try_emit(post, category):
        key = post.boosted_id if (post.is_boost and post.boosted_id) else post.id
        text = post.content_text.casefold()
        if key in seen or any(p.casefold() in text for p in config.filters):
            return
        seen.add(key)
        out.append((post, _badge(post, category, follow_set), category))

    if config.ordering_mode.value == "strict_priority":
        by_weight = {}
        for c in order:
            by_weight.setdefault(weights[c], []).append(c)
        for w in sorted(by_weight, reverse=True):
            pairs = [(p, c) for c in by_weight[w] for p in pending[c]]
            pairs.sort(key=lambda pc: (pc[0].created_at, pc[0].id), reverse=True)
            for post, category in pairs:
                try_emit(post, category)
        return out

    rng = random.Random(rng_seed)
    while any(pending.values()):
        active = [c for c in order if pending[c]]
        total = sum(weights[c] for c in active)
        if total == 0:
            chosen = active[rng.randrange(len(active))]
        else:
            r = rng.random() * total
            acc = 0.0
            chosen = active[-1]
            for c in active:
                acc += weights[c]
                if r < acc:
                    chosen = c
                    break
        try_emit(pending[chosen].pop(0), chosen)
    return out


def first_draw_category(queues, config, rng_seed):
    """Category of the very first weighted draw, ignoring drops."""
    order = [c for c in _order(queues, config) if queues.get(c)]
    weights = [config.weight_of(c) for c in order]
    total = sum(weights)
    rng = random.Random(rng_seed)
    if total == 0:
        return order[rng.randrange(len(order))]
    r = rng.random() * total
    acc = 0.0
    for c, w in zip(order, weights):
        acc += w
        if r < acc:
            return c
    return order[-1]


def _order(queues, config):
    ordered = [c for c in config.source_categories() if c in queues]
    ordered += sorted(
        (c for c in queues if c not in ordered),
        key=lambda c: (c.kind.value, c.account or ""),
    )
    return ordered


def _badge(post, category, follow_set):
    kind = category.kind.value
    if kind == "following":
        return "user_you_follow" if post.author_handle in follow_set else "hashtag_you_follow"
    if kind == "local":
        return "local_post"
    if kind == "trending":
        return "trending_post"
    return "prioritized_account"
