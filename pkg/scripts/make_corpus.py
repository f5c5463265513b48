#!/usr/bin/env python3
"""Regenerate the bundled mock corpus fixture.

Deterministic (fixed RNG seed): running it twice yields byte-identical JSON.
The layout is engineered so the scenario suites can assert exact counts:

- followed-hashtag posts come only from remote authors, keeping the home and
  local fetch windows disjoint;
- bob's boosts wrap only carol's posts, giving the home timeline duplicate
  normalized ids (boost + original) without touching the local timeline;
- carol carries the big interaction counts so trending is dominated by posts
  that are also reachable from home (hashtag membership), exercising dedup;
- bigname posts get zero interactions so a prioritized-account feed stays
  out of the trending top ranks;
- post ids are zero-padded and assigned in chronological order, so lexical
  id comparison, numeric order, and timestamp order all agree.
"""

from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

NOW = datetime(2025, 6, 1, 12, 0, 0, tzinfo=timezone.utc)
STEP_MINUTES = 7
FOLLOWED_TAGS = ["cats", "fediverse", "gardening"]
LOCAL_TAGS = ["knitting", "baking", "hiking"]

ACCOUNTS = [
    {"id": "a1", "handle": "alice@remote.test", "origin": "remote", "followed_by_test_user": True},
    {"id": "a2", "handle": "bob@remote.test", "origin": "remote", "followed_by_test_user": True},
    {"id": "a3", "handle": "carol@remote.test", "origin": "remote", "followed_by_test_user": False},
    {"id": "a4", "handle": "dana@mock.test", "origin": "local", "followed_by_test_user": False},
    {"id": "a5", "handle": "erin@mock.test", "origin": "local", "followed_by_test_user": False},
    {"id": "a6", "handle": "bigname@remote.test", "origin": "remote", "followed_by_test_user": False},
    # Directory-only entry so account search has a remote hit with no posts.
    {"id": "m1", "handle": "mastodon@mastodon.social", "origin": "remote", "followed_by_test_user": False},
]

POST_QUOTA = {
    "alice@remote.test": 30,
    "bob@remote.test": 30,
    "carol@remote.test": 20,
    "dana@mock.test": 45,
    "erin@mock.test": 35,
    "bigname@remote.test": 40,
}

SENTENCES = [
    "morning coffee and a long walk",
    "reading on the porch again",
    "small update from my corner of the web",
    "today the light was perfect",
    "slow day, good soup",
    "finally finished that project",
    "rain all afternoon here",
    "sharing a photo from the weekend",
]

CRYPTO_SENTENCE = "unsolicited crypto takes, sorry in advance"


def timestamp(index: int, total: int) -> str:
    moment = NOW - timedelta(minutes=STEP_MINUTES * (total - index))
    return moment.strftime("%Y-%m-%dT%H:%M:%S.") + f"{moment.microsecond // 1000:03d}Z"


def build_posts(rng: random.Random) -> list[dict]:
    authors = [handle for handle, n in POST_QUOTA.items() for _ in range(n)]
    rng.shuffle(authors)
    total = len(authors)

    # The newest 8 bob slots become boosts of the oldest carol posts.  Aiming
    # boosts at old targets keeps boost and original out of the same first-page
    # fetch window, so scenario suites can pin exact per-source counts; the
    # dedup suites build their own overlapping corpora instead.
    bob_slots = [i for i, handle in enumerate(authors) if handle == "bob@remote.test"]
    boost_slots = set(bob_slots[-8:])
    carol_slots = [i for i, handle in enumerate(authors) if handle == "carol@remote.test"]
    boost_targets = dict(zip(sorted(boost_slots), rng.sample(sorted(carol_slots)[:12], 8)))

    crypto_slots = set()
    for handle in ("alice@remote.test", "dana@mock.test", "carol@remote.test"):
        slots = [i for i, h in enumerate(authors) if h == handle and i not in boost_slots]
        crypto_slots.update(rng.sample(slots, 2))

    posts = []
    for index, handle in enumerate(authors):
        post_id = f"{index + 1:04d}"
        entry: dict = {
            "id": post_id,
            "author": handle,
            "created_at": timestamp(index + 1, total),
        }
        if index in boost_slots:
            entry["boost_of"] = f"{boost_targets[index] + 1:04d}"
            posts.append(entry)
            continue

        sentence = CRYPTO_SENTENCE if index in crypto_slots else rng.choice(SENTENCES)
        tags: list[str] = []
        if handle == "carol@remote.test":
            tags = [rng.choice(FOLLOWED_TAGS)]
        elif handle == "alice@remote.test" and rng.random() < 0.35:
            tags = [rng.choice(FOLLOWED_TAGS)]
        elif handle in ("dana@mock.test", "erin@mock.test") and rng.random() < 0.5:
            tags = [rng.choice(LOCAL_TAGS)]

        if handle == "carol@remote.test":
            boosts, favorites = rng.randint(40, 80), rng.randint(50, 120)
        elif handle == "alice@remote.test":
            boosts, favorites = rng.randint(5, 15), rng.randint(5, 20)
        elif handle == "bob@remote.test":
            boosts, favorites = rng.randint(3, 10), rng.randint(3, 12)
        elif handle == "bigname@remote.test":
            boosts, favorites = 0, 0
        else:
            boosts, favorites = rng.randint(0, 3), rng.randint(0, 4)

        tag_suffix = "".join(f" <a href='#'>#{t}</a>" for t in tags)
        entry.update(
            {
                "html": f"<p>{sentence}{tag_suffix}</p>",
                "hashtags": tags,
                "boosts": boosts,
                "favorites": favorites,
            }
        )
        posts.append(entry)
    return posts


def main() -> None:
    rng = random.Random(42)
    corpus = {
        "domain": "mock.test",
        "now": timestamp(0, 0),
        "test_user": {"id": "u0", "handle": "tester@mock.test"},
        "followed_hashtags": FOLLOWED_TAGS,
        "accounts": ACCOUNTS,
        "posts": build_posts(rng),
        "oauth_script": {
            "codes": [f"code-{word}" for word in
                      ("alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel")],
            "token": "corpus-token-1",
            "scope": "read",
        },
        "fault_script": [],
    }
    out = Path(__file__).resolve().parent.parent / "src" / "braids" / "mockinstance" / "data" / "corpus.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(corpus, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(corpus['posts'])} posts)")


if __name__ == "__main__":
    main()
