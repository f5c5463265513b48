"""Hand-sized corpora for driving the mock instance in tests.

The small corpus is twelve posts over six accounts, laid out so every
membership rule is visible by eye:

    id    time   author   notes
    0001  10:00  alice    #cats
    0002  10:05  dana     local
    0003  10:10  alice
    0004  10:15  erin     local
    0005  10:20  bob
    0006  10:25  dana     local, contains "crypto"
    0007  10:30  alice
    0008  10:35  bob      boost of 0001
    0009  10:40  bigname
    0010  10:45  erin     local
    0011  10:50  carol    #cats, 50 boosts / 60 favorites
    0012  10:55  bob

Home = alice + bob (followed) plus carol's 0011 via the followed hashtag;
local = dana + erin; the boost wrapper 0008 duplicates 0001's identity.
"""

from __future__ import annotations

import copy
from typing import Any

from braids.mockinstance.corpus import Corpus, corpus_from_dict

ACCOUNTS = [
    {"id": "a1", "handle": "alice@remote.test", "origin": "remote", "followed_by_test_user": True},
    {"id": "a2", "handle": "bob@remote.test", "origin": "remote", "followed_by_test_user": True},
    {"id": "a3", "handle": "carol@remote.test", "origin": "remote"},
    {"id": "a4", "handle": "dana@mock.test", "origin": "local"},
    {"id": "a5", "handle": "erin@mock.test", "origin": "local"},
    {"id": "a6", "handle": "bigname@remote.test", "origin": "remote"},
    {"id": "m1", "handle": "mastodon@mastodon.social", "origin": "remote"},
]


def _post(post_id: str, author: str, hhmm: str, **extra: Any) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "id": post_id,
        "author": author,
        "created_at": f"2025-06-01T{hhmm}:00.000Z",
    }
    if "boost_of" not in extra:
        entry["html"] = extra.pop("html", f"<p>post {post_id}</p>")
        entry["hashtags"] = extra.pop("hashtags", [])
        entry["boosts"] = extra.pop("boosts", 0)
        entry["favorites"] = extra.pop("favorites", 0)
    entry.update(extra)
    return entry


SMALL_CORPUS: dict[str, Any] = {
    "domain": "mock.test",
    "now": "2025-06-01T12:00:00.000Z",
    "test_user": {"id": "u0", "handle": "tester@mock.test"},
    "followed_hashtags": ["cats", "fediverse", "gardening"],
    "accounts": ACCOUNTS,
    "posts": [
        _post("0001", "alice@remote.test", "10:00", hashtags=["cats"], boosts=2, favorites=3),
        _post("0002", "dana@mock.test", "10:05"),
        _post("0003", "alice@remote.test", "10:10"),
        _post("0004", "erin@mock.test", "10:15"),
        _post("0005", "bob@remote.test", "10:20", boosts=1),
        _post("0006", "dana@mock.test", "10:25", html="<p>hot crypto tips</p>"),
        _post("0007", "alice@remote.test", "10:30"),
        _post("0008", "bob@remote.test", "10:35", boost_of="0001"),
        _post("0009", "bigname@remote.test", "10:40"),
        _post("0010", "erin@mock.test", "10:45"),
        _post("0011", "carol@remote.test", "10:50", hashtags=["cats"], boosts=50, favorites=60),
        _post("0012", "bob@remote.test", "10:55"),
    ],
    "oauth_script": {"codes": ["c-one", "c-two", "c-three", "c-four"], "token": "tok", "scope": "read"},
    "fault_script": [],
}

HOME_IDS_NEWEST_FIRST = ["0012", "0011", "0008", "0007", "0005", "0003", "0001"]
LOCAL_IDS_NEWEST_FIRST = ["0010", "0006", "0004", "0002"]


def small_corpus(**overrides: Any) -> Corpus:
    data = copy.deepcopy(SMALL_CORPUS)
    data.update(overrides)
    return corpus_from_dict(data)


def adversarial_corpus() -> Corpus:
    """Every trending candidate is also in home.

    Only the two followed authors post, so home contains the whole corpus and
    the trending ranking can only re-order posts home already has.  A handful
    of boost wrappers duplicate early posts under fresh wrapper ids.
    """
    rng_state = 7
    posts = []
    for index in range(50):
        author = ["alice@remote.test", "bob@remote.test"][index % 2]
        minute = index * 9
        hours, minutes = divmod(minute, 60)
        rng_state = (rng_state * 1103515245 + 12345) % (2**31)
        posts.append(
            _post(
                f"{index + 1:04d}",
                author,
                f"{hours:02d}:{minutes:02d}",
                boosts=rng_state % 31,
                favorites=(rng_state // 31) % 29,
            )
        )
    for offset, target in enumerate(("0001", "0004", "0007", "0010", "0013", "0016")):
        minute = 50 * 9 + offset * 9
        hours, minutes = divmod(minute, 60)
        posts.append(
            _post(
                f"{51 + offset:04d}",
                "bob@remote.test",
                f"{hours:02d}:{minutes:02d}",
                boost_of=target,
            )
        )
    data = copy.deepcopy(SMALL_CORPUS)
    data["accounts"] = ACCOUNTS[:2] + [ACCOUNTS[-1]]
    data["posts"] = posts
    data["now"] = "2025-06-01T23:00:00.000Z"
    return corpus_from_dict(data)


def tiny_home_corpus(post_count: int = 10) -> Corpus:
    """Exactly `post_count` posts, all from one followed author."""
    data = copy.deepcopy(SMALL_CORPUS)
    data["posts"] = [
        _post(f"{i + 1:04d}", "alice@remote.test", f"{10 + i // 60:02d}:{i % 60:02d}")
        for i in range(post_count)
    ]
    return corpus_from_dict(data)


def abundant_corpus(posts_per_author: int = 30) -> Corpus:
    """Plenty of everything: used where allocation, not availability, binds."""
    data = copy.deepcopy(SMALL_CORPUS)
    posts = []
    minute = 0
    for index in range(posts_per_author * 3):
        author = ACCOUNTS[index % 3]["handle"]  # alice, bob, carol round-robin
        hours, minutes = divmod(minute, 60)
        posts.append(
            _post(
                f"{index + 1:04d}",
                author,
                f"{hours:02d}:{minutes:02d}",
                hashtags=["cats"] if author == "carol@remote.test" else [],
                boosts=index % 7,
                favorites=index % 5,
            )
        )
        minute += 7
    for index in range(posts_per_author):
        author = ["dana@mock.test", "erin@mock.test"][index % 2]
        hours, minutes = divmod(minute, 60)
        posts.append(
            _post(f"{posts_per_author * 3 + index + 1:04d}", author, f"{hours:02d}:{minutes:02d}")
        )
        minute += 7
    data["posts"] = posts
    data["now"] = "2025-06-02T12:00:00.000Z"
    return corpus_from_dict(data)
