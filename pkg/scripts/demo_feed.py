#!/usr/bin/env python3
"""Print merged feed pages from the bundled mock instance.

Starts the mock server on a loopback port, fetches every configured source
through the real HTTP client, and runs the weighted merge exactly as the
service would.  Useful for eyeballing how priority levels reshape a page.

    python3 scripts/demo_feed.py --following high --local low --trending low
    python3 scripts/demo_feed.py --trending high --pages 2 --seed 7
    python3 scripts/demo_feed.py --account bigname@remote.test=low --strict
"""

from __future__ import annotations

import argparse
import sys
import textwrap
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from braids import (
    PAGE_SIZE,
    AccountPriority,
    CurationConfig,
    OrderingMode,
    PriorityLevel,
    SourceKind,
    allocate_fetch_counts,
    combine_posts,
    detect_ran_out,
)
from braids.client import InstanceCredentials, MastodonClient, PageCursor
from braids.mockinstance.corpus import load_corpus, load_default_corpus
from braids.mockinstance.server import serve


def parse_level(raw: str) -> PriorityLevel:
    try:
        return PriorityLevel[raw.upper()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown priority level: {raw!r}")


def parse_account(raw: str) -> AccountPriority:
    handle, sep, level = raw.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected handle=level")
    return AccountPriority(handle=handle, level=parse_level(level))


def build_config(args: argparse.Namespace) -> CurationConfig:
    config = CurationConfig(
        priorities={
            SourceKind.FOLLOWING: args.following,
            SourceKind.LOCAL: args.local,
            SourceKind.TRENDING: args.trending,
        },
        prioritized_accounts=list(args.account),
        filters=list(args.filter),
        ordering_mode=(
            OrderingMode.STRICT_PRIORITY if args.strict else OrderingMode.WEIGHTED_INTERLEAVE
        ),
    )
    config.validate()
    return config


def fetch_page(client, config, account_ids, cursors, seen, seed):
    allocation = allocate_fetch_counts(config, PAGE_SIZE)
    queues = {}
    requested = {}
    responses = {}
    for category in config.source_categories():
        count = allocation.get(category, 0)
        if count == 0:
            continue
        cursor = cursors.setdefault(category, PageCursor.initial(category))
        if category.kind is SourceKind.FOLLOWING:
            posts, cursors[category] = client.fetch_home(cursor, count)
        elif category.kind is SourceKind.LOCAL:
            posts, cursors[category] = client.fetch_local(cursor, count)
        elif category.kind is SourceKind.TRENDING:
            posts, cursors[category] = client.fetch_trending(cursor, count)
        else:
            posts, cursors[category] = client.fetch_account_statuses(
                account_ids[category.account], cursor, count
            )
        queues[category] = posts
        requested[category] = count
        responses[category] = len(posts)

    home_queue = next(
        (q for c, q in queues.items() if c.kind is SourceKind.FOLLOWING), []
    )
    follow_set = client.followed_handles({p.author_handle for p in home_queue})
    merged = combine_posts(queues, config, follow_set, seen, seed)
    return merged, detect_ran_out(requested, responses)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--following", type=parse_level, default=PriorityLevel.HIGH)
    parser.add_argument("--local", type=parse_level, default=PriorityLevel.LOW)
    parser.add_argument("--trending", type=parse_level, default=PriorityLevel.LOW)
    parser.add_argument(
        "--account", type=parse_account, action="append", default=[], metavar="HANDLE=LEVEL"
    )
    parser.add_argument("--filter", action="append", default=[], metavar="PHRASE")
    parser.add_argument("--strict", action="store_true", help="strict priority order")
    parser.add_argument("--seed", type=int, default=20250601)
    parser.add_argument("--pages", type=int, default=1)
    parser.add_argument("--corpus", type=Path, default=None, help="corpus JSON path")
    args = parser.parse_args()

    config = build_config(args)
    corpus = load_corpus(args.corpus) if args.corpus else load_default_corpus()

    with serve(corpus) as handle:
        client = MastodonClient(
            credentials=InstanceCredentials(
                instance_base_url=handle.base_url, access_token=corpus.oauth_token
            )
        )
        account_ids = {}
        for entry in config.prioritized_accounts:
            account_ids[entry.handle] = client.resolve_account(entry.handle)

        cursors: dict = {}
        seen: set[str] = set()
        for page_number in range(1, args.pages + 1):
            merged, ran_out = fetch_page(
                client, config, account_ids, cursors, seen, args.seed + page_number
            )
            print(f"=== page {page_number} ({len(merged)} posts) ===")
            for entry in merged:
                stamp = entry.post.created_at.strftime("%m-%d %H:%M")
                snippet = textwrap.shorten(entry.post.content_text, width=52)
                print(
                    f"  {entry.post.id}  {stamp}  {entry.badge.value:<18}"
                    f" {entry.post.author_handle:<22} {snippet}"
                )
            if ran_out:
                print("  (a finite source ran out of posts)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
