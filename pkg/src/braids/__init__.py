"""Braided feed curation for Mastodon-compatible servers."""

from .merge import (
    allocate_fetch_counts,
    assign_badge,
    combine_posts,
    detect_ran_out,
    matches_filter,
    normalized_id,
    priority_weight,
)
from .types import (
    PAGE_SIZE,
    AccountPriority,
    AnnotatedPost,
    Badge,
    CurationConfig,
    FeedPage,
    OrderingMode,
    Post,
    PostCounts,
    PriorityLevel,
    SourceCategory,
    SourceKind,
    account_source,
    FOLLOWING,
    LOCAL,
    TRENDING,
)

__all__ = [
    "PAGE_SIZE",
    "AccountPriority",
    "AnnotatedPost",
    "Badge",
    "CurationConfig",
    "FeedPage",
    "OrderingMode",
    "Post",
    "PostCounts",
    "PriorityLevel",
    "SourceCategory",
    "SourceKind",
    "account_source",
    "FOLLOWING",
    "LOCAL",
    "TRENDING",
    "allocate_fetch_counts",
    "assign_badge",
    "combine_posts",
    "detect_ran_out",
    "matches_filter",
    "normalized_id",
    "priority_weight",
]
