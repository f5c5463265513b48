"""Domain types for the braided feed: priority levels, sources, posts, badges, config."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timezone

PAGE_SIZE = 40


class PriorityLevel(enum.Enum):
    """Four-stop ordinal priority; the enum value is the interleave weight."""

    NONE = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @classmethod
    def from_wire(cls, value: str) -> "PriorityLevel":
        try:
            return _LEVEL_BY_WIRE[value]
        except KeyError:
            raise ValueError(f"unknown priority level: {value!r}") from None

    def to_wire(self) -> str:
        return self.name.lower()


_LEVEL_BY_WIRE = {level.name.lower(): level for level in PriorityLevel}


class SourceKind(enum.Enum):
    FOLLOWING = "following"
    LOCAL = "local"
    TRENDING = "trending"
    ACCOUNT = "account"


# Followed content and single accounts can be exhausted; local and trending
# timelines are treated as bottomless.
FINITE_KINDS = frozenset({SourceKind.FOLLOWING, SourceKind.ACCOUNT})


@dataclass(frozen=True)
class SourceCategory:
    """One data source a post can be drawn from.

    ACCOUNT categories carry the fully qualified handle (user@domain) of the
    prioritized account; the other kinds carry no payload.
    """

    kind: SourceKind
    account: str | None = None

    def __post_init__(self) -> None:
        if self.kind is SourceKind.ACCOUNT:
            if not self.account or "@" not in self.account:
                raise ValueError("account source needs a user@domain handle")
        elif self.account is not None:
            raise ValueError(f"{self.kind.value} source carries no account")

    @property
    def is_finite(self) -> bool:
        return self.kind in FINITE_KINDS

    def to_wire(self) -> str:
        if self.kind is SourceKind.ACCOUNT:
            return f"account:{self.account}"
        return self.kind.value

    @classmethod
    def from_wire(cls, value: str) -> "SourceCategory":
        if value.startswith("account:"):
            return cls(SourceKind.ACCOUNT, value.split(":", 1)[1])
        return cls(SourceKind(value))


FOLLOWING = SourceCategory(SourceKind.FOLLOWING)
LOCAL = SourceCategory(SourceKind.LOCAL)
TRENDING = SourceCategory(SourceKind.TRENDING)


def account_source(handle: str) -> SourceCategory:
    return SourceCategory(SourceKind.ACCOUNT, handle)


class Badge(enum.Enum):
    USER_YOU_FOLLOW = "user_you_follow"
    HASHTAG_YOU_FOLLOW = "hashtag_you_follow"
    TRENDING_POST = "trending_post"
    LOCAL_POST = "local_post"
    PRIORITIZED_ACCOUNT = "prioritized_account"


class OrderingMode(enum.Enum):
    WEIGHTED_INTERLEAVE = "weighted_interleave"
    STRICT_PRIORITY = "strict_priority"


@dataclass(frozen=True)
class PostCounts:
    boosts: int = 0
    favorites: int = 0


@dataclass(frozen=True)
class Post:
    """One status as fetched from a source, normalized from the upstream JSON."""

    id: str
    author_handle: str
    created_at: datetime
    content_text: str
    content_html: str
    is_boost: bool = False
    boosted_id: str | None = None
    hashtags: tuple[str, ...] = ()
    counts: PostCounts = field(default_factory=PostCounts)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("post id must be non-empty")
        if self.created_at.tzinfo is None:
            raise ValueError("created_at must be timezone-aware")
        if any(tag != tag.lower() for tag in self.hashtags):
            raise ValueError("hashtags must be lowercase")


@dataclass(frozen=True)
class AnnotatedPost:
    post: Post
    badge: Badge
    source: SourceCategory


@dataclass(frozen=True)
class AccountPriority:
    handle: str
    level: PriorityLevel


@dataclass
class CurationConfig:
    """User settings: per-source sliders, prioritized accounts, phrase filters, mode."""

    priorities: dict[SourceKind, PriorityLevel] = field(
        default_factory=lambda: {
            SourceKind.FOLLOWING: PriorityLevel.HIGH,
            SourceKind.LOCAL: PriorityLevel.LOW,
            SourceKind.TRENDING: PriorityLevel.LOW,
        }
    )
    prioritized_accounts: list[AccountPriority] = field(default_factory=list)
    filters: list[str] = field(default_factory=list)
    ordering_mode: OrderingMode = OrderingMode.WEIGHTED_INTERLEAVE

    def validate(self) -> None:
        """Raise ValueError on any invariant violation."""
        for kind in (SourceKind.FOLLOWING, SourceKind.LOCAL, SourceKind.TRENDING):
            if kind not in self.priorities:
                raise ValueError(f"missing priority for {kind.value}")
        seen_handles: set[str] = set()
        for entry in self.prioritized_accounts:
            if entry.level is PriorityLevel.NONE:
                raise ValueError(f"prioritized account {entry.handle} cannot be level none")
            if entry.handle in seen_handles:
                raise ValueError(f"duplicate prioritized account: {entry.handle}")
            seen_handles.add(entry.handle)
        for phrase in self.filters:
            if not phrase.strip():
                raise ValueError("filter phrases must be non-empty")

    def source_categories(self) -> list[SourceCategory]:
        """All categories in canonical order: following, local, trending, then accounts."""
        categories = [FOLLOWING, LOCAL, TRENDING]
        categories.extend(account_source(entry.handle) for entry in self.prioritized_accounts)
        return categories

    def weight_of(self, category: SourceCategory) -> int:
        if category.kind is SourceKind.ACCOUNT:
            for entry in self.prioritized_accounts:
                if entry.handle == category.account:
                    return entry.level.value
            return 0
        return self.priorities[category.kind].value


@dataclass
class FeedPage:
    """One merged page of annotated posts plus the finite-source run-out flag."""

    posts: list[AnnotatedPost]
    ran_out: bool
    page_size_requested: int = PAGE_SIZE


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp to tz-aware UTC, truncated to milliseconds."""
    raw = value.replace("Z", "+00:00")
    parsed = datetime.fromisoformat(raw)
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    parsed = parsed.astimezone(timezone.utc)
    return parsed.replace(microsecond=(parsed.microsecond // 1000) * 1000)


def format_timestamp(value: datetime) -> str:
    """Render a UTC timestamp as ISO-8601 with millisecond precision and Z suffix."""
    utc = value.astimezone(timezone.utc)
    return f"{utc:%Y-%m-%dT%H:%M:%S}.{utc.microsecond // 1000:03d}Z"
