"""The fake server and its oracles, exercised over real HTTP semantics."""

from __future__ import annotations

from datetime import timedelta

import httpx
import pytest

from braids.mockinstance.corpus import corpus_from_dict, load_default_corpus
from braids.mockinstance.oracle import (
    oracle_expected_counts,
    trending_order,
    trending_score,
)
from braids.mockinstance.server import MockInstanceApp, serve
from braids.types import (
    AccountPriority,
    CurationConfig,
    PriorityLevel,
    SourceKind,
)
from corpora import (
    HOME_IDS_NEWEST_FIRST,
    LOCAL_IDS_NEWEST_FIRST,
    SMALL_CORPUS,
    abundant_corpus,
    small_corpus,
)

AUTH = {"Authorization": "Bearer tok"}


@pytest.fixture
def mock_app() -> MockInstanceApp:
    return MockInstanceApp(small_corpus())


@pytest.fixture
def http(mock_app: MockInstanceApp) -> httpx.Client:
    transport = httpx.WSGITransport(app=mock_app)
    with httpx.Client(transport=transport, base_url="http://mock.test") as client:
        yield client


class TestTimelines:
    def test_home_is_followed_authors_plus_followed_hashtags(self, http) -> None:
        body = http.get("/api/v1/timelines/home", params={"limit": 40}, headers=AUTH).json()
        assert [status["id"] for status in body] == HOME_IDS_NEWEST_FIRST

    def test_home_max_id_returns_strictly_older(self, http) -> None:
        body = http.get(
            "/api/v1/timelines/home",
            params={"limit": 40, "max_id": "0008"},
            headers=AUTH,
        ).json()
        assert [status["id"] for status in body] == ["0007", "0005", "0003", "0001"]

    def test_home_limit_truncates(self, http) -> None:
        body = http.get("/api/v1/timelines/home", params={"limit": 2}, headers=AUTH).json()
        assert [status["id"] for status in body] == ["0012", "0011"]

    def test_local_is_local_origin_only(self, http) -> None:
        body = http.get(
            "/api/v1/timelines/public",
            params={"local": "true", "limit": 40},
            headers=AUTH,
        ).json()
        assert [status["id"] for status in body] == LOCAL_IDS_NEWEST_FIRST

    def test_public_without_local_is_everything(self, http) -> None:
        body = http.get(
            "/api/v1/timelines/public", params={"limit": 40}, headers=AUTH
        ).json()
        assert len(body) == 12

    def test_boost_wrapper_carries_reblog_payload(self, http) -> None:
        body = http.get("/api/v1/timelines/home", params={"limit": 40}, headers=AUTH).json()
        wrapper = next(status for status in body if status["id"] == "0008")
        assert wrapper["content"] == ""
        assert wrapper["reblog"]["id"] == "0001"
        assert wrapper["reblog"]["account"]["acct"] == "alice@remote.test"
        assert wrapper["account"]["acct"] == "bob@remote.test"

    def test_account_statuses(self, http) -> None:
        body = http.get(
            "/api/v1/accounts/a1/statuses", params={"limit": 40}, headers=AUTH
        ).json()
        assert [status["id"] for status in body] == ["0007", "0003", "0001"]

    def test_unknown_account_statuses_empty(self, http) -> None:
        body = http.get(
            "/api/v1/accounts/zz/statuses", params={"limit": 40}, headers=AUTH
        ).json()
        assert body == []

    def test_missing_bearer_token_is_401(self, http) -> None:
        response = http.get("/api/v1/timelines/home", params={"limit": 5})
        assert response.status_code == 401

    def test_wrong_bearer_token_is_401(self, http) -> None:
        response = http.get(
            "/api/v1/timelines/home",
            params={"limit": 5},
            headers={"Authorization": "Bearer nope"},
        )
        assert response.status_code == 401


class TestTrending:
    def test_order_matches_score_oracle(self, http) -> None:
        corpus = small_corpus()
        expected = [post.id for post in trending_order(corpus)[:5]]
        body = http.get(
            "/api/v1/trends/statuses", params={"limit": 5, "offset": 0}, headers=AUTH
        ).json()
        assert [status["id"] for status in body] == expected

    def test_carol_post_ranks_first(self, http) -> None:
        body = http.get(
            "/api/v1/trends/statuses", params={"limit": 1, "offset": 0}, headers=AUTH
        ).json()
        assert body[0]["id"] == "0011"

    def test_offset_pages_are_disjoint_and_cover(self, http) -> None:
        first = http.get(
            "/api/v1/trends/statuses", params={"limit": 6, "offset": 0}, headers=AUTH
        ).json()
        second = http.get(
            "/api/v1/trends/statuses", params={"limit": 6, "offset": 6}, headers=AUTH
        ).json()
        ids = [s["id"] for s in first] + [s["id"] for s in second]
        assert len(ids) == len(set(ids)) == 11  # 12 posts minus the boost wrapper

    def test_same_offset_is_deterministic(self, http) -> None:
        calls = [
            http.get(
                "/api/v1/trends/statuses", params={"limit": 8, "offset": 0}, headers=AUTH
            ).json()
            for _ in range(2)
        ]
        assert calls[0] == calls[1]

    def test_past_the_end_is_empty(self, http) -> None:
        body = http.get(
            "/api/v1/trends/statuses", params={"limit": 5, "offset": 999}, headers=AUTH
        ).json()
        assert body == []


class TestRelationshipsAndSearch:
    def test_relationships_report_follows(self, http) -> None:
        body = http.get(
            "/api/v1/accounts/relationships",
            params=[("id[]", "a1"), ("id[]", "a3")],
            headers=AUTH,
        ).json()
        assert {entry["id"]: entry["following"] for entry in body} == {
            "a1": True,
            "a3": False,
        }

    def test_search_full_handle(self, http) -> None:
        body = http.get(
            "/api/v2/search",
            params={"q": "mastodon@mastodon.social", "type": "accounts"},
            headers=AUTH,
        ).json()
        assert body["accounts"][0]["id"] == "m1"

    def test_search_bare_name_uses_instance_domain(self, http) -> None:
        body = http.get(
            "/api/v2/search", params={"q": "dana", "type": "accounts"}, headers=AUTH
        ).json()
        assert body["accounts"][0]["id"] == "a4"

    def test_search_miss_is_empty(self, http) -> None:
        body = http.get(
            "/api/v2/search", params={"q": "nobody@nowhere.test"}, headers=AUTH
        ).json()
        assert body["accounts"] == []


class TestOAuthScript:
    def test_register_authorize_exchange(self, http, mock_app) -> None:
        registered = http.post(
            "/api/v1/apps",
            data={"client_name": "t", "redirect_uris": "http://cb/x", "scopes": "read"},
        ).json()
        assert registered["client_id"] == "mock-client-id"

        authorize = http.get(
            "/oauth/authorize",
            params={
                "response_type": "code",
                "client_id": "mock-client-id",
                "redirect_uri": "http://cb/x",
                "scope": "read",
                "state": "s1",
            },
        )
        assert authorize.status_code == 302
        location = authorize.headers["location"]
        assert location.startswith("http://cb/x?")
        assert "code=c-one" in location and "state=s1" in location

        token = http.post(
            "/oauth/token",
            data={
                "grant_type": "authorization_code",
                "code": "c-one",
                "client_id": "mock-client-id",
                "client_secret": "mock-client-secret",
                "redirect_uri": "http://cb/x",
            },
        ).json()
        assert token["access_token"] == "tok"
        assert token["scope"] == "read"

    def test_codes_are_single_use(self, http) -> None:
        data = {
            "grant_type": "authorization_code",
            "code": "c-two",
            "client_id": "mock-client-id",
            "client_secret": "mock-client-secret",
            "redirect_uri": "http://cb/x",
        }
        assert http.post("/oauth/token", data=data).status_code == 200
        assert http.post("/oauth/token", data=data).status_code == 400

    def test_redirect_uri_mismatch_rejected(self, http) -> None:
        http.post(
            "/api/v1/apps",
            data={"client_name": "t", "redirect_uris": "http://cb/x", "scopes": "read"},
        )
        response = http.post(
            "/oauth/token",
            data={
                "grant_type": "authorization_code",
                "code": "c-three",
                "client_id": "mock-client-id",
                "client_secret": "mock-client-secret",
                "redirect_uri": "http://evil/else",
            },
        )
        assert response.status_code == 400

    def test_bad_client_secret_rejected(self, http) -> None:
        response = http.post(
            "/oauth/token",
            data={
                "grant_type": "authorization_code",
                "code": "c-three",
                "client_id": "mock-client-id",
                "client_secret": "wrong",
                "redirect_uri": "http://cb/x",
            },
        )
        assert response.status_code == 401


class TestFaultInjection:
    def test_scripted_429_on_third_call(self) -> None:
        corpus = small_corpus(
            fault_script=[
                {
                    "endpoint": "/api/v1/timelines/home",
                    "status": 429,
                    "on_call": 3,
                    "retry_after": 7,
                }
            ]
        )
        app = MockInstanceApp(corpus)
        with httpx.Client(
            transport=httpx.WSGITransport(app=app), base_url="http://mock.test"
        ) as http:
            for _ in range(2):
                assert (
                    http.get(
                        "/api/v1/timelines/home", params={"limit": 1}, headers=AUTH
                    ).status_code
                    == 200
                )
            third = http.get("/api/v1/timelines/home", params={"limit": 1}, headers=AUTH)
            assert third.status_code == 429
            assert third.headers["retry-after"] == "7"
            assert (
                http.get(
                    "/api/v1/timelines/home", params={"limit": 1}, headers=AUTH
                ).status_code
                == 200
            )

    def test_permanent_fault_fires_every_call(self) -> None:
        corpus = small_corpus(
            fault_script=[
                {"endpoint": "/api/v1/accounts/a6/statuses", "status": 410}
            ]
        )
        app = MockInstanceApp(corpus)
        with httpx.Client(
            transport=httpx.WSGITransport(app=app), base_url="http://mock.test"
        ) as http:
            for _ in range(2):
                response = http.get(
                    "/api/v1/accounts/a6/statuses", params={"limit": 5}, headers=AUTH
                )
                assert response.status_code == 410


class TestCorpusValidation:
    def test_duplicate_post_ids_rejected(self) -> None:
        data = {**SMALL_CORPUS}
        data["posts"] = SMALL_CORPUS["posts"] + [SMALL_CORPUS["posts"][0]]
        with pytest.raises(ValueError, match="duplicate post ids"):
            corpus_from_dict(data)

    def test_unknown_author_rejected(self) -> None:
        with pytest.raises(ValueError, match="unknown account"):
            small_corpus(
                posts=SMALL_CORPUS["posts"]
                + [
                    {
                        "id": "9999",
                        "author": "ghost@nowhere.test",
                        "created_at": "2025-06-01T11:00:00.000Z",
                    }
                ]
            )

    def test_boost_wrapper_with_content_rejected(self) -> None:
        bad = {
            "id": "9999",
            "author": "bob@remote.test",
            "created_at": "2025-06-01T11:00:00.000Z",
            "boost_of": "0001",
            "html": "<p>sneaky</p>",
        }
        with pytest.raises(ValueError, match="no content"):
            small_corpus(posts=SMALL_CORPUS["posts"] + [bad])

    def test_bundled_corpus_loads_and_is_sized_for_full_pages(self) -> None:
        corpus = load_default_corpus()
        assert len(corpus.posts) == 200
        assert len(corpus.home_timeline()) >= 40
        assert len(corpus.local_timeline()) >= 40
        assert len(trending_order(corpus)) >= 40


class TestTrendingScore:
    def test_fresh_uninteracted_post(self) -> None:
        post = small_corpus().post_by_id("0003")
        score = trending_score(post, post.created_at)
        assert score == pytest.approx(1 / 2**1.5)

    def test_age_strictly_decays(self) -> None:
        post = small_corpus().post_by_id("0003")
        young = trending_score(post, post.created_at + timedelta(hours=1))
        old = trending_score(post, post.created_at + timedelta(hours=5))
        assert old < young

    def test_boosts_and_favorites_weigh_equally(self) -> None:
        corpus = small_corpus(
            posts=SMALL_CORPUS["posts"]
            + [
                _extra("9001", boosts=10, favorites=0),
                _extra("9002", boosts=0, favorites=10),
            ]
        )
        age = timedelta(hours=2)
        first, second = corpus.post_by_id("9001"), corpus.post_by_id("9002")
        assert trending_score(first, first.created_at + age) == pytest.approx(
            trending_score(second, second.created_at + age)
        )

    def test_future_post_rejected(self) -> None:
        post = small_corpus().post_by_id("0003")
        with pytest.raises(ValueError):
            trending_score(post, post.created_at - timedelta(seconds=1))


def _extra(post_id: str, **counts: int) -> dict:
    return {
        "id": post_id,
        "author": "erin@mock.test",
        "created_at": f"2025-06-01T11:{post_id[-2:]}:00.000Z",
        "html": "<p>extra</p>",
        "hashtags": [],
        **counts,
    }


class TestOracleExpectedCounts:
    def test_all_none_is_empty(self) -> None:
        config = CurationConfig(
            priorities={
                SourceKind.FOLLOWING: PriorityLevel.NONE,
                SourceKind.LOCAL: PriorityLevel.NONE,
                SourceKind.TRENDING: PriorityLevel.NONE,
            }
        )
        assert oracle_expected_counts(config, small_corpus()) == {}

    def test_all_high_on_abundant_corpus(self) -> None:
        config = CurationConfig(
            priorities={
                SourceKind.FOLLOWING: PriorityLevel.HIGH,
                SourceKind.LOCAL: PriorityLevel.HIGH,
                SourceKind.TRENDING: PriorityLevel.HIGH,
            }
        )
        counts = oracle_expected_counts(config, abundant_corpus())
        assert sorted(counts.values()) == [13, 13, 13]

    def test_availability_caps_a_small_home(self) -> None:
        config = CurationConfig(
            priorities={
                SourceKind.FOLLOWING: PriorityLevel.HIGH,
                SourceKind.LOCAL: PriorityLevel.NONE,
                SourceKind.TRENDING: PriorityLevel.NONE,
            }
        )
        counts = oracle_expected_counts(config, small_corpus())
        # 7 home entries, but the boost wrapper duplicates 0001: 6 distinct.
        assert list(counts.values()) == [6]

    def test_unresolvable_account_counts_zero(self) -> None:
        config = CurationConfig(
            priorities={
                SourceKind.FOLLOWING: PriorityLevel.NONE,
                SourceKind.LOCAL: PriorityLevel.NONE,
                SourceKind.TRENDING: PriorityLevel.NONE,
            },
            prioritized_accounts=[
                AccountPriority(handle="ghost@nowhere.test", level=PriorityLevel.HIGH)
            ],
        )
        counts = oracle_expected_counts(config, small_corpus())
        assert list(counts.values()) == [0]


def test_serve_real_socket_round_trip() -> None:
    with serve(small_corpus(), port=0) as handle:
        response = httpx.get(
            f"{handle.base_url}/api/v1/timelines/home",
            params={"limit": 3},
            headers=AUTH,
        )
        assert response.status_code == 200
        assert [s["id"] for s in response.json()] == ["0012", "0011", "0008"]
        assert handle.app.request_log[-1].path == "/api/v1/timelines/home"
        assert handle.app.request_log[-1].bearer == "tok"
