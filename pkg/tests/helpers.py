"""Shared test helpers: record builders, brute-force oracles, mock feed server.

The oracles here enumerate every unordered pair explicitly. They must stay
independent of the library's counting-formula implementations: they are the
ground truth those implementations are checked against.
"""

from __future__ import annotations

import itertools
import json
import random
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from spamminer.model import CommentRecord, UserActivityLog, build_log, validate_record


def make_record(user="u1", video="v1", ts=0, text="", hint=False, cid=None) -> CommentRecord:
    return validate_record(
        user_id=user, video_id=video, timestamp_s=ts,
        text=text, has_spam_hint=hint, comment_id=cid,
    )


def make_log(user="u1", rows=()) -> UserActivityLog:
    """Build a log from (ts, text, video, hint) tuples; shorter tuples get defaults."""
    records = []
    for i, row in enumerate(rows):
        ts = row[0]
        text = row[1] if len(row) > 1 else f"t{i}"
        video = row[2] if len(row) > 2 else "v1"
        hint = row[3] if len(row) > 3 else False
        records.append(make_record(user=user, video=video, ts=ts, text=text, hint=hint))
    return build_log(user, records)


# --- brute-force oracles ----------------------------------------------------

def brute_atdc(timestamps) -> float | None:
    diffs = [abs(a - b) for a, b in itertools.combinations(timestamps, 2)]
    if not diffs:
        return None
    return sum(diffs) / len(diffs)


def brute_pair_counts(items, predicate) -> tuple[int, int]:
    """(qualifying pairs, total pairs) by explicit enumeration."""
    hits = 0
    total = 0
    for a, b in itertools.combinations(items, 2):
        total += 1
        if predicate(a, b):
            hits += 1
    return hits, total


def brute_pair_fraction(items, predicate) -> float:
    hits, total = brute_pair_counts(items, predicate)
    return hits / total if total else 0.0


# --- random log suite -------------------------------------------------------

TEXT_ALPHABET = ("a", "b", "c", "d", "e")
VIDEO_IDS = ("v1", "v2", "v3", "v4")


def random_log(rng: random.Random, n: int, user="u1") -> UserActivityLog:
    records = [
        make_record(
            user=user,
            video=rng.choice(VIDEO_IDS),
            ts=rng.randrange(0, 1_000_000),
            text=rng.choice(TEXT_ALPHABET),
            hint=rng.random() < 0.3,
            cid=f"c{i:03d}",
        )
        for i in range(n)
    ]
    return build_log(user, records)


def random_log_suite(seed: int, count: int, n_max: int = 50) -> list[UserActivityLog]:
    rng = random.Random(seed)
    return [random_log(rng, rng.randint(0, n_max)) for _ in range(count)]


# --- mock paged feed server --------------------------------------------------

@dataclass
class MockUser:
    pages: list[list[dict]]
    malformed_pages: set[int] = field(default_factory=set)
    fail_first: int = 0  # number of HTTP 500s to serve before succeeding


@dataclass
class MockFeed:
    users: dict[str, MockUser] = field(default_factory=dict)
    requests: list[tuple[str, str | None]] = field(default_factory=list)
    _failures_served: dict[str, int] = field(default_factory=dict)

    def request_count(self, user_id: str) -> int:
        return sum(1 for uid, _ in self.requests if uid == user_id)


class _FeedHandler(BaseHTTPRequestHandler):
    feed: MockFeed  # set per server

    def log_message(self, *args) -> None:  # keep test output quiet
        pass

    def do_GET(self) -> None:
        parsed = urlparse(self.path)
        parts = parsed.path.strip("/").split("/")
        if len(parts) != 3 or parts[0] != "users" or parts[2] != "comments":
            self.send_error(404)
            return
        user_id = parts[1]
        query = parse_qs(parsed.query)
        token = query.get("page_token", [None])[0]
        self.feed.requests.append((user_id, token))

        user = self.feed.users.get(user_id)
        if user is None:
            self.send_error(404)
            return
        served = self.feed._failures_served.get(user_id, 0)
        if served < user.fail_first:
            self.feed._failures_served[user_id] = served + 1
            self.send_error(500)
            return

        page_idx = 0 if token is None else int(token.removeprefix("p"))
        if page_idx in user.malformed_pages:
            body = b"{this is not a feed page"
        else:
            page_obj: dict = {"comments": user.pages[page_idx]}
            if page_idx + 1 < len(user.pages):
                page_obj["next_page_token"] = f"p{page_idx + 1}"
            body = json.dumps(page_obj).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class FeedServer:
    """A live mock feed on localhost; use as a context manager."""

    def __init__(self, feed: MockFeed) -> None:
        self.feed = feed
        handler = type("Handler", (_FeedHandler,), {"feed": feed})
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
        self.base_url = f"http://127.0.0.1:{self._server.server_port}"
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    def __enter__(self) -> "FeedServer":
        self._thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self._server.shutdown()
        self._server.server_close()


def feed_page_records(user_id: str, start: int, count: int) -> list[dict]:
    """Canonical record objects for one feed page."""
    from spamminer.model import encode_record

    return [
        encode_record(
            make_record(
                user=user_id,
                video=f"v{(start + i) % 7}",
                ts=1_600_000_000 + (start + i) * 60,
                text=f"comment {start + i}",
                cid=f"{user_id}-c{start + i:04d}",
            )
        )
        for i in range(count)
    ]
