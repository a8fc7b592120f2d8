"""Comment-log ingestion: file parsers, paged feed client, on-disk cache.

File parsing is skip-and-report, not fail-fast: crawled logs are dirty, and
one malformed line must never cost the well-formed lines around it. Hard
failure (AllLinesRejected) is reserved for input where nothing at all
parsed.

The feed protocol is deliberately minimal so a mock server or a plain
directory of files can stand in for a real comment-activity API:

    GET {base}/users/{user_id}/comments[?page_token=T]
        -> 200 {"comments": [<canonical record>...], "next_page_token": str?}
        -> 404 when the user is unknown

next_page_token is absent on the final page. A directory endpoint serves
{user_id}.jsonl files instead.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator
from urllib.parse import quote, urlencode

import requests

from .model import (
    CommentRecord,
    UserActivityLog,
    ValidationError,
    build_log,
    decode_record,
    parse_rfc3339,
    record_to_json,
    validate_record,
)


class ParseError(ValueError):
    """A line or row could not be decoded into a record."""


class MissingHeader(ValueError):
    """A CSV input lacks one or more required header columns."""


class AllLinesRejected(ValueError):
    """Non-empty input produced zero valid records."""

    def __init__(self, report: "IngestReport") -> None:
        super().__init__(f"all {report.rejected} input lines rejected")
        self.report = report


class EndpointUnreachable(IOError):
    """The feed endpoint could not be reached after retries."""


class MalformedPage(ValueError):
    """A feed page body was not a valid FeedPage."""

    def __init__(self, message: str, page_token: str | None = None) -> None:
        token_desc = "initial page" if page_token is None else f"page token {page_token!r}"
        super().__init__(f"{token_desc}: {message}")
        self.page_token = page_token


class UserNotFound(LookupError):
    """The endpoint has no log for the requested user."""


@dataclass(frozen=True)
class FeedPage:
    """One page of a paged comment feed."""

    comments: tuple[CommentRecord, ...]
    next_page_token: str | None = None


@dataclass
class IngestReport:
    """Tally of accepted vs rejected input lines.

    rejects holds (line number, error name) for every rejected line, in
    input order. accepted + rejected equals the number of lines attempted
    (blank lines and the CSV header are not attempted).
    """

    accepted: int = 0
    rejected: int = 0
    rejects: list[tuple[int, str]] = field(default_factory=list)

    def reject(self, line_no: int, error_name: str) -> None:
        self.rejected += 1
        self.rejects.append((line_no, error_name))


def _text_lines(stream: IO | Iterable) -> Iterator[str]:
    for line in stream:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def parse_jsonl(stream: IO | Iterable) -> tuple[list[CommentRecord], IngestReport]:
    """Parse canonical JSON-Lines input, one record attempted per non-empty line.

    Malformed lines are recorded in the report and skipped; they never abort
    the stream. Raises AllLinesRejected when the input had lines but none
    parsed.
    """
    records: list[CommentRecord] = []
    report = IngestReport()
    for line_no, line in enumerate(_text_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            report.reject(line_no, "ParseError")
            continue
        try:
            records.append(decode_record(obj))
        except ValidationError as exc:
            report.reject(line_no, type(exc).__name__)
        except ValueError:
            report.reject(line_no, "ParseError")
        else:
            report.accepted += 1
    if report.rejected and not report.accepted:
        raise AllLinesRejected(report)
    return records, report


CSV_REQUIRED_COLUMNS = ("user_id", "video_id", "published_at", "text", "has_spam_hint")
_FLAG_VALUES = {"true": True, "1": True, "false": False, "0": False, "": False}


def _parse_flag(raw: str) -> bool:
    try:
        return _FLAG_VALUES[raw.strip().lower()]
    except KeyError:
        raise ParseError(f"bad has_spam_hint value: {raw!r}") from None


def parse_csv(stream: IO | Iterable) -> tuple[list[CommentRecord], IngestReport]:
    """Parse CSV input with the same skip-and-report contract as parse_jsonl.

    The first row must be a header containing at least user_id, video_id,
    published_at, text, and has_spam_hint (comment_id is optional); quoted
    fields may contain commas and newlines. Raises MissingHeader when a
    required column is absent. Reject line numbers refer to physical lines
    in the file, as with JSONL.
    """
    reader = csv.reader(_text_lines(stream))
    try:
        header = next(reader)
    except StopIteration:
        return [], IngestReport()
    columns = [name.strip() for name in header]
    missing = [name for name in CSV_REQUIRED_COLUMNS if name not in columns]
    if missing:
        raise MissingHeader(f"missing column: {missing[0]!r}")
    index = {name: columns.index(name) for name in columns}
    has_comment_id = "comment_id" in index

    records: list[CommentRecord] = []
    report = IngestReport()
    while True:
        line_no = reader.line_num + 1
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error:
            report.reject(line_no, "ParseError")
            continue
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            if len(row) < len(columns):
                raise ParseError(f"row has {len(row)} fields, expected {len(columns)}")
            comment_id = row[index["comment_id"]].strip() if has_comment_id else ""
            records.append(
                validate_record(
                    user_id=row[index["user_id"]],
                    video_id=row[index["video_id"]],
                    timestamp_s=_parse_published_at(row[index["published_at"]]),
                    text=row[index["text"]],
                    has_spam_hint=_parse_flag(row[index["has_spam_hint"]]),
                    comment_id=comment_id or None,
                )
            )
        except (ParseError, ValidationError) as exc:
            report.reject(line_no, type(exc).__name__)
        else:
            report.accepted += 1
    if report.rejected and not report.accepted:
        raise AllLinesRejected(report)
    return records, report


def _parse_published_at(raw: str) -> int:
    try:
        return parse_rfc3339(raw.strip())
    except ValueError:
        raise ParseError(f"bad published_at value: {raw!r}") from None


def group_by_user(records: Iterable[CommentRecord]) -> list[UserActivityLog]:
    """Group records into one built log per distinct user, sorted by user_id."""
    by_user: dict[str, list[CommentRecord]] = defaultdict(list)
    for rec in records:
        by_user[rec.user_id].append(rec)
    return [build_log(user_id, recs) for user_id, recs in sorted(by_user.items())]


# --- paged feed client -----------------------------------------------------

DEFAULT_PAGE_LIMIT = 20
RETRY_BACKOFF_S = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class FetchResult:
    """A fetched log plus whether the page limit truncated it."""

    log: UserActivityLog
    truncated: bool = False


def _decode_page(body: bytes, page_token: str | None) -> FeedPage:
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise MalformedPage(f"invalid JSON: {exc}", page_token) from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("comments"), list):
        raise MalformedPage("body is not a feed page object", page_token)
    token = obj.get("next_page_token")
    if token is not None and not isinstance(token, str):
        raise MalformedPage("next_page_token must be a string", page_token)
    try:
        comments = tuple(decode_record(item) for item in obj["comments"])
    except ValueError as exc:
        raise MalformedPage(f"bad record: {exc}", page_token) from exc
    return FeedPage(comments=comments, next_page_token=token)


def _get_page(
    base_url: str,
    user_id: str,
    page_token: str | None,
    backoff_s: tuple[float, ...],
    timeout_s: float,
) -> FeedPage:
    url = f"{base_url.rstrip('/')}/users/{quote(user_id, safe='')}/comments"
    if page_token is not None:
        url += "?" + urlencode({"page_token": page_token})
    # One initial attempt plus one retry per backoff step; 404 is definitive
    # and never retried, transport errors and 5xx are.
    last_error: Exception | None = None
    for attempt in range(len(backoff_s) + 1):
        if attempt:
            time.sleep(backoff_s[attempt - 1])
        try:
            response = requests.get(url, timeout=timeout_s)
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code == 404:
            raise UserNotFound(f"user {user_id!r} not found at {base_url}")
        if response.status_code >= 500:
            last_error = IOError(f"HTTP {response.status_code} from {url}")
            continue
        if response.status_code != 200:
            raise EndpointUnreachable(f"HTTP {response.status_code} from {url}")
        return _decode_page(response.content, page_token)
    raise EndpointUnreachable(f"giving up on {url}: {last_error}")


def fetch_user_log(
    endpoint: str | os.PathLike,
    user_id: str,
    page_limit: int = DEFAULT_PAGE_LIMIT,
    *,
    backoff_s: tuple[float, ...] = RETRY_BACKOFF_S,
    timeout_s: float = 10.0,
) -> FetchResult:
    """Fetch one user's activity log from a feed endpoint.

    The endpoint is either an HTTP(S) base URL speaking the paged feed
    protocol, or a directory containing {user_id}.jsonl. HTTP pages are
    followed via next_page_token until the final page or page_limit pages,
    whichever comes first; hitting the limit returns the partial log with
    truncated=True. Failed page fetches are retried once per backoff step
    (0.5s, 1s, 2s by default) before EndpointUnreachable is raised.
    """
    if page_limit < 1:
        raise ValueError(f"page_limit must be positive: {page_limit}")
    endpoint_str = os.fspath(endpoint)
    if not endpoint_str.startswith(("http://", "https://")):
        return _fetch_from_directory(Path(endpoint_str), user_id)

    records: list[CommentRecord] = []
    token: str | None = None
    truncated = False
    for page_no in range(page_limit):
        page = _get_page(endpoint_str, user_id, token, tuple(backoff_s), timeout_s)
        records.extend(page.comments)
        token = page.next_page_token
        if token is None:
            break
        if page_no == page_limit - 1:
            truncated = True
    return FetchResult(log=build_log(user_id, records), truncated=truncated)


def _fetch_from_directory(directory: Path, user_id: str) -> FetchResult:
    path = directory / f"{user_id}.jsonl"
    if not path.is_file():
        raise UserNotFound(f"no log file for user {user_id!r} in {directory}")
    with open(path, "rb") as fh:
        records, _report = parse_jsonl(fh)
    return FetchResult(log=build_log(user_id, records), truncated=False)


# --- on-disk cache ---------------------------------------------------------

def cache_put(directory: str | os.PathLike, log: UserActivityLog) -> Path:
    """Store a log as {dir}/{user_id}.jsonl, atomically (temp file + rename).

    Concurrent writers for distinct users touch distinct files; a repeat put
    for the same user replaces the previous file in one rename.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / f"{log.user_id}.jsonl"
    payload = "".join(record_to_json(rec) + "\n" for rec in log.records)
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".jsonl")
    try:
        with io.open(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
    return target


def cache_get(directory: str | os.PathLike, user_id: str) -> UserActivityLog | None:
    """Load a cached log, or None when the user has no cache entry."""
    path = Path(directory) / f"{user_id}.jsonl"
    if not path.is_file():
        return None
    with open(path, "rb") as fh:
        try:
            records, _report = parse_jsonl(fh)
        except AllLinesRejected:
            records = []
    return build_log(user_id, records)
