"""Shared domain types, validation, and canonical serialization.

Everything downstream (ingest, features, classifier, report) works on the
types defined here. All types are immutable value objects: once constructed
they can be shared freely across threads or workers.

The canonical wire format for a comment record is one JSON object per line:

    {"user_id": str, "comment_id": str?, "video_id": str,
     "published_at": RFC3339 string, "text": str, "has_spam_hint": bool}

Timestamps travel as RFC3339 strings (human-auditable fixtures) and live
internally as integer Unix epoch seconds (unambiguous arithmetic).
Sub-second precision in input is truncated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum


class ValidationError(ValueError):
    """A raw record violates a domain invariant."""


class EmptyUserId(ValidationError):
    pass


class EmptyVideoId(ValidationError):
    pass


class NegativeTimestamp(ValidationError):
    pass


class MixedUsers(ValueError):
    """A record with a foreign user_id was passed to another user's log."""


class ConfigError(ValueError):
    """A rule configuration file is malformed or carries unknown keys."""


@dataclass(frozen=True)
class CommentRecord:
    """One comment event: who commented on what, when, and what they wrote.

    user_id and video_id are trimmed on construction and must be non-empty.
    timestamp_s is integer seconds since the Unix epoch (UTC), never negative.
    comment_id is optional; when present it is expected to be unique within
    one user's log (build_log enforces this by deduplication).
    """

    user_id: str
    video_id: str
    timestamp_s: int
    text: str = ""
    has_spam_hint: bool = False
    comment_id: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "user_id", self.user_id.strip())
        object.__setattr__(self, "video_id", self.video_id.strip())
        object.__setattr__(self, "timestamp_s", int(self.timestamp_s))
        if not self.user_id:
            raise EmptyUserId("user_id is empty")
        if not self.video_id:
            raise EmptyVideoId("video_id is empty")
        if self.timestamp_s < 0:
            raise NegativeTimestamp(f"timestamp_s is negative: {self.timestamp_s}")


def validate_record(
    user_id: str,
    video_id: str,
    timestamp_s: int,
    text: str = "",
    has_spam_hint: bool = False,
    comment_id: str | None = None,
) -> CommentRecord:
    """Build a validated CommentRecord, trimming identifiers.

    Raises EmptyUserId, EmptyVideoId, or NegativeTimestamp naming the
    offending field.
    """
    return CommentRecord(
        user_id=user_id,
        video_id=video_id,
        timestamp_s=timestamp_s,
        text=text,
        has_spam_hint=has_spam_hint,
        comment_id=comment_id,
    )


@dataclass(frozen=True)
class UserActivityLog:
    """One user's recent comment records, ascending by timestamp.

    Construct via build_log, which sorts, deduplicates, and checks ownership.
    """

    user_id: str
    records: tuple[CommentRecord, ...]

    def __post_init__(self) -> None:
        seen_ids: set[str] = set()
        for rec in self.records:
            if rec.user_id != self.user_id:
                raise MixedUsers(
                    f"record for {rec.user_id!r} in log of {self.user_id!r}"
                )
            if rec.comment_id is not None:
                if rec.comment_id in seen_ids:
                    raise ValueError(f"duplicate comment_id {rec.comment_id!r}")
                seen_ids.add(rec.comment_id)
        times = [rec.timestamp_s for rec in self.records]
        if times != sorted(times):
            raise ValueError("records are not sorted by timestamp_s")

    def __len__(self) -> int:
        return len(self.records)


def build_log(user_id: str, records: list[CommentRecord]) -> UserActivityLog:
    """Assemble a UserActivityLog from unordered records.

    Records are sorted ascending by timestamp, ties broken by comment_id then
    input order. Duplicate comment_id values are collapsed keeping the first
    occurrence (in input order); records without a comment_id are never
    deduplicated. Raises MixedUsers if any record belongs to another user.
    """
    seen_ids: set[str] = set()
    deduped: list[CommentRecord] = []
    for rec in records:
        if rec.comment_id is not None:
            if rec.comment_id in seen_ids:
                continue
            seen_ids.add(rec.comment_id)
        deduped.append(rec)
    deduped.sort(key=lambda rec: (rec.timestamp_s, rec.comment_id or ""))
    return UserActivityLog(user_id=user_id, records=tuple(deduped))


@dataclass(frozen=True)
class FeatureVector:
    """Per-user values of the usage-based spam indicators.

    atdc_s    mean absolute time difference over all unordered comment pairs,
              in seconds; absent (None) when the log has fewer than 2 comments.
    pchf_pct  percentage of comments carrying the spam-hint flag, 0..100.
    crr       fraction of unordered pairs with exactly matching text, 0..1.
              This value doubles as the comment-overlap (COMOVP) indicator.
    vidovp    fraction of unordered pairs posted on different videos, 0..1.
    crav      fraction of unordered pairs that match in text AND differ in
              video, 0..1. Always <= min(crr, vidovp).
    """

    user_id: str
    n_comments: int
    atdc_s: float | None
    pchf_pct: float
    crr: float
    vidovp: float
    crav: float

    def __post_init__(self) -> None:
        if self.n_comments < 0:
            raise ValueError("n_comments is negative")
        if (self.atdc_s is not None) != (self.n_comments >= 2):
            raise ValueError("atdc_s must be present exactly when n_comments >= 2")
        if self.atdc_s is not None and self.atdc_s < 0:
            raise ValueError("atdc_s is negative")
        if not 0.0 <= self.pchf_pct <= 100.0:
            raise ValueError(f"pchf_pct out of range: {self.pchf_pct}")
        for name in ("crr", "vidovp", "crav"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of range: {value}")
        if self.crav > self.crr or self.crav > self.vidovp:
            raise ValueError("crav exceeds crr or vidovp")


class Label(str, Enum):
    """User-level classification outcome."""

    SPAMMER = "spammer"
    LEGIT = "legit"
    INSUFFICIENT = "insufficient"


class Indicator(str, Enum):
    """The four rule clauses, in rule order."""

    PCHF = "PCHF"
    ATDC = "ATDC"
    COMOVP = "COMOVP"
    VIDOVP = "VIDOVP"


VALID_COMBINE = ("or",)


@dataclass(frozen=True)
class RuleConfig:
    """Thresholds and combination semantics for the spammer rule.

    The rule applies only to users with strictly more than min_comments
    comments; all four threshold comparisons are strict. Defaults are the
    empirically derived values; they are configuration, not constants.
    """

    min_comments: int = 5
    pchf_gt: float = 70.0
    atdc_lt_s: float = 150.0
    comovp_gt: float = 0.60
    vidovp_gt: float = 0.60
    combine: str = "or"

    def __post_init__(self) -> None:
        if self.min_comments < 1:
            raise ConfigError(f"min_comments must be positive: {self.min_comments}")
        for name in ("pchf_gt", "atdc_lt_s", "comovp_gt", "vidovp_gt"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite: {value}")
        if not 0.0 <= self.pchf_gt <= 100.0:
            raise ConfigError(f"pchf_gt out of range [0, 100]: {self.pchf_gt}")
        for name in ("comovp_gt", "vidovp_gt"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} out of range [0, 1]: {value}")
        if self.combine not in VALID_COMBINE:
            raise ConfigError(f"unsupported combine mode: {self.combine!r}")


@dataclass(frozen=True)
class Verdict:
    """Classification of one user, with the indicators that fired."""

    user_id: str
    label: Label
    triggered: frozenset[Indicator]
    features: FeatureVector = field(repr=False)

    def __post_init__(self) -> None:
        if (self.label is Label.SPAMMER) != bool(self.triggered):
            raise ValueError("label spammer iff triggered is non-empty")


# --- timestamp wire format -------------------------------------------------

def parse_rfc3339(value: str) -> int:
    """Parse an RFC3339 timestamp into epoch seconds, truncating sub-seconds.

    A missing UTC offset is taken as UTC.
    """
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.replace(microsecond=0).timestamp())


def format_rfc3339(timestamp_s: int) -> str:
    """Render epoch seconds as a canonical RFC3339 string (Z-suffixed)."""
    dt = datetime.fromtimestamp(timestamp_s, tz=timezone.utc)
    return dt.isoformat().replace("+00:00", "Z")


# --- canonical JSON --------------------------------------------------------

def encode_record(rec: CommentRecord) -> dict:
    """Canonical JSON object for one record; comment_id omitted when absent."""
    obj: dict = {"user_id": rec.user_id}
    if rec.comment_id is not None:
        obj["comment_id"] = rec.comment_id
    obj["video_id"] = rec.video_id
    obj["published_at"] = format_rfc3339(rec.timestamp_s)
    obj["text"] = rec.text
    obj["has_spam_hint"] = rec.has_spam_hint
    return obj


def record_to_json(rec: CommentRecord) -> str:
    return json.dumps(encode_record(rec), ensure_ascii=False)


def decode_record(obj: dict) -> CommentRecord:
    """Build a validated record from a canonical JSON object.

    A missing has_spam_hint defaults to False (absence of a tag is not
    evidence of spam); a missing text defaults to the empty string.
    """
    if not isinstance(obj, dict):
        raise ValidationError(f"expected JSON object, got {type(obj).__name__}")
    for key in ("user_id", "video_id", "published_at"):
        if key not in obj:
            raise ValidationError(f"missing field {key!r}")
    comment_id = obj.get("comment_id")
    if comment_id is not None and not isinstance(comment_id, str):
        raise ValidationError("comment_id must be a string")
    hint = obj.get("has_spam_hint", False)
    if not isinstance(hint, bool):
        raise ValidationError("has_spam_hint must be a boolean")
    text = obj.get("text", "")
    if not isinstance(text, str):
        raise ValidationError("text must be a string")
    if not isinstance(obj["published_at"], str):
        raise ValidationError("published_at must be a string")
    return validate_record(
        user_id=str(obj["user_id"]),
        video_id=str(obj["video_id"]),
        timestamp_s=parse_rfc3339(obj["published_at"]),
        text=text,
        has_spam_hint=hint,
        comment_id=comment_id,
    )


def encode_features(fv: FeatureVector) -> dict:
    """JSON object for a feature vector; atdc_s omitted when absent."""
    obj: dict = {"user_id": fv.user_id, "n_comments": fv.n_comments}
    if fv.atdc_s is not None:
        obj["atdc_s"] = fv.atdc_s
    obj["pchf_pct"] = fv.pchf_pct
    obj["crr"] = fv.crr
    obj["vidovp"] = fv.vidovp
    obj["crav"] = fv.crav
    return obj


# Serialization order for triggered indicators: rule order, not alphabetic.
_INDICATOR_ORDER = (Indicator.PCHF, Indicator.ATDC, Indicator.COMOVP, Indicator.VIDOVP)


def encode_verdict(verdict: Verdict) -> dict:
    triggered = [ind.value for ind in _INDICATOR_ORDER if ind in verdict.triggered]
    return {
        "user_id": verdict.user_id,
        "label": verdict.label.value,
        "triggered": triggered,
        "features": encode_features(verdict.features),
    }


def verdict_to_json(verdict: Verdict) -> str:
    return json.dumps(encode_verdict(verdict), ensure_ascii=False)


_RULE_CONFIG_KEYS = frozenset(
    ("min_comments", "pchf_gt", "atdc_lt_s", "comovp_gt", "vidovp_gt", "combine")
)


def rule_config_from_obj(obj: dict) -> RuleConfig:
    """Build a RuleConfig from a JSON object, rejecting unknown keys.

    Unknown keys are an error rather than ignored: a typo in a threshold
    name would otherwise silently fall back to the default.
    """
    if not isinstance(obj, dict):
        raise ConfigError("rule config must be a JSON object")
    unknown = sorted(set(obj) - _RULE_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key: {unknown[0]!r}")
    kwargs: dict = {}
    if "min_comments" in obj:
        if not isinstance(obj["min_comments"], int) or isinstance(obj["min_comments"], bool):
            raise ConfigError("min_comments must be an integer")
        kwargs["min_comments"] = obj["min_comments"]
    for name in ("pchf_gt", "atdc_lt_s", "comovp_gt", "vidovp_gt"):
        if name in obj:
            value = obj[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{name} must be a number")
            kwargs[name] = float(value)
    if "combine" in obj:
        if not isinstance(obj["combine"], str):
            raise ConfigError("combine must be a string")
        kwargs["combine"] = obj["combine"].lower()
    return RuleConfig(**kwargs)


def load_rule_config(path: str) -> RuleConfig:
    """Load a RuleConfig from a JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return rule_config_from_obj(obj)
