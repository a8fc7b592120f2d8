"""Usage-based spam indicators computed from one user's activity log.

Four indicators, each a statistic over the unordered pairs of comments in
the log:

  atdc    average time difference between comments: the mean of
          |t_i - t_j| over every unordered pair, in seconds. Spam robots
          post so fast that this collapses toward zero.
  pchf    percentage of comments the community/moderators tagged with the
          spam-hint flag.
  crr     comment repetition and redundancy: the fraction of pairs whose
          texts match exactly. High values mean the same message posted
          again and again. The same number serves as the comment-overlap
          (COMOVP) indicator in the classification rule.
  vidovp  video overlap: the fraction of pairs posted on *different*
          videos. Grows with the diversity of videos a user touches.
  crav    comment repeatability across videos: the fraction of pairs that
          match in text AND differ in video, the signature of pasting one
          promotional message across many unrelated videos. By definition
          crav <= min(crr, vidovp).

All pair metrics are computed with exact integer counting over equivalence
classes (sum of c*(c-1)/2 within each class) and a single final division,
so results are identical to brute-force pair enumeration, permutation
invariant, and cheap even for long logs. Logs with fewer than two comments
have no pairs: pair metrics are 0 and atdc is absent.
"""

from __future__ import annotations

import unicodedata
from collections import Counter

from .model import FeatureVector, UserActivityLog

MODE_CANONICAL = "canonical"
MODE_RAW_BYTES = "raw-bytes"
NORMALIZATION_MODES = (MODE_CANONICAL, MODE_RAW_BYTES)


def normalize_text(raw: str, mode: str = MODE_CANONICAL) -> str:
    """Normalize comment text for exact-match comparison.

    canonical mode applies Unicode NFC, trims leading/trailing whitespace,
    and collapses internal whitespace runs to a single space; matching stays
    case-sensitive. raw-bytes mode is the identity, for strict byte-equality
    experiments. Both modes are idempotent.
    """
    if mode == MODE_RAW_BYTES:
        return raw
    if mode != MODE_CANONICAL:
        raise ValueError(f"unknown normalization mode: {mode!r}")
    return " ".join(unicodedata.normalize("NFC", raw).split())


def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


def _within_class_pairs(counts: Counter) -> int:
    """Pairs falling inside one equivalence class, summed over classes."""
    return sum(_pair_count(c) for c in counts.values())


def atdc(log: UserActivityLog) -> float | None:
    """Mean absolute timestamp difference over all unordered pairs, seconds.

    Absent (None) when the log has fewer than two comments. Uses the sorted
    order already guaranteed by the log: the sum of |t_i - t_j| over all
    pairs equals sum_k t_k * (2k - n + 1) for ascending t_0..t_{n-1},
    computed in exact integer arithmetic before the single division.
    """
    n = len(log.records)
    if n < 2:
        return None
    total = 0
    for k, rec in enumerate(log.records):
        total += rec.timestamp_s * (2 * k - n + 1)
    return total / _pair_count(n)


def pchf(log: UserActivityLog) -> float:
    """Percentage of comments carrying the spam-hint flag (0 for empty logs)."""
    n = len(log.records)
    if n == 0:
        return 0.0
    flagged = sum(1 for rec in log.records if rec.has_spam_hint)
    return 100 * flagged / n


def crr(log: UserActivityLog, mode: str = MODE_CANONICAL) -> float:
    """Fraction of unordered pairs with exactly matching normalized text."""
    n = len(log.records)
    if n < 2:
        return 0.0
    texts = Counter(normalize_text(rec.text, mode) for rec in log.records)
    return _within_class_pairs(texts) / _pair_count(n)


def vidovp(log: UserActivityLog) -> float:
    """Fraction of unordered pairs posted on different videos.

    Computed as the complement of the same-video pair count: a user whose
    comments all sit on one video scores 0, one who never repeats a video
    scores 1.
    """
    n = len(log.records)
    if n < 2:
        return 0.0
    videos = Counter(rec.video_id for rec in log.records)
    same_video = _within_class_pairs(videos)
    return (_pair_count(n) - same_video) / _pair_count(n)


def crav(log: UserActivityLog, mode: str = MODE_CANONICAL) -> float:
    """Fraction of pairs matching in text AND posted on different videos.

    Counted as same-text pairs minus same-text-same-video pairs, both via
    class counts, so the result is exactly the brute-force pair census.
    """
    n = len(log.records)
    if n < 2:
        return 0.0
    texts: Counter = Counter()
    text_and_video: Counter = Counter()
    for rec in log.records:
        text = normalize_text(rec.text, mode)
        texts[text] += 1
        text_and_video[(text, rec.video_id)] += 1
    qualifying = _within_class_pairs(texts) - _within_class_pairs(text_and_video)
    return qualifying / _pair_count(n)


def feature_vector(log: UserActivityLog, mode: str = MODE_CANONICAL) -> FeatureVector:
    """Assemble all indicators plus the comment count for one user."""
    return FeatureVector(
        user_id=log.user_id,
        n_comments=len(log.records),
        atdc_s=atdc(log),
        pchf_pct=pchf(log),
        crr=crr(log, mode),
        vidovp=vidovp(log),
        crav=crav(log, mode),
    )
