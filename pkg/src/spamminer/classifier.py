"""Threshold rule turning a feature vector into an explainable verdict.

A user with more than min_comments comments is a spammer when ANY clause
fires (OR combination), with every comparison strict:

    PCHF   pchf_pct > pchf_gt        (default 70)
    ATDC   atdc_s   < atdc_lt_s      (default 150 seconds; absent never fires)
    COMOVP crr      > comovp_gt      (default 0.60)
    VIDOVP vidovp   > vidovp_gt      (default 0.60)

Users at or below the comment gate get the distinct Insufficient label:
they are excluded from the analysis, not cleared. The verdict records every
clause that fired, not just the first, so results stay explainable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import FeatureVector, Indicator, Label, RuleConfig, Verdict


def classify(fv: FeatureVector, cfg: RuleConfig = RuleConfig()) -> Verdict:
    """Apply the threshold rule to one feature vector."""
    if fv.n_comments <= cfg.min_comments:
        return Verdict(fv.user_id, Label.INSUFFICIENT, frozenset(), fv)
    triggered = set()
    if fv.pchf_pct > cfg.pchf_gt:
        triggered.add(Indicator.PCHF)
    if fv.atdc_s is not None and fv.atdc_s < cfg.atdc_lt_s:
        triggered.add(Indicator.ATDC)
    if fv.crr > cfg.comovp_gt:
        triggered.add(Indicator.COMOVP)
    if fv.vidovp > cfg.vidovp_gt:
        triggered.add(Indicator.VIDOVP)
    label = Label.SPAMMER if triggered else Label.LEGIT
    return Verdict(fv.user_id, label, frozenset(triggered), fv)


@dataclass(frozen=True)
class BatchResult:
    """Element-wise verdicts (input order preserved) plus label counts."""

    verdicts: tuple[Verdict, ...]
    counts: dict[str, int]


def classify_batch(
    fvs: list[FeatureVector], cfg: RuleConfig = RuleConfig()
) -> BatchResult:
    """Classify a batch of feature vectors, tallying labels for reporting."""
    verdicts = tuple(classify(fv, cfg) for fv in fvs)
    counts = {label.value: 0 for label in Label}
    for verdict in verdicts:
        counts[verdict.label.value] += 1
    return BatchResult(verdicts=verdicts, counts=counts)
