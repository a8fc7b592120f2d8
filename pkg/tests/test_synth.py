"""Corpus generator: determinism, persona indicator guarantees, spec files."""

from __future__ import annotations

import json

import pytest

from spamminer.classifier import classify
from spamminer.features import atdc, crav, crr, feature_vector, pchf, vidovp
from spamminer.ingest import group_by_user
from spamminer.model import Label, RuleConfig, record_to_json
from spamminer.synth import (
    InvalidSpec,
    LabeledCorpus,
    PersonaKind,
    PersonaSpec,
    benchmark_specs,
    generate,
    load_persona_specs,
    persona_spec_from_obj,
    write_corpus,
)

DEFAULTS = RuleConfig()


def corpus_bytes(corpus: LabeledCorpus) -> bytes:
    return "".join(record_to_json(rec) + "\n" for rec in corpus.records).encode()


class TestDeterminism:
    def test_same_seed_same_corpus(self):
        specs = benchmark_specs()
        assert corpus_bytes(generate(specs, 42)) == corpus_bytes(generate(specs, 42))
        assert generate(specs, 42).truth == generate(specs, 42).truth

    def test_different_seed_different_corpus(self):
        specs = benchmark_specs()
        assert corpus_bytes(generate(specs, 1)) != corpus_bytes(generate(specs, 2))


class TestCounts:
    def test_benchmark_shape(self):
        corpus = generate(benchmark_specs(), 42)
        assert len(corpus.truth) == 200
        spammers = [uid for uid, label in corpus.truth.items() if label == "spammer"]
        assert len(spammers) == 100
        assert all(not uid.startswith("legit-") for uid in spammers)

    def test_user_ids_encode_persona(self):
        corpus = generate([PersonaSpec(PersonaKind.BOT, 3)], 0)
        assert sorted(corpus.truth) == ["bot-0000", "bot-0001", "bot-0002"]

    def test_every_record_user_in_truth(self):
        corpus = generate(benchmark_specs(), 7)
        assert {rec.user_id for rec in corpus.records} == set(corpus.truth)

    def test_zero_count(self):
        corpus = generate([PersonaSpec(PersonaKind.LEGIT, 0)], 0)
        assert corpus.records == ()
        assert corpus.truth == {}


@pytest.mark.parametrize("seed", [0, 42, 1234])
class TestPersonaGuarantees:
    def _logs(self, kind: PersonaKind, seed: int, count=15):
        corpus = generate([PersonaSpec(kind, count)], seed)
        return group_by_user(list(corpus.records))

    def test_bot_atdc_under_threshold(self, seed):
        for log in self._logs(PersonaKind.BOT, seed):
            assert atdc(log) < DEFAULTS.atdc_lt_s

    def test_flagged_pchf_over_threshold(self, seed):
        for log in self._logs(PersonaKind.FLAGGED, seed):
            assert pchf(log) > DEFAULTS.pchf_gt

    def test_repeater_crr_over_threshold(self, seed):
        for log in self._logs(PersonaKind.REPEATER, seed):
            assert crr(log) > DEFAULTS.comovp_gt

    def test_promoter_crav_over_060(self, seed):
        for log in self._logs(PersonaKind.PROMOTER, seed):
            assert crav(log) > 0.60
            assert crr(log) > 0.60
            assert vidovp(log) > 0.60

    def test_legit_fires_nothing(self, seed):
        for log in self._logs(PersonaKind.LEGIT, seed, count=40):
            verdict = classify(feature_vector(log), DEFAULTS)
            assert verdict.label is Label.LEGIT
            assert verdict.triggered == frozenset()


class TestSmallLogGuarantees:
    # tight comment ranges stress the threshold margins
    @pytest.mark.parametrize("n", range(2, 9))
    def test_repeater_any_size(self, n):
        corpus = generate(
            [PersonaSpec(PersonaKind.REPEATER, 5, comments_per_user=(n, n))], 3
        )
        for log in group_by_user(list(corpus.records)):
            assert crr(log) > 0.60

    @pytest.mark.parametrize("n", range(2, 9))
    def test_promoter_any_size(self, n):
        corpus = generate(
            [PersonaSpec(PersonaKind.PROMOTER, 5, comments_per_user=(n, n))], 3
        )
        for log in group_by_user(list(corpus.records)):
            assert crav(log) > 0.60

    @pytest.mark.parametrize("n", range(1, 9))
    def test_legit_any_size_never_fires(self, n):
        corpus = generate(
            [PersonaSpec(PersonaKind.LEGIT, 5, comments_per_user=(n, n))], 3
        )
        gate_zero = RuleConfig(min_comments=1)
        for log in group_by_user(list(corpus.records)):
            fv = feature_vector(log)
            if fv.n_comments <= 1:
                continue
            verdict = classify(fv, gate_zero)
            assert verdict.triggered == frozenset(), fv


class TestSpecValidation:
    def test_negative_count(self):
        with pytest.raises(InvalidSpec, match="count"):
            PersonaSpec(PersonaKind.BOT, -1)

    def test_empty_comment_range(self):
        with pytest.raises(InvalidSpec, match="comments_per_user"):
            PersonaSpec(PersonaKind.BOT, 1, comments_per_user=(9, 3))

    def test_fraction_out_of_range(self):
        with pytest.raises(InvalidSpec, match="hint_fraction"):
            PersonaSpec(PersonaKind.FLAGGED, 1, hint_fraction=1.5)

    def test_knob_applicability(self):
        with pytest.raises(InvalidSpec, match="video_count"):
            PersonaSpec(PersonaKind.LEGIT, 1, video_count=(2, 3))
        with pytest.raises(InvalidSpec, match="duplicate_fraction"):
            PersonaSpec(PersonaKind.BOT, 1, duplicate_fraction=0.9)

    def test_from_obj_unknown_key(self):
        with pytest.raises(InvalidSpec, match="gaps"):
            persona_spec_from_obj({"kind": "bot", "count": 1, "gaps": [1, 2]})

    def test_from_obj_unknown_kind(self):
        with pytest.raises(InvalidSpec, match="lurker"):
            persona_spec_from_obj({"kind": "lurker", "count": 1})


class TestFiles:
    def test_write_corpus_and_truth(self, tmp_path):
        corpus = generate([PersonaSpec(PersonaKind.BOT, 2)], 9)
        out, truth_path = write_corpus(corpus, tmp_path / "corpus.jsonl")
        assert out.name == "corpus.jsonl"
        assert truth_path.name == "corpus.truth.json"
        truth = json.loads(truth_path.read_text())
        assert truth == {"bot-0000": "spammer", "bot-0001": "spammer"}
        lines = out.read_text().splitlines()
        assert len(lines) == len(corpus.records)

    def test_load_persona_specs(self, tmp_path):
        spec_path = tmp_path / "personas.json"
        spec_path.write_text(json.dumps([
            {"kind": "legit", "count": 4, "comments_per_user": [6, 10]},
            {"kind": "repeater", "count": 2, "duplicate_fraction": 0.9},
        ]))
        specs = load_persona_specs(str(spec_path))
        assert specs[0] == PersonaSpec(PersonaKind.LEGIT, 4, comments_per_user=(6, 10))
        assert specs[1].duplicate_fraction == 0.9

    def test_load_rejects_non_array(self, tmp_path):
        spec_path = tmp_path / "personas.json"
        spec_path.write_text('{"kind": "bot"}')
        with pytest.raises(InvalidSpec):
            load_persona_specs(str(spec_path))
