import json
from fractions import Fraction as F

import pytest

from mirrorint.padic import primes_upto
from mirrorint.sieve import (
    BACKEND_EXACT,
    BACKEND_MODULAR,
    TARGET_H,
    TARGET_H1,
    CheckpointError,
    SieveCheckpoint,
    SieveRecord,
    sieve_positive_valuation,
)


def run(p, max_N, target=TARGET_H, backend=BACKEND_MODULAR, checkpoint=None):
    r = sieve_positive_valuation(p, max_N, target, backend, checkpoint)
    return list(r), r


class TestKnownSets:
    @pytest.mark.parametrize("backend", [BACKEND_EXACT, BACKEND_MODULAR])
    def test_p3_H(self, backend):
        records, _ = run(3, 1000, TARGET_H, backend)
        assert [r.N for r in records] == [2, 7, 22]
        assert all(r.v == 1 and not r.v_at_least for r in records)

    @pytest.mark.parametrize("backend", [BACKEND_EXACT, BACKEND_MODULAR])
    def test_p5_H(self, backend):
        records, _ = run(5, 1000, TARGET_H, backend)
        assert [(r.N, r.v) for r in records] == [(4, 2), (20, 1), (24, 1)]

    @pytest.mark.parametrize("backend", [BACKEND_EXACT, BACKEND_MODULAR])
    def test_p3_shifted(self, backend):
        records, _ = run(3, 1000, TARGET_H1, backend)
        assert [(r.N, r.v) for r in records] == [(66, 1), (68, 1)]

    @pytest.mark.parametrize("backend", [BACKEND_EXACT, BACKEND_MODULAR])
    def test_p5_shifted(self, backend):
        records, _ = run(5, 1000, TARGET_H1, backend)
        assert [(r.N, r.v) for r in records] == [(3, 1), (21, 1), (23, 1)]

    def test_p2_exact_is_empty(self):
        # v_2(H_N) = -floor(log2 N) <= 0: nothing to find.
        records, _ = run(2, 1000, TARGET_H, BACKEND_EXACT)
        assert records == []
        records, _ = run(2, 1000, TARGET_H1, BACKEND_EXACT)
        assert records == []

    def test_p2_modular_rejected(self):
        with pytest.raises(ValueError):
            sieve_positive_valuation(2, 100, TARGET_H, BACKEND_MODULAR)


class TestBackendAgreement:
    @pytest.mark.parametrize("target", [TARGET_H, TARGET_H1])
    def test_streams_identical(self, target):
        for p in [q for q in primes_upto(31) if q >= 3]:
            exact, _ = run(p, 10_000, target, BACKEND_EXACT)
            modular, _ = run(p, 10_000, target, BACKEND_MODULAR)
            assert exact == modular, p


class TestHitGrowthBounds:
    def test_unshifted_bounds(self):
        # Hits with p <= N satisfy N >= 2p; >= 3p unless p = 3; >= 5p unless
        # p in {3, 5, 11}; >= 6p when the valuation exceeds 2.
        for p in [q for q in primes_upto(31) if q >= 3]:
            for r in run(p, 10_000, TARGET_H, BACKEND_MODULAR)[0]:
                if r.N < p:
                    continue
                assert r.N >= 2 * p
                if p != 3:
                    assert r.N >= 3 * p
                if p not in (3, 5, 11):
                    assert r.N >= 5 * p
                if r.v > 2:
                    assert r.N >= 6 * p

    def test_shifted_bounds(self):
        # Shifted hits with p <= N satisfy N >= 4p; >= 6p unless p = 5.
        for p in [q for q in primes_upto(31) if q >= 3]:
            for r in run(p, 10_000, TARGET_H1, BACKEND_MODULAR)[0]:
                if r.N < p:
                    continue
                assert r.N >= 4 * p
                if p != 5:
                    assert r.N >= 6 * p


class TestCheckpointing:
    @pytest.mark.parametrize("backend", [BACKEND_EXACT, BACKEND_MODULAR])
    @pytest.mark.parametrize("target", [TARGET_H, TARGET_H1])
    def test_resume_is_deterministic(self, backend, target):
        direct, _ = run(3, 1000, target, backend)
        first, r1 = run(3, 500, target, backend)
        cp = r1.checkpoint()
        assert cp.last_N == 500
        rest, r2 = run(3, 1000, target, backend, checkpoint=cp)
        assert first + rest == direct

    def test_checkpoint_survives_serialization(self):
        _, r1 = run(5, 300, TARGET_H, BACKEND_MODULAR)
        text = r1.checkpoint().dump()
        cp = SieveCheckpoint.load(text)
        rest, _ = run(5, 1000, TARGET_H, BACKEND_MODULAR, checkpoint=cp)
        direct, _ = run(5, 1000, TARGET_H, BACKEND_MODULAR)
        assert rest == [r for r in direct if r.N > 300]

    def test_corrupt_checkpoint_detected(self):
        _, r = run(5, 100, TARGET_H, BACKEND_MODULAR)
        doc = r.checkpoint().to_json()
        doc["last_N"] = 99  # tamper
        with pytest.raises(CheckpointError, match="digest"):
            SieveCheckpoint.from_json(doc)

    def test_garbage_checkpoint_detected(self):
        with pytest.raises(CheckpointError):
            SieveCheckpoint.load("{not json")
        with pytest.raises(CheckpointError):
            SieveCheckpoint.load(json.dumps({"format_version": 99}))

    def test_mismatched_run_detected(self):
        _, r = run(5, 100, TARGET_H, BACKEND_MODULAR)
        cp = r.checkpoint()
        with pytest.raises(CheckpointError, match="different run"):
            sieve_positive_valuation(7, 200, TARGET_H, BACKEND_MODULAR, cp)
        with pytest.raises(CheckpointError, match="past"):
            sieve_positive_valuation(5, 50, TARGET_H, BACKEND_MODULAR, cp)

    def test_checkpoint_midstream(self):
        runner = sieve_positive_valuation(3, 1000, TARGET_H, BACKEND_MODULAR)
        it = iter(runner)
        first = next(it)
        assert first.N == 2
        cp = runner.checkpoint()
        assert cp.last_N == 2
        resumed = sieve_positive_valuation(3, 1000, TARGET_H, BACKEND_MODULAR, cp)
        assert [first] + list(resumed) == list(
            sieve_positive_valuation(3, 1000, TARGET_H, BACKEND_MODULAR)
        )


class TestRecordSchema:
    def test_jsonl_fields(self):
        rec = SieveRecord(p=3, N=7, v=1, v_at_least=False, target=TARGET_H)
        doc = json.loads(rec.to_line())
        assert doc == {"p": 3, "N": 7, "v": 1, "v_at_least": False, "target": "H"}

    def test_checkpoint_format_version(self):
        _, r = run(3, 10, TARGET_H, BACKEND_MODULAR)
        doc = r.checkpoint().to_json()
        assert doc["format_version"] == 1
        assert {"p", "target", "backend", "last_N", "state", "digest"} <= set(doc)


class TestValidation:
    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sieve_positive_valuation(4, 10)
        with pytest.raises(ValueError):
            sieve_positive_valuation(3, 0)
        with pytest.raises(ValueError):
            sieve_positive_valuation(3, 10, target="X")
        with pytest.raises(ValueError):
            sieve_positive_valuation(3, 10, backend="quantum")
