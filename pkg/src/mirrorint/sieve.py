"""Streaming search for indices N with v_p(H_N) > 0 (or v_p(H_N - 1) > 0).

Two backends: ``exact`` keeps a running Fraction and is the correctness
oracle; ``modular`` keeps the p-adic state of ModularHarmonicSum and prunes
candidates with the recursion "a positive valuation at N forces a positive
valuation at floor(N/p)", so it scales to bounds where exact rationals are
hopeless. Both emit identical record streams, valuations capped at 4 (a hit
at or beyond the cap is a conjecture-level event and is flagged).

Runs snapshot to a checkpoint document and resume deterministically: a run
to N, checkpoint, resume to M yields record for record what a single run to
M yields.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .harmonic import ModularHarmonicSum
from .padic import is_prime, vp_int

TARGET_H = "H"
TARGET_H1 = "H1"
TARGETS = (TARGET_H, TARGET_H1)

BACKEND_EXACT = "exact"
BACKEND_MODULAR = "modular"
BACKENDS = (BACKEND_EXACT, BACKEND_MODULAR)

VALUATION_CAP = 4
CHECKPOINT_FORMAT_VERSION = 1


class CheckpointError(Exception):
    """Checkpoint document is corrupt or inconsistent with the run."""


@dataclass(frozen=True)
class SieveRecord:
    p: int
    N: int
    v: int
    v_at_least: bool
    target: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "v": self.v,
            "v_at_least": self.v_at_least,
            "target": self.target,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _state_digest(core: dict) -> str:
    blob = json.dumps(core, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class SieveCheckpoint:
    p: int
    target: str
    backend: str
    last_N: int
    state: dict

    def _core(self) -> dict:
        return {
            "p": self.p,
            "target": self.target,
            "backend": self.backend,
            "last_N": self.last_N,
            "state": self.state,
        }

    def to_json(self) -> dict:
        core = self._core()
        return {
            "format_version": CHECKPOINT_FORMAT_VERSION,
            **core,
            "digest": _state_digest(core),
        }

    def dump(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(doc: dict) -> "SieveCheckpoint":
        if not isinstance(doc, dict):
            raise CheckpointError("checkpoint is not a JSON object")
        if doc.get("format_version") != CHECKPOINT_FORMAT_VERSION:
            raise CheckpointError("unsupported checkpoint format_version")
        try:
            cp = SieveCheckpoint(
                p=doc["p"],
                target=doc["target"],
                backend=doc["backend"],
                last_N=doc["last_N"],
                state=doc["state"],
            )
            digest = doc["digest"]
        except KeyError as exc:
            raise CheckpointError(f"checkpoint is missing field {exc}") from exc
        if _state_digest(cp._core()) != digest:
            raise CheckpointError("checkpoint digest mismatch (corrupt file)")
        return cp

    @staticmethod
    def load(text: str) -> "SieveCheckpoint":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from exc
        return SieveCheckpoint.from_json(doc)


class SieveRun:
    """One resumable sieve pass; iterate it to stream SieveRecords.

    ``checkpoint()`` is valid at any point between yielded records and after
    exhaustion, and captures exactly the processed prefix.
    """

    def __init__(
        self,
        p: int,
        max_N: int,
        target: str = TARGET_H,
        backend: str = BACKEND_MODULAR,
        checkpoint: SieveCheckpoint | None = None,
    ):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if max_N < 1:
            raise ValueError("max_N must be at least 1")
        if target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if backend == BACKEND_MODULAR and p == 2:
            raise ValueError(
                "modular backend rejects p = 2: v_2(H_N) = -floor(log2 N) <= 0, "
                "there is nothing to find"
            )
        self.p = p
        self.max_N = max_N
        self.target = target
        self.backend = backend
        self._exact_h = Fraction(0)
        self._exact_n = 0
        self._modular: ModularHarmonicSum | None = None
        self._positive: set[int] = set()
        if backend == BACKEND_MODULAR:
            self._modular = ModularHarmonicSum(p, cap=VALUATION_CAP)

        if checkpoint is not None:
            self._restore(checkpoint)

    def _restore(self, cp: SieveCheckpoint) -> None:
        if (cp.p, cp.target, cp.backend) != (self.p, self.target, self.backend):
            raise CheckpointError(
                "checkpoint was produced by a different run "
                f"(p={cp.p}, target={cp.target}, backend={cp.backend})"
            )
        if cp.last_N > self.max_N:
            raise CheckpointError("checkpoint is already past the requested max_N")
        state = cp.state
        try:
            if self.backend == BACKEND_EXACT:
                self._exact_h = Fraction(int(state["num"]), int(state["den"]))
                self._exact_n = cp.last_N
            else:
                sums = [int(t) for t in state["unit_sums"]]
                self._modular = ModularHarmonicSum.restore(
                    self.p, VALUATION_CAP, cp.last_N, sums
                )
                self._positive = set(state["positive"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"checkpoint state is invalid: {exc}") from exc

    @property
    def last_N(self) -> int:
        if self.backend == BACKEND_EXACT:
            return self._exact_n
        return self._modular.n

    def checkpoint(self) -> SieveCheckpoint:
        if self.backend == BACKEND_EXACT:
            state = {
                "num": str(self._exact_h.numerator),
                "den": str(self._exact_h.denominator),
            }
        else:
            state = {
                "unit_sums": [str(t) for t in self._modular.sums],
                "positive": sorted(self._positive),
            }
        return SieveCheckpoint(
            p=self.p,
            target=self.target,
            backend=self.backend,
            last_N=self.last_N,
            state=state,
        )

    def __iter__(self) -> Iterator[SieveRecord]:
        if self.backend == BACKEND_EXACT:
            return self._iter_exact()
        return self._iter_modular()

    def _record(self, n: int, v: int, at_least: bool) -> SieveRecord:
        return SieveRecord(self.p, n, v, at_least, self.target)

    def _iter_exact(self) -> Iterator[SieveRecord]:
        p = self.p
        cap = VALUATION_CAP
        while self._exact_n < self.max_N:
            self._exact_n += 1
            n = self._exact_n
            self._exact_h += Fraction(1, n)
            x = self._exact_h
            if self.target == TARGET_H1:
                if n == 1:
                    continue
                x = x - 1
            if x.denominator % p == 0 or x.numerator % p:
                continue
            v = vp_int(x.numerator, p)
            if v >= cap:
                yield self._record(n, cap, True)
            else:
                yield self._record(n, v, False)

    def _iter_modular(self) -> Iterator[SieveRecord]:
        p = self.p
        state = self._modular
        positive = self._positive
        while state.n < self.max_N:
            state.advance()
            n = state.n
            parent = n // p
            # Positive valuation at n forces positive valuation at n//p, so
            # anything whose parent missed can be skipped outright.
            if parent and parent not in positive:
                continue
            v, at_least = state.valuation()
            if v >= 1:
                positive.add(n)
            if self.target == TARGET_H:
                if v >= 1:
                    yield self._record(n, v, at_least)
            else:
                if n == 1:
                    continue
                v1, at_least1 = state.valuation(shifted=True)
                if v1 >= 1:
                    yield self._record(n, v1, at_least1)


def sieve_positive_valuation(
    p: int,
    max_N: int,
    target: str = TARGET_H,
    backend: str = BACKEND_MODULAR,
    checkpoint: SieveCheckpoint | None = None,
) -> SieveRun:
    """Build a sieve run; iterate the result for its record stream."""
    return SieveRun(p, max_N, target=target, backend=backend, checkpoint=checkpoint)
