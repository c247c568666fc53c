"""Deterministic seed derivation for reproducible Monte Carlo.

Every random draw in the package flows through a SeedPath, a
(master_seed, label, trial) triple hashed into an independent PCG64
stream.  Identical triples give bit-identical streams regardless of
call order, worker count, or process boundaries, which is what makes
the experiment harness reproduce byte-identical output files.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError

_U64 = 1 << 64


@dataclass(frozen=True)
class SeedPath:
    """Address of one random stream: master seed, text label, trial index."""

    master_seed: int
    label: str
    trial: int = 0

    def __post_init__(self):
        if not isinstance(self.master_seed, int):
            raise ValidationError("master_seed must be an integer")
        if not isinstance(self.trial, int) or self.trial < 0:
            raise ValidationError("trial index must be a nonnegative integer")
        if not self.label:
            raise ValidationError("label must be a nonempty string")

    def digest_words(self) -> tuple[int, int, int, int]:
        """Four 64-bit words from a SHA-256 of the canonical triple encoding."""
        text = "%d|%s|%d" % (self.master_seed % _U64, self.label, self.trial)
        digest = hashlib.sha256(text.encode("utf-8")).digest()
        return tuple(int.from_bytes(digest[8 * i:8 * i + 8], "little") for i in range(4))

    def rng(self) -> np.random.Generator:
        """Fresh generator; a pure function of the triple."""
        seq = np.random.SeedSequence(list(self.digest_words()))
        return np.random.Generator(np.random.PCG64(seq))

    def with_trial(self, trial: int) -> "SeedPath":
        return replace(self, trial=trial)

    def child(self, sublabel: str) -> "SeedPath":
        return replace(self, label=self.label + "/" + sublabel)
