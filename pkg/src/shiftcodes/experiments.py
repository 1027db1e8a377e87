"""Seeded random experiment on the step bound for images of codes with a retract."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .codes import SlidingBlockCode
from .corpus import random_one_block, random_one_step_sft
from .resolving import KBoundReport, minimal_retract, verify_step_bound


@dataclass
class KBoundInstance:
    code: SlidingBlockCode
    report: KBoundReport

    def row(self) -> dict:
        out = self.report.to_json()
        out["symbols"] = len(self.code.domain.alphabet)
        out["imageSymbols"] = len(self.code.codomain)
        return out


@dataclass
class KBoundExperiment:
    seed: int
    count: int
    max_symbols: int
    instances: list = field(default_factory=list)
    skipped: int = 0

    @property
    def violations(self) -> list:
        return [i for i in self.instances if not i.report.ok]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "maxSymbols": self.max_symbols,
            "skippedWithoutRetract": self.skipped,
            "violations": len(self.violations),
            "rows": [i.row() for i in self.instances],
        }


def draw_code_with_retract(rng: random.Random, max_symbols: int, max_tries: int = 10_000):
    """Draw random 1-block codes on 1-step SFTs until one has a retract.

    Returns ``(code, retract, skipped)``.
    """
    skipped = 0
    for _ in range(max_tries):
        k = rng.randint(1, max_symbols)
        X = random_one_step_sft(rng, k)
        phi = random_one_block(rng, X, rng.randint(1, k))
        R = minimal_retract(phi)
        if R is not None:
            return phi, R, skipped
        skipped += 1
    raise RuntimeError("no code with a retract found")  # pragma: no cover


def run_kbound_experiment(count: int, max_symbols: int = 5, seed: int = 7) -> KBoundExperiment:
    """Check ``step_of(image) <= K`` on ``count`` random codes with a retract.

    Codes without a retract are redrawn and counted in ``skipped``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if max_symbols < 1:
        raise ValueError("max_symbols must be >= 1")
    rng = random.Random(seed)
    exp = KBoundExperiment(seed, count, max_symbols)
    for _ in range(count):
        phi, _, skipped = draw_code_with_retract(rng, max_symbols)
        exp.skipped += skipped
        exp.instances.append(KBoundInstance(phi, verify_step_bound(phi)))
    return exp
