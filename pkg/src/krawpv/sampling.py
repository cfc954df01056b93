"""Seeded random rational sampling for exact identity testing.

Identities between rational expressions are certified Schwartz-Zippel style:
evaluate both sides at random rational points and require exact equality.
Numerators and denominators are drawn from [-99, 99]; a draw is rejected and
redrawn whenever any guarded denominator vanishes, and rejections are counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

DEFAULT_SAMPLES = 50
COORD_BOUND = 99
MAX_RESAMPLES_PER_POINT = 1000


class SamplingExhausted(RuntimeError):
    """Could not find a nonsingular sample within the resample budget."""


def rand_fraction(rng: random.Random, bound: int = COORD_BOUND) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_nonzero_fraction(rng: random.Random, bound: int = COORD_BOUND) -> Fraction:
    while True:
        f = rand_fraction(rng, bound)
        if f != 0:
            return f


@dataclass
class Sampler:
    """Draws bindings name -> Fraction, rejecting singular configurations."""

    rng: random.Random
    resamples: int = 0

    def draw(
        self,
        names: Sequence[str],
        reject: Optional[Callable[[Dict[str, Fraction]], bool]] = None,
        fixed: Optional[Dict[str, Fraction]] = None,
    ) -> Dict[str, Fraction]:
        """One binding for `names`; `reject` returns True to force a redraw."""
        for _ in range(MAX_RESAMPLES_PER_POINT):
            env = {nm: rand_fraction(self.rng) for nm in names}
            if fixed:
                env.update(fixed)
            if reject is not None and reject(env):
                self.resamples += 1
                continue
            return env
        raise SamplingExhausted(f"no admissible sample for {list(names)}")


@dataclass
class CaseResult:
    """One verification case inside a suite."""

    id: str
    status: str  # PASS | FAIL | SKIP
    residual: str = "0"
    samples: int = 0
    resamples: int = 0
    failures: List[str] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "PASS"
