"""Seeded random cluster-cyclic exchange matrices with rational entries."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Mat, Rational
from .signs import is_cluster_cyclic


@dataclass(frozen=True)
class SamplerConfig:
    d_range: tuple[int, int] = (1, 4)
    magnitude_range: tuple[int, int] = (2, 6)
    max_denominator: int = 4
    max_tries: int = 10_000


def _rational_in(rng: random.Random, lo: int, hi: int, max_den: int) -> Rational:
    q = rng.randint(1, max_den)
    p = rng.randint(lo * q, hi * q)
    return Rational(p, q)


def random_cluster_cyclic(rng: random.Random, cfg: SamplerConfig = SamplerConfig()
                          ) -> tuple[Mat, tuple[Rational, ...]]:
    """Draw (B, d) with B cluster-cyclic and diag(d) B skew-symmetric.

    D entries and the magnitudes of b12, b23, b31 are rationals with bounded
    denominator; the opposite entries follow from d, and candidates failing the
    cluster-cyclicity test are rejected.
    """
    for _ in range(cfg.max_tries):
        d = tuple(_rational_in(rng, *cfg.d_range, cfg.max_denominator) for _ in range(3))
        m12, m23, m31 = (_rational_in(rng, *cfg.magnitude_range, cfg.max_denominator)
                         for _ in range(3))
        o = rng.choice((1, -1))
        b12, b23, b31 = -o * m12, -o * m23, -o * m31
        b21 = -d[0] * b12 / d[1]
        b32 = -d[1] * b23 / d[2]
        b13 = -d[2] * b31 / d[0]
        B = Mat([[0, b12, b13], [b21, 0, b23], [b31, b32, 0]])
        if is_cluster_cyclic(B):
            return B, d
    raise RuntimeError("no cluster-cyclic sample found; widen the sampler ranges")


def sample_many(seed: int, count: int, cfg: SamplerConfig = SamplerConfig()):
    rng = random.Random(seed)
    return [random_cluster_cyclic(rng, cfg) for _ in range(count)]
