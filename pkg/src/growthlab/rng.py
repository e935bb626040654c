"""Seeded randomness and standard set generators.

Every random draw in the package comes from numpy's counter-based Philox
bit generator keyed by ``SeedSequence([seed, *labels])``. The same seed and
labels give the same stream on every platform.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from growthlab.errors import PreconditionError
from growthlab.setcore import FiniteSet, make_set


def make_rng(seed: int, *labels: int) -> np.random.Generator:
    if seed < 0 or seed >= 1 << 64:
        raise PreconditionError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *labels])))


def arithmetic_progression(n: int, start=1, step=1) -> FiniteSet:
    if n < 1 or step == 0:
        raise PreconditionError("an AP needs n >= 1 and a nonzero step")
    start, step = Fraction(start), Fraction(step)
    return make_set(start + i * step for i in range(n))


def geometric_progression(n: int, start=1, ratio=2) -> FiniteSet:
    start, ratio = Fraction(start), Fraction(ratio)
    if n < 1 or start == 0 or ratio in (0, 1, -1):
        raise PreconditionError("a GP needs n >= 1, start != 0 and |ratio| != 0, 1")
    return make_set(start * ratio**i for i in range(n))


def random_set(n: int, lo: int, hi: int, seed: int) -> FiniteSet:
    """``n`` distinct integers drawn uniformly from ``{lo, ..., hi}``."""
    if n < 1 or hi - lo + 1 < n:
        raise PreconditionError(f"cannot draw {n} distinct integers from {lo}..{hi}")
    rng = make_rng(seed)
    picks = rng.choice(hi - lo + 1, size=n, replace=False)
    return make_set(int(p) + lo for p in picks)
