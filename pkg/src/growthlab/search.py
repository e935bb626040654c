"""Simulated annealing for sets with small sum-product growth.

Sets live on the lattice ``granularity * Z`` inside ``[lo, hi]``. A move
replaces one element, translates the set or dilates it about its minimum;
moves are accepted by the Metropolis rule. All randomness comes from one
Philox stream seeded by ``seed`` (see :mod:`growthlab.rng`), so a config
fully determines the trace.
"""
from __future__ import annotations

import configparser
import csv
import io as _io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
from mpmath import mpf

from growthlab.errors import BudgetExceeded, ParseError, PreconditionError
from growthlab.rng import make_rng
from growthlab.setcore import (
    DEFAULT_BUDGET,
    FiniteSet,
    GrowthBudget,
    estimate_product_size,
    estimate_signed_size,
    fits_budget,
    iterated_product,
    iterated_sumset,
    make_set,
    ratio_set_size,
    signed_combination,
)

OBJECTIVES = ("eightfold", "sumproduct16", "claim_product")
_OBJ_PREC = 64
_LABEL = 0x5EA2C4


@dataclass(frozen=True)
class SearchConfig:
    n: int = 8
    rounds: int = 20
    moves_per_round: int = 20
    seed: int = 0
    objective: str = "eightfold"
    initial_temperature: Fraction = Fraction(1, 10)
    decay: Fraction = Fraction(9, 10)
    lo: Fraction = Fraction(1)
    hi: Fraction = Fraction(64)
    granularity: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 4:
            raise PreconditionError("n must be at least 4")
        if not 0 < self.decay < 1:
            raise PreconditionError("decay must lie in (0, 1)")
        if self.initial_temperature < 0:
            raise PreconditionError("temperature must be non-negative")
        if self.objective not in OBJECTIVES:
            raise PreconditionError(f"objective must be one of {', '.join(OBJECTIVES)}")
        if self.granularity <= 0 or self.lo <= 0 or self.hi <= self.lo:
            raise PreconditionError("need 0 < lo < hi and a positive granularity")
        if self.rounds < 0 or self.moves_per_round < 0:
            raise PreconditionError("rounds and moves must be non-negative")
        if self.lattice_size < self.n:
            raise PreconditionError("the universe holds fewer than n lattice points")

    @property
    def lattice_lo(self) -> int:
        return math.ceil(self.lo / self.granularity)

    @property
    def lattice_hi(self) -> int:
        return math.floor(self.hi / self.granularity)

    @property
    def lattice_size(self) -> int:
        return self.lattice_hi - self.lattice_lo + 1


_KEYS = {
    ("search", "n"): ("n", int),
    ("search", "rounds"): ("rounds", int),
    ("search", "moves_per_round"): ("moves_per_round", int),
    ("search", "seed"): ("seed", int),
    ("search", "objective"): ("objective", str),
    ("temperature", "initial"): ("initial_temperature", Fraction),
    ("temperature", "decay"): ("decay", Fraction),
    ("universe", "lo"): ("lo", Fraction),
    ("universe", "hi"): ("hi", Fraction),
    ("universe", "granularity"): ("granularity", Fraction),
}


def parse_config(text: str) -> SearchConfig:
    """Read the sectioned ``key = value`` format (``[search]``, ``[temperature]``, ``[universe]``)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(f"bad config: {exc}") from exc
    values = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            try:
                name, kind = _KEYS[section, key]
            except KeyError:
                raise ParseError(f"unknown config key [{section}] {key}") from None
            raw = raw.strip().strip("\"'")
            try:
                values[name] = kind(raw)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad value for [{section}] {key}: {raw!r}") from exc
    return SearchConfig(**values)


def read_config(path) -> SearchConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# objective
# ---------------------------------------------------------------------------


def _log2(x) -> mpf:
    return mpmath.log(x, 2)


def objective(A: FiniteSet, kind: str = "eightfold", budget: GrowthBudget = DEFAULT_BUDGET) -> mpf:
    """Growth exponent of ``A``: ``log|X| / log|A|`` for the configured ``X``.

    ``eightfold`` / ``sumproduct16``: ``X`` is the larger of ``kA`` and
    ``A^(k)`` for ``k = 8`` / ``16``. ``claim_product``: the exponent of
    ``|8A-7A|^16 |A^(5)/A^(4)|^11``.
    """
    n = len(A)
    if n < 2:
        raise PreconditionError("the objective needs at least two elements")
    if A.min() <= 0:
        raise PreconditionError("the objective needs a positive set")
    with mpmath.workprec(_OBJ_PREC):
        if kind in ("eightfold", "sumproduct16"):
            k = 8 if kind == "eightfold" else 16
            if not fits_budget(estimate_signed_size(A, k), budget) or not fits_budget(
                estimate_product_size(A, k), budget
            ):
                raise BudgetExceeded(f"{k}-fold sets of this set exceed the budget")
            top = max(len(iterated_sumset(A, k, budget)), len(iterated_product(A, k, budget)))
            return _log2(top) / _log2(n)
        if kind == "claim_product":
            if not fits_budget(estimate_signed_size(A, 8, 7), budget) or not fits_budget(
                estimate_product_size(A, 5, 4), budget
            ):
                raise BudgetExceeded("8A-7A or A^(5)/A^(4) exceeds the budget")
            s = len(signed_combination(A, 8, 7, budget))
            p = ratio_set_size(A, 5, 4, budget)
            return (16 * _log2(s) + 11 * _log2(p)) / _log2(n)
    raise PreconditionError(f"unknown objective {kind!r}")


# ---------------------------------------------------------------------------
# annealing
# ---------------------------------------------------------------------------


@dataclass
class SearchTrace:
    rounds: list = field(default_factory=list)  # (round, best_objective, accepted, temperature)
    snapshots: list = field(default_factory=list)
    initial_objective: mpf | None = None

    def to_csv(self) -> str:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "best_objective", "accepted", "temperature"])
        for r, best, acc, temp in self.rounds:
            w.writerow([r, _fmt(best), acc, _fmt(temp)])
        return buf.getvalue()


def _fmt(x) -> str:
    return mpmath.nstr(x, 15, min_fixed=-30, max_fixed=30)


def _to_set(points, g: Fraction) -> FiniteSet:
    return make_set(Fraction(p) * g for p in points)


def _propose(rng, points: list, cfg: SearchConfig):
    lo, hi = cfg.lattice_lo, cfg.lattice_hi
    move = rng.random()
    pts = sorted(points)
    if move < 0.8:
        i = int(rng.integers(len(pts)))
        new = int(rng.integers(lo, hi + 1))
        if new in pts:
            return None
        pts[i] = new
    elif move < 0.9:
        shift = int(rng.integers(-3, 4)) or 1
        pts = [p + shift for p in pts]
    else:
        base = pts[0]
        if rng.random() < 0.5:
            pts = [base + 2 * (p - base) for p in pts]
        else:
            if any((p - base) % 2 for p in pts):
                return None
            pts = [base + (p - base) // 2 for p in pts]
    if pts[0] < lo or max(pts) > hi or len(set(pts)) != len(pts):
        return None
    return sorted(pts)


def local_search(config: SearchConfig, budget: GrowthBudget = DEFAULT_BUDGET):
    """Anneal from the lattice AP at the bottom of the universe; returns ``(best set, trace)``."""
    g = config.granularity
    rng = make_rng(config.seed, _LABEL)
    current = list(range(config.lattice_lo, config.lattice_lo + config.n))
    cur_obj = objective(_to_set(current, g), config.objective, budget)
    best, best_obj = list(current), cur_obj
    trace = SearchTrace(initial_objective=cur_obj)
    with mpmath.workprec(_OBJ_PREC):
        temp = mpf(config.initial_temperature.numerator) / config.initial_temperature.denominator
        decay = mpf(config.decay.numerator) / config.decay.denominator
        for r in range(config.rounds):
            accepted = 0
            for _ in range(config.moves_per_round):
                cand = _propose(rng, current, config)
                u = rng.random()
                if cand is None:
                    continue
                try:
                    obj = objective(_to_set(cand, g), config.objective, budget)
                except BudgetExceeded:
                    continue
                delta = obj - cur_obj
                if delta <= 0 or (temp > 0 and u < mpmath.exp(-delta / temp)):
                    current, cur_obj = cand, obj
                    accepted += 1
                    if obj < best_obj:
                        best, best_obj = list(cand), obj
            trace.rounds.append((r, best_obj, accepted, temp))
            trace.snapshots.append(tuple(best))
            temp *= decay
    return _to_set(best, g), trace


def portfolio(config: SearchConfig, seeds, jobs: int = 1, budget: GrowthBudget = DEFAULT_BUDGET):
    """Independent restarts; the winner is the smallest ``(objective, seed)``."""
    configs = [replace(config, seed=s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(local_search, configs, [budget] * len(configs)))
    else:
        runs = [local_search(c, budget) for c in configs]
    scored = []
    for c, (best, trace) in zip(configs, runs):
        value = trace.rounds[-1][1] if trace.rounds else trace.initial_objective
        scored.append((value, c.seed, best, trace))
    scored.sort(key=lambda item: (item[0], item[1]))
    return scored
