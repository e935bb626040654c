"""Exact scalars, finite sets, and the set-arithmetic kernels.

A :class:`FiniteSet` is in one of two modes:

* ``exact``: rationals, stored as sorted integer numerators over one common
  denominator (numpy ``int64`` when the numerators fit, Python ints otherwise);
* ``real``: ``mpmath.mpf`` values at an explicit binary precision.

Real-mode distinctness uses two thresholds. Values within the rounding noise
of the operands (a few thousand ulps of the magnitude scale) are the same
number computed two ways and are merged. Values further apart than that but
within the distinctness tolerance raise :class:`AmbiguousSeparation`. The
default tolerance is ``2**(-prec/2)`` times the magnitude scale of the set.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Union

import mpmath
import numpy as np
from mpmath import mpf

from growthlab import kernels
from growthlab.errors import (
    AmbiguousSeparation,
    BudgetExceeded,
    EmptyInput,
    ParseError,
    PreconditionError,
    ZeroDivisor,
)

Scalar = Union[Fraction, mpf]

EXACT = "exact"
REAL = "real"

_INT64_SAFE = 1 << 62
_NOISE_BITS = 12
# Dense kernels allocate one bit per lattice point of the result span.
_DENSE_MAX_SPAN = 1 << 28


def default_precision() -> int:
    return int(os.environ.get("GROWTHLAB_PRECISION", "128"))


@dataclass(frozen=True)
class GrowthBudget:
    """Caps on result size and kernel work.

    ``max_pair_evaluations`` is measured in kernel work units: one per
    explicit pair for the sparse kernels, one per shifted 64-bit word for the
    dense bitset kernel.
    """

    max_result_size: int = 10**7
    max_pair_evaluations: int = 2 * 10**9

    def __post_init__(self):
        if self.max_result_size <= 0 or self.max_pair_evaluations <= 0:
            raise PreconditionError("budget limits must be strictly positive")


DEFAULT_BUDGET = GrowthBudget()


def parse_scalar(text: str) -> Fraction:
    """Parse ``-3``, ``1.25``, ``1e-3`` or ``7/3`` into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational or decimal scalar: {text!r}") from exc


def to_scalar(value) -> Scalar:
    if isinstance(value, mpf):
        return value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ParseError(f"non-finite scalar {value!r}")
        return mpf(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def mpf_to_fraction(x: mpf) -> Fraction:
    """The exact binary rational stored in ``x``."""
    man, exp = x.man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


def to_real(x: Scalar, prec: int) -> mpf:
    with mpmath.workprec(prec):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return +mpf(x)


def _sorted_unique_ints(values) -> np.ndarray | tuple:
    vals = sorted(set(values))
    return _pack(vals)


def _pack(vals) -> np.ndarray | tuple:
    """Store a sorted list of ints as int64 when safe, else as a tuple."""
    if not vals:
        return np.empty(0, dtype=np.int64)
    if -_INT64_SAFE < vals[0] and vals[-1] < _INT64_SAFE:
        return np.asarray(vals, dtype=np.int64)
    return tuple(vals)


def _bound(nums) -> int:
    if len(nums) == 0:
        return 0
    return max(abs(int(nums[0])), abs(int(nums[-1])))


class FiniteSet:
    """A strictly increasing, duplicate-free sequence of scalars."""

    __slots__ = ("_nums", "_den", "_vals", "prec", "_scale", "_tol", "_cache")

    def __init__(self):
        raise TypeError("use make_set() or the FiniteSet._exact/_real constructors")

    @classmethod
    def _exact(cls, nums, den: int = 1) -> FiniteSet:
        self = object.__new__(cls)
        if isinstance(nums, np.ndarray) and den > 1 and len(nums):
            g = math.gcd(int(np.gcd.reduce(np.abs(nums))), den)
            if g > 1:
                nums = nums // g
                den //= g
        elif den > 1 and len(nums):
            g = reduce(math.gcd, nums, den)
            if g > 1:
                nums = _pack([n // g for n in nums])
                den //= g
        if isinstance(nums, tuple):
            nums = _pack(list(nums))
        self._nums = nums
        self._den = den
        self._vals = None
        self.prec = None
        self._scale = None
        self._tol = None
        self._cache = {}
        return self

    @classmethod
    def _real(cls, vals, prec: int, scale=None, tol=None) -> FiniteSet:
        self = object.__new__(cls)
        self._nums = None
        self._den = None
        self._vals = tuple(vals)
        self.prec = prec
        top = max((abs(v) for v in self._vals), default=mpf(1))
        self._scale = max(mpf(1), top, scale if scale is not None else mpf(1))
        self._tol = tol
        self._cache = {}
        return self

    # -- basic protocol -------------------------------------------------

    @property
    def mode(self) -> str:
        return EXACT if self._vals is None else REAL

    @property
    def is_exact(self) -> bool:
        return self._vals is None

    def __len__(self):
        return len(self._nums) if self._vals is None else len(self._vals)

    @property
    def elements(self) -> tuple:
        if self._vals is not None:
            return self._vals
        if "elements" not in self._cache:
            den = self._den
            self._cache["elements"] = tuple(Fraction(int(n), den) for n in self._nums)
        return self._cache["elements"]

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        if self._vals is not None:
            return self._vals[i]
        if isinstance(i, slice):
            return self.elements[i]
        return Fraction(int(self._nums[i]), self._den)

    def min(self) -> Scalar:
        return self[0]

    def max(self) -> Scalar:
        return self[len(self) - 1]

    @property
    def tolerance(self) -> Scalar:
        if self.is_exact:
            return Fraction(0)
        if self._tol is not None:
            return self._tol
        with mpmath.workprec(self.prec):
            return self._scale * mpf(2) ** (-(self.prec // 2))

    @property
    def noise(self) -> mpf:
        """Rounding-noise radius within which two computed reals are merged."""
        with mpmath.workprec(self.prec):
            return self._scale * mpf(2) ** (-self.prec + _NOISE_BITS)

    @property
    def separation(self) -> Scalar | None:
        if len(self) < 2:
            return None
        if self.is_exact:
            nums = self._nums
            gap = int(np.min(np.diff(nums))) if isinstance(nums, np.ndarray) else min(
                b - a for a, b in zip(nums, nums[1:])
            )
            return Fraction(gap, self._den)
        with mpmath.workprec(self.prec):
            return min(b - a for a, b in zip(self._vals, self._vals[1:]))

    def ints(self):
        """``(numerators, denominator)`` of an exact set."""
        if not self.is_exact:
            raise PreconditionError("integer view requires an exact set")
        return self._nums, self._den

    def __contains__(self, x) -> bool:
        x = to_scalar(x)
        if self.is_exact:
            if isinstance(x, mpf):
                x = mpf_to_fraction(x)
            scaled = x * self._den
            if scaled.denominator != 1:
                return False
            n = scaled.numerator
            nums = self._nums
            if isinstance(nums, np.ndarray):
                if not -_INT64_SAFE < n < _INT64_SAFE:
                    return False
                i = int(np.searchsorted(nums, n))
                return i < len(nums) and int(nums[i]) == n
            lo, hi = 0, len(nums)
            while lo < hi:
                mid = (lo + hi) // 2
                if nums[mid] < n:
                    lo = mid + 1
                else:
                    hi = mid
            return lo < len(nums) and nums[lo] == n
        return self.locate(x) is not None

    def locate(self, x) -> int | None:
        """Index of the element within rounding noise of ``x`` (real mode)."""
        vals = self._vals
        xr = to_real(to_scalar(x), self.prec)
        noise = self.noise
        lo, hi = 0, len(vals)
        while lo < hi:
            mid = (lo + hi) // 2
            if vals[mid] < xr:
                lo = mid + 1
            else:
                hi = mid
        with mpmath.workprec(self.prec):
            for j in (lo - 1, lo):
                if 0 <= j < len(vals) and abs(vals[j] - xr) <= noise:
                    return j
        return None

    def __eq__(self, other):
        if not isinstance(other, FiniteSet) or self.mode != other.mode:
            return NotImplemented if not isinstance(other, FiniteSet) else False
        if self.is_exact:
            if self._den != other._den or len(self) != len(other):
                return False
            return all(int(a) == int(b) for a, b in zip(self._nums, other._nums)) if not (
                isinstance(self._nums, np.ndarray) and isinstance(other._nums, np.ndarray)
            ) else bool(np.array_equal(self._nums, other._nums))
        return self.prec == other.prec and self._vals == other._vals

    def __hash__(self):
        if self.is_exact:
            return hash((self._den, tuple(int(n) for n in self._nums)))
        return hash((self.prec, self._vals))

    def __repr__(self):
        shown = ", ".join(format_scalar(e) for e in self.elements[:8])
        more = ", ..." if len(self) > 8 else ""
        tag = "" if self.is_exact else f", prec={self.prec}"
        return f"FiniteSet({{{shown}{more}}}{tag})"

    # -- transforms -----------------------------------------------------

    def negate(self) -> FiniteSet:
        if self.is_exact:
            nums = self._nums
            neg = -nums[::-1] if isinstance(nums, np.ndarray) else _pack([-n for n in reversed(nums)])
            return FiniteSet._exact(neg, self._den)
        with mpmath.workprec(self.prec):
            return FiniteSet._real([-v for v in reversed(self._vals)], self.prec, self._scale, self._tol)

    def dilate(self, c) -> FiniteSet:
        c = to_scalar(c)
        if c == 0:
            raise PreconditionError("dilation by zero collapses the set")
        if self.is_exact and isinstance(c, Fraction):
            return make_set([e * c for e in self.elements])
        prec = self.prec or default_precision()
        with mpmath.workprec(prec):
            cr = to_real(c, prec)
            vals = [to_real(e, prec) * cr for e in self.elements]
        return merge_real(vals, prec, (self._scale or mpf(1)) * max(mpf(1), abs(cr)))

    def translate(self, c) -> FiniteSet:
        c = to_scalar(c)
        if self.is_exact and isinstance(c, Fraction):
            scaled = c * self._den
            if scaled.denominator == 1 and isinstance(self._nums, np.ndarray) and abs(scaled.numerator) < _INT64_SAFE // 2 and _bound(self._nums) < _INT64_SAFE // 2:
                return FiniteSet._exact(self._nums + scaled.numerator, self._den)
            return make_set([e + c for e in self.elements])
        prec = self.prec or default_precision()
        with mpmath.workprec(prec):
            cr = to_real(c, prec)
            vals = [to_real(e, prec) + cr for e in self.elements]
        return FiniteSet._real(vals, prec, (self._scale or mpf(1)) + abs(cr), self._tol)

    def to_real(self, prec: int | None = None) -> FiniteSet:
        prec = prec or self.prec or default_precision()
        if not self.is_exact:
            if prec == self.prec:
                return self
            with mpmath.workprec(prec):
                return FiniteSet._real([+v for v in self._vals], prec, self._scale, self._tol)
        return FiniteSet._real([to_real(e, prec) for e in self.elements], prec)

    def subset(self, keep: Iterable[Scalar]) -> FiniteSet:
        """The elements of ``keep`` (all of which must belong to this set)."""
        keep = list(keep)
        if self.is_exact:
            return make_set(keep) if keep else empty_like(self)
        return FiniteSet._real(sorted(keep), self.prec, self._scale, self._tol)


def empty_like(X: FiniteSet) -> FiniteSet:
    if X.is_exact:
        return FiniteSet._exact(np.empty(0, dtype=np.int64), 1)
    return FiniteSet._real((), X.prec, X._scale, X._tol)


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, mpf):
        return mpmath.nstr(x, 20)
    return str(x)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def make_set(values: Iterable, tolerance=None, prec: int | None = None) -> FiniteSet:
    """Sort and deduplicate ``values`` into a :class:`FiniteSet`.

    Rationals (ints, Fractions, decimal strings) give an exact set; any mpf
    or float makes the whole set real at ``prec`` bits. In real mode, two
    values closer than the tolerance but not equal raise
    :class:`AmbiguousSeparation` instead of being merged.
    """
    scalars = [to_scalar(v) for v in values]
    if not scalars:
        raise EmptyInput("a finite set needs at least one element")
    real = any(isinstance(s, mpf) for s in scalars)
    if tolerance is not None:
        tolerance = to_scalar(tolerance)
        if tolerance < 0:
            raise PreconditionError("tolerance must be non-negative")
    if not real:
        if tolerance not in (None, 0):
            raise PreconditionError("exact sets take tolerance 0")
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (s.denominator for s in scalars), 1)
        return FiniteSet._exact(_sorted_unique_ints(int(s * den) for s in scalars), den)
    prec = prec or default_precision()
    vals = sorted(to_real(s, prec) for s in scalars)
    out = [vals[0]]
    for v in vals[1:]:
        if v != out[-1]:
            out.append(v)
    tol = to_real(tolerance, prec) if tolerance is not None else None
    result = FiniteSet._real(out, prec, tol=tol)
    _check_separation(result._vals, result.tolerance)
    return result


def _check_separation(vals, tau):
    for a, b in zip(vals, vals[1:]):
        if b - a <= tau:
            raise AmbiguousSeparation(
                f"elements {mpmath.nstr(a, 40)} and {mpmath.nstr(b, 40)} are distinct "
                f"but closer than the tolerance {mpmath.nstr(tau, 5)}"
            )


def merge_real(values, prec: int, scale, tol=None) -> FiniteSet:
    """Build a real set from computed values, merging rounding duplicates."""
    with mpmath.workprec(prec):
        scale = max(mpf(1), scale)
        noise = scale * mpf(2) ** (-prec + _NOISE_BITS)
        tau = tol if tol is not None else scale * mpf(2) ** (-(prec // 2))
        out = []
        for v in sorted(values):
            if out:
                gap = v - out[-1]
                if gap <= noise:
                    continue
                if gap <= tau:
                    raise AmbiguousSeparation(
                        f"computed values {mpmath.nstr(out[-1], 40)} and {mpmath.nstr(v, 40)} "
                        f"differ by {mpmath.nstr(gap, 5)}, above rounding noise but within "
                        f"tolerance {mpmath.nstr(tau, 5)}"
                    )
            out.append(v)
    return FiniteSet._real(out, prec, scale, tol)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

ADD = kernels.ADD
MUL = kernels.MUL


def _align(X: FiniteSet, Y: FiniteSet):
    if X.is_exact and Y.is_exact:
        return X, Y
    prec = min(p for p in (X.prec, Y.prec) if p)
    return X.to_real(prec), Y.to_real(prec)


def _combine(X: FiniteSet, Y: FiniteSet, op: int, budget: GrowthBudget) -> FiniteSet:
    if len(X) == 0 or len(Y) == 0:
        return empty_like(X if not X.is_exact else Y)
    X, Y = _align(X, Y)
    if X.is_exact:
        return _combine_exact(X, Y, op, budget)
    return _combine_real(X, Y, op, budget)


def _charge(work: int, budget: GrowthBudget):
    if work > budget.max_pair_evaluations:
        raise BudgetExceeded(
            f"kernel needs ~{work} evaluations, budget allows {budget.max_pair_evaluations}"
        )


def _too_big(budget: GrowthBudget):
    return BudgetExceeded(f"result would exceed {budget.max_result_size} elements")


def _combine_exact(X: FiniteSet, Y: FiniteSet, op: int, budget: GrowthBudget) -> FiniteSet:
    xn, xd = X.ints()
    yn, yd = Y.ints()
    if op == ADD:
        den = xd * yd // math.gcd(xd, yd)
        fx, fy = den // xd, den // yd
    else:
        den = xd * yd
        fx = fy = 1
    bx, by = _bound(xn) * fx, _bound(yn) * fy
    limit = budget.max_result_size
    fits = bx + by < _INT64_SAFE if op == ADD else bx * by < _INT64_SAFE
    if fits:
        a = np.asarray(xn, dtype=np.int64) * fx
        b = np.asarray(yn, dtype=np.int64) * fy
        if op == ADD:
            span_a = int(a[-1] - a[0])
            span_b = int(b[-1] - b[0])
            span = span_a + span_b + 1
            dense_work = min(len(a), len(b)) * ((max(span_a, span_b) >> 6) + 1)
            if span <= _DENSE_MAX_SPAN and dense_work <= len(a) * len(b):
                _charge(dense_work, budget)
                res = kernels.dense_sumset(a, b, limit)
                if res is None:
                    raise _too_big(budget)
                return FiniteSet._exact(res, den)
        _charge(len(a) * len(b), budget)
        res = kernels.sparse_combine(a, b, op, limit)
        if res is None:
            raise _too_big(budget)
        return FiniteSet._exact(res, den)
    _charge(len(xn) * len(yn), budget)
    xs = [int(n) * fx for n in xn]
    ys = [int(n) * fy for n in yn]
    out = set()
    for u in xs:
        if op == ADD:
            out.update(u + v for v in ys)
        else:
            out.update(u * v for v in ys)
        if len(out) > limit:
            raise _too_big(budget)
    return FiniteSet._exact(_pack(sorted(out)), den)


def _combine_real(X: FiniteSet, Y: FiniteSet, op: int, budget: GrowthBudget) -> FiniteSet:
    _charge(len(X) * len(Y), budget)
    prec = X.prec
    with mpmath.workprec(prec):
        if op == ADD:
            vals = [u + v for u in X._vals for v in Y._vals]
            scale = X._scale + Y._scale
        else:
            vals = [u * v for u in X._vals for v in Y._vals]
            scale = X._scale * Y._scale
    tol = None
    if X._tol is not None and Y._tol is not None:
        tol = max(X._tol, Y._tol)
    result = merge_real(vals, prec, scale, tol)
    if len(result) > budget.max_result_size:
        raise _too_big(budget)
    return result


def sumset(X: FiniteSet, Y: FiniteSet, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``{x + y : x in X, y in Y}``."""
    return _combine(X, Y, ADD, budget)


def iterated_sumset(X: FiniteSet, k: int, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``kX``, folding one copy of ``X`` at a time with deduplication."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    result = X
    for _ in range(k - 1):
        result = sumset(result, X, budget)
    return result


def signed_combination(X: FiniteSet, k: int, l: int, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``kX - lX``."""
    if k < 0 or l < 0 or k + l < 1:
        raise PreconditionError("need k, l >= 0 with k + l >= 1")
    if l == 0:
        return iterated_sumset(X, k, budget)
    negative = iterated_sumset(X.negate(), l, budget)
    if k == 0:
        return negative
    return sumset(iterated_sumset(X, k, budget), negative, budget)


def productset(X: FiniteSet, Y: FiniteSet, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``{x * y : x in X, y in Y}``."""
    return _combine(X, Y, MUL, budget)


def iterated_product(X: FiniteSet, k: int, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``X^(k)``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    result = X
    for _ in range(k - 1):
        result = productset(result, X, budget)
    return result


def reciprocal(X: FiniteSet) -> FiniteSet:
    if 0 in X:
        raise ZeroDivisor("0 has no reciprocal")
    if X.is_exact:
        return make_set([1 / e for e in X.elements])
    with mpmath.workprec(X.prec):
        vals = [1 / v for v in X._vals]
        scale = max(abs(v) for v in vals)
    return merge_real(vals, X.prec, scale, X._tol)


def ratio_set(X: FiniteSet, k: int, l: int, budget: GrowthBudget = DEFAULT_BUDGET) -> FiniteSet:
    """``X^(k) / X^(l)``."""
    if not X.is_exact:
        top, bottom = _ratio_operands(X, k, l, budget)
        return productset(top, reciprocal(bottom), budget)
    return make_set(Fraction(int(p), int(q)) for p, q in _ratio_pairs(X, k, l, budget))


def ratio_set_size(X: FiniteSet, k: int, l: int, budget: GrowthBudget = DEFAULT_BUDGET) -> int:
    """``|X^(k) / X^(l)|`` without materializing the set.

    Reduced ratios of an exact set rarely share a small common denominator,
    so counting the distinct reduced pairs is much cheaper than building the
    set.
    """
    if not X.is_exact:
        return len(ratio_set(X, k, l, budget))
    return len(_ratio_pairs(X, k, l, budget))


def _ratio_operands(X, k, l, budget):
    if 0 in X:
        raise ZeroDivisor("ratio sets need 0 not in X")
    if k < 1 or l < 1:
        raise PreconditionError("k and l must be at least 1")
    return iterated_product(X, k, budget), iterated_product(X, l, budget)


def _ratio_pairs(X, k, l, budget):
    """Distinct reduced ``(p, q)``, ``q > 0``, as an ``(m, 2)`` array or a set of tuples."""
    top, bottom = _ratio_operands(X, k, l, budget)
    _charge(len(top) * len(bottom), budget)
    tn, td = top.ints()
    bn, bd = bottom.ints()
    # (t/td) / (b/bd) = (t*bd) / (b*td), reduced
    if _fits_int64(tn, bd) and _fits_int64(bn, td):
        return _ratio_int64(np.asarray(tn, dtype=np.int64) * bd, np.asarray(bn, dtype=np.int64) * td, budget)
    pairs = set()
    limit = budget.max_result_size
    bs = [int(b) * td for b in bn]
    for t in tn:
        t = int(t) * bd
        for b in bs:
            g = math.gcd(t, b)
            p, q = t // g, b // g
            if q < 0:
                p, q = -p, -q
            pairs.add((p, q))
        if len(pairs) > limit:
            raise _too_big(budget)
    return pairs


def _fits_int64(nums, factor: int) -> bool:
    return isinstance(nums, np.ndarray) and _bound(nums) * abs(factor) < _INT64_SAFE


def _unique_pairs(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # lexsort on two int64 columns is far cheaper than unique(axis=0)
    order = np.lexsort((q, p))
    p, q = p[order], q[order]
    keep = np.ones(len(p), dtype=bool)
    keep[1:] = (p[1:] != p[:-1]) | (q[1:] != q[:-1])
    return np.stack([p[keep], q[keep]], axis=1)


def _unique_rows(rows: np.ndarray) -> np.ndarray:
    return _unique_pairs(rows[:, 0], rows[:, 1])


def _ratio_int64(top: np.ndarray, bottom: np.ndarray, budget: GrowthBudget) -> np.ndarray:
    rows = max(1, (1 << 21) // max(1, len(bottom)))
    parts = []
    pending = 0
    acc = np.empty((0, 2), dtype=np.int64)
    for i in range(0, len(top), rows):
        t = top[i:i + rows, None]
        g = np.gcd(t, bottom[None, :])
        p = (t // g).ravel()
        q = (bottom[None, :] // g).ravel()
        neg = q < 0
        p[neg], q[neg] = -p[neg], -q[neg]
        block = _unique_pairs(p, q)
        parts.append(block)
        pending += len(block)
        if pending > 4 * len(acc) + (1 << 22):
            acc = _unique_rows(np.concatenate([acc] + parts))
            parts, pending = [], 0
            if len(acc) > budget.max_result_size:
                raise _too_big(budget)
    if parts:
        acc = _unique_rows(np.concatenate([acc] + parts))
    if len(acc) > budget.max_result_size:
        raise _too_big(budget)
    return acc


def rep_count(A: FiniteSet, t) -> int:
    """Number of ordered pairs ``(a, b)`` in ``A x A`` with ``a - b = t``."""
    t = to_scalar(t)
    if A.is_exact and isinstance(t, Fraction):
        scaled = t * A._den
        if scaled.denominator != 1:
            return 0
        n = scaled.numerator
        nums = A._nums
        if isinstance(nums, np.ndarray) and abs(n) < _INT64_SAFE and _bound(nums) + abs(n) < _INT64_SAFE:
            return kernels.rep_count(nums, n)
        members = set(int(v) for v in nums)
        return sum(1 for v in members if v + n in members)
    R = A.to_real()
    tr = to_real(t, R.prec)
    with mpmath.workprec(R.prec):
        return sum(1 for b in R._vals if R.locate(b + tr) is not None)


def shift_intersection(A: FiniteSet, t) -> FiniteSet:
    """``A(t) = A ∩ (A - t)``: the elements ``a`` with ``a + t`` also in ``A``."""
    t = to_scalar(t)
    if A.is_exact and isinstance(t, Fraction):
        keep = [a for a in A.elements if a + t in A]
        return make_set(keep) if keep else empty_like(A)
    R = A.to_real()
    tr = to_real(t, R.prec)
    with mpmath.workprec(R.prec):
        keep = [a for a in R._vals if R.locate(a + tr) is not None]
    return FiniteSet._real(keep, R.prec, R._scale, R._tol)


# ---------------------------------------------------------------------------
# size pre-estimates
# ---------------------------------------------------------------------------


def estimate_signed_size(X: FiniteSet, k: int, l: int = 0) -> int:
    """Upper bound on ``|kX - lX|`` without computing it.

    The minimum of the multiset count and, for exact sets, the number of
    lattice points the combination can occupy.
    """
    n = len(X)
    bound = math.comb(n + k - 1, k) * (math.comb(n + l - 1, l) if l else 1)
    if X.is_exact and n >= 2:
        nums, _ = X.ints()
        ints = [int(v) for v in nums]
        g = reduce(math.gcd, (v - ints[0] for v in ints[1:]))
        bound = min(bound, (k + l) * (ints[-1] - ints[0]) // g + 1)
    return bound


def estimate_product_size(X: FiniteSet, k: int, l: int = 0) -> int:
    """Upper bound on ``|X^(k) / X^(l)|`` (multiset count)."""
    n = len(X)
    return math.comb(n + k - 1, k) * (math.comb(n + l - 1, l) if l else 1)


def fits_budget(size_bound: int, budget: GrowthBudget) -> bool:
    return size_bound <= budget.max_result_size
