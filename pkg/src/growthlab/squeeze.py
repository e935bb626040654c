"""The squeezing pipeline.

Stages: consecutive-gap decomposition, dyadic regularization of bucket
sizes, the A+A-A witnesses, bucket refinement, the doubling level of the
refined images, the sets E_d, the 5f(A)-4f(A) witness blocks and the
restricted 8A-7A count.

Values of ``f`` are handled by an *image algebra* chosen per input so that
distinctness and order are decided exactly whenever possible:

* ``ln`` on a rational set: ``ln r`` is carried as the rational ``r`` (sums
  become products);
* ``exp`` on a rational set with common denominator ``q``: values are
  integer polynomials in ``z = e^(1/q)``; since ``e`` is transcendental two
  such values are equal only as polynomials, and signs are decided by
  evaluation at increasing precision;
* ``cube`` / ``square`` on a rational set: plain rationals;
* everything else: mpf values at a raised working precision, merged with the
  same noise/tolerance rule as real-mode sets.

Orientation: every registered function is increasing, so no negation is
needed; for concave ``f`` the gap function decreases and buckets are simply
read in order of increasing ``f_d`` value (recorded as ``concave-reversed``).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from growthlab import convexfn
from growthlab.convexfn import ConvexFunctionSpec, Interval, Kind
from growthlab.errors import (
    AmbiguousSeparation,
    BucketTooSmall,
    BudgetExceeded,
    CertificateMismatch,
    CertificationFailure,
    DegenerateSplit,
    DomainViolation,
    InclusionViolation,
    NoConvergence,
    TooSmall,
)
from growthlab.io import encode_scalar
from growthlab.setcore import (
    DEFAULT_BUDGET,
    FiniteSet,
    GrowthBudget,
    default_precision,
    estimate_signed_size,
    fits_budget,
    make_set,
    merge_real,
    ratio_set_size,
    signed_combination,
    to_real,
)

LOG_BASE = 2
CONVEX = "convex-increasing"
CONCAVE = "concave-reversed"


def ceil_log2(n: int) -> int:
    return max(1, (n - 1).bit_length())


# ---------------------------------------------------------------------------
# image algebras
# ---------------------------------------------------------------------------


class _Algebra:
    """Arithmetic on values of ``f`` (tokens)."""

    exact = True

    def __init__(self, f: ConvexFunctionSpec, prec: int):
        self.fn = f
        self.prec = prec

    def sub(self, s, t):
        return self.add(s, self.neg(t))

    def cmp(self, s, t) -> int:
        return self.sign(self.sub(s, t))

    def sort_key(self):
        return lambda t: t

    def key(self, t):
        return t

    def distinct(self, items):
        """Deduplicate ``(token, payload)`` pairs; sorted, first payload kept."""
        seen = {}
        for tok, payload in items:
            seen.setdefault(self.key(tok), (tok, payload))
        key = self.sort_key()
        return sorted(seen.values(), key=lambda item: key(item[0]))

    def less(self, s, t) -> bool:
        return self.cmp(s, t) < 0


class _RationalAlgebra(_Algebra):
    zero = Fraction(0)

    def f(self, a):
        return a**3 if self.fn.kind is Kind.CUBE else a**2

    def fd(self, d, a):
        return self.f(a + d) - self.f(a)

    def add(self, s, t):
        return s + t

    def neg(self, t):
        return -t

    def sign(self, t):
        return (t > 0) - (t < 0)

    def to_mpf(self, t, prec=None):
        return to_real(t, prec or self.prec)

    def encode(self, t):
        return str(t)

    def image_set(self, tokens) -> FiniteSet:
        return make_set(tokens)

    def count_2x2(self, tokens, budget):
        return len(signed_combination(make_set(tokens), 2, 2, budget))


class _LogAlgebra(_Algebra):
    """``ln r`` carried as ``r``."""

    zero = Fraction(1)

    def f(self, a):
        return Fraction(a)

    def fd(self, d, a):
        return Fraction(a + d) / a

    def add(self, s, t):
        return s * t

    def neg(self, t):
        return 1 / Fraction(t)

    def sign(self, t):
        return (t > 1) - (t < 1)

    def to_mpf(self, t, prec=None):
        p = prec or self.prec
        with mpmath.workprec(p):
            return mpmath.log(to_real(t, p + 16))

    def encode(self, t):
        return f"ln({t})"

    def count_2x2(self, tokens, budget):
        return ratio_set_size(make_set(tokens), 2, 2, budget)


class _ExpAlgebra(_Algebra):
    """Integer polynomials in ``z = e^(1/q)``, as sorted ``(exponent, coeff)`` tuples."""

    zero = ()

    def __init__(self, f, prec, q: int):
        super().__init__(f, prec)
        self.q = q

    def _n(self, a):
        n = a * self.q
        return int(n)

    def f(self, a):
        return ((self._n(a), 1),)

    def fd(self, d, a):
        n = self._n(a)
        return ((n, -1), (n + self._n(d), 1))

    def add(self, s, t):
        acc = dict(s)
        for n, c in t:
            acc[n] = acc.get(n, 0) + c
        return tuple(sorted((n, c) for n, c in acc.items() if c))

    def neg(self, t):
        return tuple((n, -c) for n, c in t)

    def sign(self, t):
        if not t:
            return 0
        top = t[-1][0]
        prec = 64
        while prec <= 1 << 16:
            with mpmath.workprec(prec):
                v = mpf(0)
                err = mpf(0)
                for n, c in t:
                    term = c * mpmath.exp(mpf(n - top) / self.q)
                    v += term
                    err += abs(term)
                err *= mpf(2) ** (-prec + 8)
                if abs(v) > err:
                    return 1 if v > 0 else -1
            prec *= 2
        raise NoConvergence("could not decide the sign of an exponential polynomial")

    def sort_key(self):
        return functools.cmp_to_key(self.cmp)

    def to_mpf(self, t, prec=None):
        p = prec or self.prec
        with mpmath.workprec(p + 16):
            v = mpmath.fsum(c * mpmath.exp(mpf(n) / self.q) for n, c in t)
        with mpmath.workprec(p):
            return +v

    def encode(self, t):
        q = self.q
        terms = []
        for n, c in t:
            e = Fraction(n, q)
            terms.append(f"{c:+d}*exp({e})")
        return "".join(terms) or "0"

    def count_2x2(self, tokens, budget):
        return None


class _RealAlgebra(_Algebra):
    """mpf tokens, merged within rounding noise, ambiguous inside the tolerance."""

    exact = False

    def __init__(self, f, prec, scale):
        super().__init__(f, prec)
        with mpmath.workprec(prec):
            self.scale = max(mpf(1), scale)
            self.noise = self.scale * mpf(2) ** (-prec + 12)
            self.tol = self.scale * mpf(2) ** (-(prec // 2))
        self.zero = mpf(0)

    def f(self, a):
        return convexfn.evaluate(self.fn, a, self.prec)

    def fd(self, d, a):
        return convexfn.gap_eval(self.fn, d, a, self.prec)

    def add(self, s, t):
        with mpmath.workprec(self.prec):
            return s + t

    def neg(self, t):
        with mpmath.workprec(self.prec):
            return -t

    def sign(self, t):
        with mpmath.workprec(self.prec):
            size = abs(t)
            if size <= self.noise:
                return 0
            if size <= self.tol:
                raise AmbiguousSeparation(f"cannot decide the sign of {mpmath.nstr(t, 10)} at {self.prec} bits")
            return 1 if t > 0 else -1

    def distinct(self, items):
        out = []
        for tok, payload in sorted(items, key=lambda item: item[0]):
            if out and self.sign(self.sub(tok, out[-1][0])) == 0:
                continue
            out.append((tok, payload))
        return out

    def key(self, t):
        raise TypeError("real tokens are not hashable")

    def to_mpf(self, t, prec=None):
        with mpmath.workprec(prec or self.prec):
            return +t

    def encode(self, t):
        return mpmath.nstr(t, 30)

    def count_2x2(self, tokens, budget):
        X = merge_real(tokens, self.prec, self.scale, self.tol)
        return len(signed_combination(X, 2, 2, budget))


def working_precision(A: FiniteSet, f: ConvexFunctionSpec, base: int | None = None) -> int:
    """Base precision plus four times the bit range of ``f(A)`` plus a guard."""
    base = base or default_precision()
    vals = [convexfn.evaluate(f, a, base) for a in A]
    with mpmath.workprec(base):
        top = max(abs(v) for v in vals)
        gap = min((b - a for a, b in zip(vals, vals[1:])), default=mpf(1))
        gap = abs(gap) or mpf(2) ** (-base)
        bits = max(0, int(mpmath.ceil(mpmath.log(max(top, mpf(1)) / gap, 2))))
    return base + 4 * bits + 64


def make_algebra(A: FiniteSet, f: ConvexFunctionSpec, prec: int | None = None) -> _Algebra:
    base = prec or default_precision()
    if A.is_exact:
        if f.kind is Kind.LOG:
            return _LogAlgebra(f, base)
        if f.kind is Kind.EXP:
            return _ExpAlgebra(f, base, A._den)
        if f.kind in (Kind.CUBE, Kind.SQUARE):
            return _RationalAlgebra(f, base)
    wp = working_precision(A, f, base)
    with mpmath.workprec(wp):
        scale = 9 * max(abs(convexfn.evaluate(f, a, wp)) for a in A)
    return _RealAlgebra(f, wp, scale)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass
class RefinedBucket:
    d: object
    ordered: tuple  # A_d in increasing f_d order
    half: tuple  # A_d'
    t_d: object  # token
    quarter: tuple  # A_d''
    upper: tuple  # elements whose witness blocks are emitted
    lower_half_chosen: bool
    degenerate: bool = False


@dataclass
class GapDecomposition:
    A: FiniteSet
    D: tuple
    buckets: dict
    K: int = 0
    Dprime: tuple = ()
    trimmed: dict = field(default_factory=dict)
    refined: dict = field(default_factory=dict)
    L: int = 0
    Ddoubleprime: tuple = ()
    s: dict = field(default_factory=dict)
    Ed: dict = field(default_factory=dict)
    A_d_tripleprime: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Witness:
    """A value ``sum f(plus) - sum f(minus)`` lying in ``5f(A) - 4f(A)``."""

    value: object  # token of the image algebra
    plus: tuple
    minus: tuple
    base: object  # the element a whose gap [f(a), f(next)) holds the witness


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------


def decompose(A: FiniteSet):
    """``D`` and the buckets ``A_d`` (elements whose successor gap is ``d``)."""
    if len(A) < 2:
        raise TooSmall("the gap decomposition needs at least two elements")
    elems = A.elements
    buckets: dict = {}
    if A.is_exact:
        for a, b in zip(elems, elems[1:]):
            buckets.setdefault(b - a, []).append(a)
    else:
        rep = None
        noise = A.noise
        with mpmath.workprec(A.prec):
            gaps = sorted(((b - a), a) for a, b in zip(elems, elems[1:]))
            for g, a in gaps:
                if rep is None or g - rep > noise:
                    rep = g
                buckets.setdefault(rep, []).append(a)
    D = tuple(sorted(buckets))
    return D, {d: tuple(sorted(buckets[d])) for d in D}


def dyadic_regularize(buckets: dict):
    """Heaviest dyadic class of bucket sizes (ties to larger ``K``)."""
    classes: dict = {}
    for d, items in buckets.items():
        classes.setdefault(len(items).bit_length() - 1, []).append(d)
    j = max(classes, key=lambda j: (len(classes[j]) << j, j))
    K = 1 << j
    Dprime = tuple(sorted(classes[j]))
    trimmed = {d: buckets[d][:K] for d in Dprime}
    return K, Dprime, trimmed


def claim1_witnesses(A: FiniteSet, Dprime, trimmed: dict):
    """Points ``a + s`` strictly inside gaps of ``A``, each in ``A + A - A``.

    Returns ``(witness set, count, representations)`` where each
    representation ``(a, u, v)`` has ``a + u - v`` equal to the witness.
    """
    if len(Dprime) < 2:
        raise DegenerateSplit("the witness split needs at least two selected gaps")
    ds = sorted(Dprime)
    cut = (len(ds) + 1) // 2
    small, big = ds[:cut], ds[cut:]
    elems = A.elements
    index = {a: i for i, a in enumerate(elems)} if A.is_exact else None
    # a representative pair (v, v + s) for each small gap
    pair = {s: trimmed[s][0] for s in small}
    reps = []
    for d in big:
        for a in trimmed[d]:
            for s in small:
                v = pair[s]
                reps.append((a + s, (a, _next(A, v, index), v)))
    W = make_set([w for w, _ in reps]) if reps else None
    if W is not None and len(W) != len(reps):
        raise InclusionViolation("claim1 witnesses collide")
    return W, len(reps), reps


def _next(A: FiniteSet, a, index):
    elems = A.elements
    i = index[a] if index is not None else A.locate(a)
    return elems[i + 1]


def refine_bucket(alg: _Algebra, d, bucket) -> RefinedBucket:
    """``A_d'``, ``t_d`` and ``A_d''`` for one trimmed bucket."""
    K = len(bucket)
    if K == 0:
        raise BucketTooSmall("empty bucket")
    key = alg.sort_key()
    images = {a: alg.fd(d, a) for a in bucket}
    ordered = tuple(sorted(bucket, key=lambda a: key(images[a])))
    degenerate = K < 4
    if degenerate:
        h, q = max(1, K // 2), max(1, K // 4)
        upper = ordered[K // 2:]
    else:
        if K % 4:
            raise BucketTooSmall("bucket size must be a multiple of 4")
        h, q = K // 2, K // 4
        upper = ordered[h:]
    half = ordered[:h]
    t_d = images[half[-1]]
    lower = [a for a in half if alg.cmp(alg.add(images[a], images[a]), t_d) <= 0]
    higher = [a for a in half if a not in set(lower)]
    use_lower = len(lower) >= len(higher)
    quarter = tuple((lower if use_lower else higher)[:q])
    return RefinedBucket(d, ordered, half, t_d, quarter, tuple(upper), use_lower, degenerate)


def _two_fold_difference(alg: _Algebra, tokens, budget: GrowthBudget):
    """``2X - 2X`` with a representation ``((x1, x2), (x3, x4))`` per element."""
    n = len(tokens)
    pairs = [(alg.add(tokens[i][0], tokens[j][0]), (tokens[i][1], tokens[j][1])) for i in range(n) for j in range(i, n)]
    two = alg.distinct(pairs)
    if len(two) ** 2 > budget.max_pair_evaluations:
        raise BudgetExceeded(f"2X-2X needs {len(two) ** 2} evaluations")
    diffs = [(alg.sub(s, t), (rs, rt)) for s, rs in two for t, rt in two]
    out = alg.distinct(diffs)
    if len(out) > budget.max_result_size:
        raise BudgetExceeded(f"2X-2X has {len(out)} elements")
    return out


def doubling_level(alg: _Algebra, refined: dict, budget: GrowthBudget = DEFAULT_BUDGET, cross_check=True):
    """Heaviest dyadic class of ``|2f_d(A'') - 2f_d(A'')| / |A''|`` (ties to smaller ``L``).

    Returns ``(L, D'', s, diff)`` with ``s[d]`` the exact sizes and
    ``diff[d]`` the represented difference sets.
    """
    s, diff, classes = {}, {}, {}
    for d, rb in refined.items():
        tokens = [(alg.fd(d, a), a) for a in rb.quarter]
        full = _two_fold_difference(alg, tokens, budget)
        s[d] = len(full)
        diff[d] = full
        if cross_check:
            other = alg.count_2x2([t for t, _ in tokens], budget)
            if other is not None and other != s[d]:
                raise InclusionViolation(f"2X-2X size mismatch for d={d}: {s[d]} vs {other}")
        q = len(rb.quarter)
        # 2^j <= s/q < 2^(j+1)
        j = (s[d] // q).bit_length() - 1
        classes.setdefault(j, []).append(d)
    j = max(classes, key=lambda j: (len(classes[j]), -j))
    return 1 << j, tuple(sorted(classes[j])), s, diff


def build_Ed(alg: _Algebra, diff, t_d=None):
    """Non-negative part of a represented ``2X - 2X``; checked against ``[0, t_d)``."""
    E = [(tok, rep) for tok, rep in diff if alg.sign(tok) >= 0]
    if t_d is not None and E and not alg.less(E[-1][0], t_d):
        raise InclusionViolation("E_d reaches t_d")
    return E


def claim2_witnesses(alg: _Algebra, A: FiniteSet, d, rb: RefinedBucket, E):
    """Witness blocks ``f(a) + E_d`` for the upper half of one bucket."""
    out = []
    elems = A.elements
    index = {a: i for i, a in enumerate(elems)} if A.is_exact else None
    for a in rb.upper:
        nxt = _next(A, a, index)
        fa, fnext = alg.f(a), alg.f(nxt)
        block = []
        for e, ((x1, x2), (x3, x4)) in E:
            w = alg.add(fa, e)
            if not alg.less(w, fnext):
                raise InclusionViolation(f"witness above f(next) in the gap after {a}")
            plus = (a, x1 + d, x2 + d, x3, x4)
            minus = (x1, x2, x3 + d, x4 + d)
            block.append(Witness(w, plus, minus, a))
        out.extend(block)
    return out


def replay(alg: _Algebra, w: Witness):
    """Recompute ``sum f(plus) - sum f(minus)`` from the representation."""
    acc = alg.zero
    for x in w.plus:
        acc = alg.add(acc, alg.f(x))
    for x in w.minus:
        acc = alg.sub(acc, alg.f(x))
    return acc


def claim3_bound(
    f: ConvexFunctionSpec,
    alg: _Algebra,
    d,
    quarter,
    certificate=None,
    budget: GrowthBudget = DEFAULT_BUDGET,
    max_zeros: int = 5,
    grid: int = 64,
):
    """Restrict ``A_d''`` to the best certified piece and count ``8A''' - 7A'''`` exactly.

    Returns ``(A''', size, certificate)``.
    """
    images, prec = _separated_images(f, d, quarter)
    if certificate is None:
        J = convexfn.gap_range(f, d, prec)
        # a few nodes per bucket element; the hidden-zero search covers the cells
        grid = min(grid, max(8, 4 * len(quarter)))
        certificate = convexfn.certify(f, d, _hull(images.values(), J, prec), max_zeros, prec, grid=grid)
    if not all(certificate.interval.contains(v) for v in images.values()):
        raise CertificateMismatch("certificate interval does not cover the bucket image")
    counts = [[a for a in quarter if piece.contains(images[a])] for piece in certificate.subintervals]
    best = max(range(len(counts)), key=lambda i: (len(counts[i]), -i))
    triple = make_set(counts[best]) if counts[best] else make_set([quarter[0]])
    if not fits_budget(estimate_signed_size(triple, 8, 7), budget):
        raise BudgetExceeded("8A'''-7A''' exceeds the budget")
    return triple, len(signed_combination(triple, 8, 7, budget)), certificate


def _separated_images(f, d, quarter, max_prec: int = 1 << 15):
    """``f_d`` on the bucket, at a precision that puts every value strictly inside ``J``."""
    prec = default_precision()
    while prec <= max_prec:
        J = convexfn.gap_range(f, d, prec)
        images = {a: convexfn.gap_eval(f, d, a, prec) for a in quarter}
        if all(J.contains(v) for v in images.values()):
            return images, prec
        prec *= 2
    raise CertificationFailure(f"bucket images of {f.id}_d are not separated from the ends of its range")


def _hull(values, J: Interval, prec) -> Interval:
    values = sorted(values)
    lo, hi = values[0], values[-1]
    with mpmath.workprec(prec):
        if hi - lo > abs(hi) * mpf(2) ** (-(prec // 2)):
            return Interval.closed(lo, hi)
        eps = max(abs(lo), mpf(1)) * mpf(2) ** -20
        if J.lo is not None:
            eps = min(eps, (lo - to_real(J.lo, prec)) / 2)
        if J.hi is not None:
            eps = min(eps, (to_real(J.hi, prec) - hi) / 2)
        return Interval.open(lo - eps, hi + eps)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class WitnessReport:
    n: int
    K: int
    L: int
    Dprime_size: int
    Ddoubleprime_size: int
    claim1_count: int
    claim2_count: int
    claim3_size: int
    ratios: dict
    orientation: str
    degenerate_flags: list
    m: int | None
    function: str
    log_base: int = LOG_BASE
    prec: int = 0
    # not serialized: the full pipeline state
    state: GapDecomposition | None = field(default=None, repr=False, compare=False)
    claim1: list = field(default_factory=list, repr=False, compare=False)
    claim2: list = field(default_factory=list, repr=False, compare=False)
    algebra: _Algebra | None = field(default=None, repr=False, compare=False)

    @property
    def lower_bound_8A7A(self) -> int:
        return max(self.n + self.claim1_count, self.claim3_size)

    @property
    def lower_bound_5f4f(self) -> int:
        blocks = len({w.base for w in self.claim2})
        return self.claim2_count + self.n - blocks

    def to_dict(self) -> dict:
        p = self.prec or default_precision()
        return {
            "n": self.n,
            "K": self.K,
            "L": self.L,
            "Dprime_size": self.Dprime_size,
            "Ddoubleprime_size": self.Ddoubleprime_size,
            "claim1_count": self.claim1_count,
            "claim2_count": self.claim2_count,
            "claim3_size": self.claim3_size,
            "ratios": {k: encode_scalar(v, p) for k, v in self.ratios.items()},
            "orientation": self.orientation,
            "degenerate_flags": list(self.degenerate_flags),
            "log_base": self.log_base,
            "m": self.m,
            "function": self.function,
        }

    def to_json(self) -> str:
        import json

        return json.dumps(self.to_dict(), ensure_ascii=False)


def _ratios(n, K, L, Dp, m, c1, c2, c3, lb8, lb5, prec):
    with mpmath.workprec(prec):
        ell = mpmath.log(n, 2)
        mm = max(m if m is not None else 1, 1)
        r = {
            "claim1": mpf(c1) / (n * mpf(Dp) / ell),
            "claim2": mpf(c2) / (mpf(n) * K * L / ell**2),
            "claim3": mpf(c3) / (mpf(K) ** 4 / ((mpf(L) * mm) ** 11 * ell**25)),
        }
        # |8A-7A|^16 |5f-4f|^11 against |A|^41 / log^77, compared in logs
        lhs = 16 * mpmath.log(lb8) + 11 * mpmath.log(lb5)
        rhs = 41 * mpmath.log(n) - 77 * mpmath.log(ell)
        r["product"] = mpmath.exp(lhs - rhs)
        r["max"] = max(lb8, lb5) / mpf(n) ** (mpf(3) / 2 + mpf(1) / 54)
    return r


def full_pipeline(
    A: FiniteSet,
    f: ConvexFunctionSpec,
    budget: GrowthBudget = DEFAULT_BUDGET,
    max_zeros: int = 5,
    certify_grid: int = 64,
) -> WitnessReport:
    """Run every stage on ``A`` and collect counts, ratios and flags."""
    n = len(A)
    if n < 8:
        raise TooSmall(f"the pipeline needs at least 8 elements, got {n}")
    for a in (A.min(), A.max()):
        if not f.domain.contains(a):
            raise DomainViolation(f"{a} is outside the domain {f.domain} of {f.id}")
    prec = default_precision()
    alg = make_algebra(A, f, prec)
    flags = []
    D, buckets = decompose(A)
    state = GapDecomposition(A, D, buckets)
    K, Dprime, trimmed = dyadic_regularize(buckets)
    state.K, state.Dprime, state.trimmed = K, Dprime, trimmed

    try:
        _, c1, reps1 = claim1_witnesses(A, Dprime, trimmed)
    except DegenerateSplit:
        c1, reps1 = 0, []
        flags.append("claim1_degenerate_split")

    if K < 4:
        flags.append("small_K_degenerate_mode")
    state.refined = {d: refine_bucket(alg, d, trimmed[d]) for d in Dprime}
    L, Dpp, s, diff = doubling_level(alg, state.refined, budget)
    state.L, state.Ddoubleprime, state.s = L, Dpp, s

    witnesses = []
    for d in Dpp:
        rb = state.refined[d]
        E = build_Ed(alg, diff[d], rb.t_d)
        state.Ed[d] = E
        witnesses.extend(claim2_witnesses(alg, A, d, rb, E))
        if len(witnesses) > budget.max_result_size:
            raise BudgetExceeded("too many claim2 witnesses")
    c2 = len(witnesses)

    # claim3 on the d in D'' with the largest A_d'' (ties to the smallest d)
    d3 = max(Dpp, key=lambda d: (len(state.refined[d].quarter), -d))
    m = None
    c3 = 0
    try:
        triple, c3, cert = claim3_bound(
            f, alg, d3, state.refined[d3].quarter, None, budget, max_zeros, certify_grid
        )
        m = cert.zero_count
        state.A_d_tripleprime[d3] = triple
        if len(state.refined[d3].quarter) < 8 * m:
            flags.append("K_below_8m")
    except BudgetExceeded:
        flags.append("claim3_budget_exceeded")
    except CertificationFailure:
        flags.append("claim3_uncertified")

    report = WitnessReport(
        n=n,
        K=K,
        L=L,
        Dprime_size=len(Dprime),
        Ddoubleprime_size=len(Dpp),
        claim1_count=c1,
        claim2_count=c2,
        claim3_size=c3,
        ratios={},
        orientation=CONVEX if f.convex else CONCAVE,
        degenerate_flags=flags,
        m=m,
        function=f.id,
        prec=prec,
        state=state,
        claim1=reps1,
        claim2=witnesses,
        algebra=alg,
    )
    report.ratios = _ratios(
        n, K, L, len(Dprime), m, c1, c2, c3, report.lower_bound_8A7A, report.lower_bound_5f4f, prec
    )
    return report


def pigeonhole_holds(report: WitnessReport) -> tuple:
    """The two counting guarantees of the regularization steps (constant 1)."""
    n = report.n
    first = report.Dprime_size * report.K * 4 * ceil_log2(n) >= n - 1
    # ceil(4 log2 n) = ceil(log2 n^4)
    second = report.Ddoubleprime_size * ceil_log2(n**4) >= report.Dprime_size
    return first, second
