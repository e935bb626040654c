"""Inequality checkers, a brute-force oracle and the curated corpus.

Every check reports both sides with implied constant 1. Proven inequalities
(Plünnecke-type, Ruzsa triangle and the triangle reductions) are expected
to hold on every input; the constant-free lower bounds only report ratios.

Sizes of ``k f(A) - l f(A)`` are computed exactly where the structure
allows:

* ``ln`` on positive rationals: ``|A^(k) / A^(l)|``;
* ``exp`` on rationals: a combinatorial count (distinct exponent vectors give
  distinct values because ``e`` is transcendental);
* ``cube`` / ``square`` on rationals: exact rational kernels;
* otherwise real-mode kernels at a raised working precision.
"""
from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

from growthlab import convexfn
from growthlab.convexfn import ConvexFunctionSpec, Interval, Kind
from growthlab.errors import (
    BudgetExceeded,
    CertificationFailure,
    NotKConvex,
    PreconditionError,
    SpaceTooLarge,
    TooSmall,
    ZeroShift,
)
from growthlab.io import encode_scalar
from growthlab.rng import arithmetic_progression, geometric_progression, random_set
from growthlab.setcore import (
    DEFAULT_BUDGET,
    FiniteSet,
    GrowthBudget,
    default_precision,
    estimate_product_size,
    estimate_signed_size,
    fits_budget,
    iterated_product,
    iterated_sumset,
    make_set,
    merge_real,
    productset,
    ratio_set_size,
    rep_count,
    shift_intersection,
    signed_combination,
    sumset,
)

UPPER = "lhs<=rhs"
LOWER = "lhs>=rhs"

C_SUM_PRODUCT = Fraction(1, 162)
C_SQUEEZE = Fraction(1, 54)


@dataclass
class CheckResult:
    name: str
    lhs: object
    rhs: object
    direction: str
    parameters: dict = field(default_factory=dict)

    @property
    def ratio(self):
        if isinstance(self.lhs, Fraction) and isinstance(self.rhs, Fraction):
            return self.lhs / self.rhs
        with mpmath.workprec(default_precision()):
            return _mpf(self.lhs) / _mpf(self.rhs)

    @property
    def holds(self) -> bool:
        a, b = self.lhs, self.rhs
        if not (isinstance(a, Fraction) and isinstance(b, Fraction)):
            with mpmath.workprec(default_precision()):
                a, b = _mpf(a), _mpf(b)
        return a <= b if self.direction == UPPER else a >= b

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": encode_scalar(self.lhs),
            "rhs": encode_scalar(self.rhs),
            "ratio": encode_scalar(self.ratio),
            "holds": self.holds,
            "direction": self.direction,
            "parameters": {k: _plain(v) for k, v in self.parameters.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def _plain(v):
    if isinstance(v, (Fraction, mpf)):
        return encode_scalar(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def _mpf(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _power(n, exponent: Fraction):
    with mpmath.workprec(default_precision()):
        return mpf(n) ** _mpf(exponent)


def log2(n):
    with mpmath.workprec(default_precision()):
        return mpmath.log(n, 2)


# ---------------------------------------------------------------------------
# sizes of signed combinations of f(A)
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> int:
    if total == 0:
        return 1 if parts == 0 else 0
    if parts == 0:
        return 0
    return math.comb(total - 1, parts - 1)


@lru_cache(maxsize=None)
def exponent_vector_count(n: int, k: int, l: int) -> int:
    """Number of distinct vectors ``p - m`` with ``p, m`` non-negative, ``|p| = k``, ``|m| = l``.

    Equivalently the size of ``kX - lX`` for ``n`` linearly independent
    generators (such as ``e^a`` for distinct rationals ``a``).
    """
    total = 0
    for t in range(min(k, l) + 1):
        a, b = k - t, l - t
        for i in range(min(n, a) + 1):
            ci = _compositions(a, i)
            if not ci:
                continue
            for j in range(min(n - i, b) + 1):
                cj = _compositions(b, j)
                if cj:
                    total += math.comb(n, i) * math.comb(n - i, j) * ci * cj
    return total


def image_estimate(A: FiniteSet, f: ConvexFunctionSpec, k: int, l: int = 0) -> int:
    """Upper bound on ``|k f(A) - l f(A)|`` used to decide feasibility."""
    n = len(A)
    if A.is_exact and f.kind is Kind.EXP:
        return exponent_vector_count(n, k, l)
    if A.is_exact and f.kind is Kind.LOG:
        return estimate_product_size(A, k, l)
    if A.is_exact and f.kind in (Kind.CUBE, Kind.SQUARE):
        return estimate_signed_size(make_set([_rational_image(f, a) for a in A]), k, l)
    return math.comb(n + k - 1, k) * (math.comb(n + l - 1, l) if l else 1)


def _rational_image(f, a):
    return a**3 if f.kind is Kind.CUBE else a**2


def image_size(A: FiniteSet, f: ConvexFunctionSpec, k: int, l: int = 0, budget: GrowthBudget = DEFAULT_BUDGET) -> int:
    """``|k f(A) - l f(A)|`` (``l = 0`` gives ``|k f(A)|``)."""
    if k < 0 or l < 0 or k + l < 1:
        raise PreconditionError("need k, l >= 0 with k + l >= 1")
    for a in (A.min(), A.max()):
        if not f.domain.contains(a):
            raise PreconditionError(f"{a} is outside the domain of {f.id}")
    if A.is_exact and f.kind is Kind.EXP:
        return exponent_vector_count(len(A), k, l)
    if A.is_exact and f.kind is Kind.LOG:
        if k == 0:
            return len(iterated_product(A, l, budget))
        if l == 0:
            return len(iterated_product(A, k, budget))
        return ratio_set_size(A, k, l, budget)
    if A.is_exact and f.kind in (Kind.CUBE, Kind.SQUARE):
        return len(signed_combination(make_set([_rational_image(f, a) for a in A]), k, l, budget))
    from growthlab.squeeze import working_precision

    prec = working_precision(A, f)
    with mpmath.workprec(prec):
        vals = [convexfn.evaluate(f, a, prec) for a in A]
        scale = (k + l) * max(abs(v) for v in vals)
    X = merge_real(vals, prec, scale)
    return len(signed_combination(X, k, l, budget))


def _a_side_feasible(A, k, l, budget):
    return fits_budget(estimate_signed_size(A, k, l), budget)


def _f_side_feasible(A, f, k, l, budget):
    if A.is_exact and f.kind is Kind.LOG:
        return _product_feasible(A, k, l, budget)
    return fits_budget(image_estimate(A, f, k, l), budget)


# products past int64 fall back to Python integers, which is ~100x slower
_OBJECT_PATH_LIMIT = 2_000_000


def _fits_machine(*sets) -> bool:
    bits = 0
    for X in sets:
        nums, den = X.ints()
        bits += max(max(abs(int(v)) for v in nums), den).bit_length()
    return bits < 62


def _progressive_products(A, k, budget):
    """``[A, A^(2), ...]`` up to ``A^(k)``, stopping before a step that would be too costly."""
    n = len(A)
    chain = [A]
    while len(chain) < k:
        cur = chain[-1]
        work = len(cur) * n
        if not fits_budget(work, budget) or (work > _OBJECT_PATH_LIMIT and not _fits_machine(cur, A)):
            break
        try:
            chain.append(productset(cur, A, budget))
        except BudgetExceeded:
            break
    return chain


def _product_feasible(A, k, l, budget):
    if fits_budget(estimate_product_size(A, k, l), budget) and estimate_product_size(A, k, l) <= _OBJECT_PATH_LIMIT:
        return True
    chain = _progressive_products(A, max(k, l), budget)
    if len(chain) < max(k, l):
        return False
    if not l:
        return True
    top, bottom = chain[k - 1], chain[l - 1]
    work = len(top) * len(bottom)
    if not fits_budget(work, budget) or work > budget.max_pair_evaluations:
        return False
    return work <= _OBJECT_PATH_LIMIT or _fits_machine(top, bottom)


# ---------------------------------------------------------------------------
# proven inequalities
# ---------------------------------------------------------------------------


def check_plunnecke(X: FiniteSet, Y: FiniteSet, k: int, l: int, budget: GrowthBudget = DEFAULT_BUDGET) -> CheckResult:
    """``|kX - lX| <= |X + Y|^(k+l) / |Y|^(k+l-1)``."""
    if k < 0 or l < 0 or k + l < 2:
        raise PreconditionError("need k + l >= 2")
    lhs = len(signed_combination(X, k, l, budget))
    s = len(sumset(X, Y, budget))
    rhs = Fraction(s ** (k + l), len(Y) ** (k + l - 1))
    return CheckResult("plunnecke", Fraction(lhs), rhs, UPPER, {"k": k, "l": l, "|X+Y|": s, "|Y|": len(Y)})


def check_ruzsa(X: FiniteSet, Y: FiniteSet, Z: FiniteSet, budget: GrowthBudget = DEFAULT_BUDGET) -> CheckResult:
    """``|Y - Z| <= |X + Y| |X + Z| / |X|``."""
    lhs = len(sumset(Y, Z.negate(), budget))
    rhs = Fraction(len(sumset(X, Y, budget)) * len(sumset(X, Z, budget)), len(X))
    return CheckResult("ruzsa", Fraction(lhs), rhs, UPPER, {"|X|": len(X)})


def triangle_reduction(
    A: FiniteSet,
    k: int,
    l: int,
    m: int,
    f: ConvexFunctionSpec | None = None,
    budget: GrowthBudget = DEFAULT_BUDGET,
) -> CheckResult:
    """``|kX - lX| <= |(m+k)X|^2 / |mX|`` for ``X = A`` or ``X = f(A)``, ``k >= l``."""
    if k < l:
        raise PreconditionError("the reduction is stated for k >= l")
    if f is None:
        lhs = len(signed_combination(A, k, l, budget))
        big = len(iterated_sumset(A, m + k, budget))
        mid = len(iterated_sumset(A, m, budget))
        side = "A"
    else:
        lhs = image_size(A, f, k, l, budget)
        big = image_size(A, f, m + k, 0, budget)
        mid = image_size(A, f, m, 0, budget)
        side = f.id
    return CheckResult(
        "triangle_reduction",
        Fraction(lhs),
        Fraction(big * big, mid),
        UPPER,
        {"side": side, "k": k, "l": l, "m": m},
    )


A_FAMILIES = ((8, 7, 8), (4, 3, 4), (2, 1, 2), (1, 1, 1))
F_FAMILIES = ((5, 4, 8), (3, 2, 4), (2, 1, 2), (1, 1, 1))


def reduction_chain(A: FiniteSet, f: ConvexFunctionSpec, budget: GrowthBudget = DEFAULT_BUDGET) -> list:
    """Both triangle reductions at the largest feasible family; smaller ones are flagged."""
    out = []
    for side, families in ((None, A_FAMILIES), (f, F_FAMILIES)):
        for i, (k, l, m) in enumerate(families):
            if side is None:
                ok = _a_side_feasible(A, m + k, 0, budget) and _a_side_feasible(A, k, l, budget)
            else:
                ok = _f_side_feasible(A, side, m + k, 0, budget) and _f_side_feasible(A, side, k, l, budget)
            if not ok:
                continue
            try:
                r = triangle_reduction(A, k, l, m, side, budget)
            except BudgetExceeded:
                continue
            r.parameters["reduced"] = i > 0
            out.append(r)
            break
    return out


# ---------------------------------------------------------------------------
# constant-free bounds
# ---------------------------------------------------------------------------


def check_enr(A: FiniteSet, f: ConvexFunctionSpec, k: int, budget: GrowthBudget = DEFAULT_BUDGET) -> CheckResult:
    """``|kA| |k f(A)|`` against ``|A|^(3 - 2^(1-k))``."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    n = len(A)
    lhs = len(iterated_sumset(A, k, budget)) * image_size(A, f, k, 0, budget)
    exponent = 3 - Fraction(2) ** (1 - k)
    return CheckResult("enr", Fraction(lhs), _power(n, exponent), LOWER, {"k": k, "exponent": exponent, "function": f.id})


def _hull(A: FiniteSet) -> Interval:
    return Interval.closed(A.min(), A.max()) if len(A) > 1 else Interval.closed(A.min(), A.min() + 1)


def check_bom(
    A: FiniteSet,
    f: ConvexFunctionSpec,
    k: int,
    budget: GrowthBudget = DEFAULT_BUDGET,
    allow_large_k: bool = False,
) -> CheckResult:
    """``|2^k f(A) - (2^k - 1) f(A)|`` against the doubling-constant bound with ``C = 1``."""
    n = len(A)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if n <= 10 * k:
        raise TooSmall(f"need |A| > {10 * k}, got {n}")
    if k > 2 and not allow_large_k:
        raise BudgetExceeded("k > 2 needs an explicit override")
    try:
        convexfn.certify_k_convex(f, _hull(A), k)
    except (CertificationFailure, PreconditionError) as exc:
        raise NotKConvex(str(exc)) from exc
    K = Fraction(len(signed_combination(A, 2, 1, budget)), n)
    top = 2**k
    lhs = image_size(A, f, top, top - 1, budget)
    k_exp = 2 ** (k + 1) - k - 2
    log_exp = 2 ** (k + 2) - k - 4
    with mpmath.workprec(default_precision()):
        rhs = mpf(n) ** (k + 1) / (_mpf(K) ** k_exp * log2(n) ** log_exp)
    return CheckResult(
        "bom", Fraction(lhs), rhs, LOWER, {"k": k, "K": K, "K_exponent": k_exp, "log_exponent": log_exp, "function": f.id}
    )


def _fold_down(sizer, feasible, k):
    """``(size, fold)`` at the largest feasible fold ``<= k`` (halving), as a lower bound."""
    fold = k
    while fold >= 1:
        if feasible(fold):
            try:
                return sizer(fold), fold
            except BudgetExceeded:
                pass
        fold //= 2
    raise BudgetExceeded("no feasible fold")


def check_main(A: FiniteSet, f: ConvexFunctionSpec, budget: GrowthBudget = DEFAULT_BUDGET) -> list:
    """The squeezing bounds, the 16-fold sum-product bounds and the triangle reductions.

    Where a 16-fold (or 8A-7A / 5f-4f) size is out of budget, the largest
    feasible smaller fold is used as a lower bound and the result is flagged
    ``lower_bound: true``; lower-bound checks stay sound this way.
    """
    n = len(A)
    ell = log2(n) if n > 1 else mpf(1)
    out = []

    def a_signed(k, l):
        return _fold_down(
            lambda j: len(signed_combination(A, j, max(j - 1, 0) if l else 0, budget)),
            lambda j: _a_side_feasible(A, j, max(j - 1, 0) if l else 0, budget),
            k,
        )

    def f_signed(k, l):
        return _fold_down(
            lambda j: image_size(A, f, j, max(j - 1, 0) if l else 0, budget),
            lambda j: _f_side_feasible(A, f, j, max(j - 1, 0) if l else 0, budget),
            k,
        )

    s8, k8 = a_signed(8, 7)
    s5, k5 = f_signed(5, 4)
    flags = {"lower_bound": k8 < 8 or k5 < 5, "A_fold": k8, "f_fold": k5, "function": f.id}
    with mpmath.workprec(default_precision()):
        lhs = mpmath.exp(16 * mpmath.log(s8) + 11 * mpmath.log(s5))
        rhs = mpf(n) ** 41 / ell**77
    out.append(CheckResult("squeeze_product", lhs, rhs, LOWER, dict(flags)))
    out.append(
        CheckResult(
            "squeeze_max", Fraction(max(s8, s5)), _power(n, Fraction(3, 2) + C_SQUEEZE), LOWER,
            dict(flags, exponent=Fraction(3, 2) + C_SQUEEZE),
        )
    )

    target = _power(n, Fraction(3, 2) + C_SUM_PRODUCT)
    s16, k16 = _fold_down(
        lambda j: len(iterated_sumset(A, j, budget)), lambda j: _a_side_feasible(A, j, 0, budget), 16
    )
    s13, k13 = _fold_down(lambda j: image_size(A, f, j, 0, budget), lambda j: _f_side_feasible(A, f, j, 0, budget), 13)
    params = {"exponent": Fraction(3, 2) + C_SUM_PRODUCT, "A_fold": k16, "f_fold": k13, "function": f.id}
    out.append(
        CheckResult("sum_f_max", Fraction(max(s16, s13)), target, LOWER, dict(params, lower_bound=k16 < 16 or k13 < 13))
    )
    out.append(CheckResult("sum_side", Fraction(s16), target, LOWER, {"fold": k16, "lower_bound": k16 < 16}))
    if A.min() > 0:
        chain = _progressive_products(A, 16, budget)
        p16, kp = len(chain[-1]), len(chain)
        out.append(CheckResult("product_side", Fraction(p16), target, LOWER, {"fold": kp, "lower_bound": kp < 16}))
        out.append(
            CheckResult(
                "sum_product_max", Fraction(max(s16, p16)), target, LOWER,
                {"A_fold": k16, "product_fold": kp, "lower_bound": k16 < 16 or kp < 16},
            )
        )
    out.extend(reduction_chain(A, f, budget))
    return out


def check_sum_product(A: FiniteSet, budget: GrowthBudget = DEFAULT_BUDGET) -> list:
    """``|16A|``, ``|A^(16)|`` and their max against ``|A|^(3/2 + 1/162)``."""
    return [r for r in check_main(A, convexfn.LN, budget) if r.name in ("sum_side", "product_side", "sum_product_max")]


def check_cor43(A: FiniteSet, t, budget: GrowthBudget = DEFAULT_BUDGET) -> CheckResult:
    """Bound on ``r_{A-A}(t)`` in terms of the multiplicative doubling ``|AA|/|A|``."""
    t = Fraction(t) if not isinstance(t, (Fraction, mpf)) else t
    if t == 0:
        raise ZeroShift("t must be non-zero")
    if A.min() <= 0:
        raise PreconditionError("the set must be positive (apply sign_reduce first)")
    n = len(A)
    K = Fraction(len(iterated_product(A, 2, budget)), n)
    r = rep_count(A, t)
    X = shift_intersection(A, t)
    params = {"t": t, "K": K, "r": r, "|A(t)|": len(X)}
    with mpmath.workprec(default_precision()):
        rhs = _mpf(K) ** (mpf(405) / 41) * mpf(n) ** (mpf(2) / 3 - mpf(1) / 123)
        if len(X):
            chain_lhs = mpf(len(X)) ** (mpf(3) / 2 + mpf(1) / 54)
            chain_rhs = _mpf(K) ** 15 * n
            params["chain_lhs"] = chain_lhs
            params["chain_rhs"] = chain_rhs
            params["chain_ratio"] = chain_lhs / chain_rhs
    if len(X) and X.is_exact and fits_budget(estimate_product_size(X, 8, 7), budget):
        try:
            params["|X^(8)/X^(7)|"] = ratio_set_size(X, 8, 7, budget)
        except BudgetExceeded:
            params["|X^(8)/X^(7)|"] = None
    else:
        params["|X^(8)/X^(7)|"] = None
    return CheckResult("cor43", Fraction(r), rhs, UPPER, params)


def sign_reduce(A: FiniteSet):
    """The larger same-sign part of ``A`` without 0, made positive: ``(A', sign)``."""
    pos = [a for a in A if a > 0]
    neg = [-a for a in A if a < 0]
    if not pos and not neg:
        raise PreconditionError("no non-zero elements")
    if len(pos) >= len(neg):
        return make_set(pos), 1
    return make_set(neg), -1


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------


@dataclass
class OracleReport:
    checks: int
    violations: list


def _subsets(universe: int, max_size: int):
    items = range(universe + 1)
    return [frozenset(c) for r in range(1, max_size + 1) for c in itertools.combinations(items, r)]


def _signed(X, k, l):
    pos = {0}
    for _ in range(k):
        pos = {p + x for p in pos for x in X}
    neg = {0}
    for _ in range(l):
        neg = {p + x for p in neg for x in X}
    return len({p - q for p in pos for q in neg})


def _folds(max_fold):
    return [(k, s - k) for s in range(2, max_fold + 1) for k in range(s, -1, -1)]


def _oracle_shard(args):
    lo, hi, universe, max_size, max_fold = args
    sets = _subsets(universe, max_size)
    folds = _folds(max_fold)
    sums = {}
    for i, X in enumerate(sets):
        for j, Y in enumerate(sets):
            sums[i, j] = len({x + y for x in X for y in Y})
    diffs = {}
    for j, Y in enumerate(sets):
        for m, Z in enumerate(sets):
            diffs[j, m] = len({y - z for y in Y for z in Z})
    signed = {(i, kl): _signed(X, *kl) for i, X in enumerate(sets) for kl in folds}
    checks, bad = 0, []
    for i in range(lo, hi):
        X = sets[i]
        nx = len(X)
        for j, Y in enumerate(sets):
            ny = len(Y)
            sxy = sums[i, j]
            for k, l in folds:
                checks += 1
                if signed[i, (k, l)] * ny ** (k + l - 1) > sxy ** (k + l):
                    bad.append(("plunnecke", sorted(X), sorted(Y), k, l))
            for m, Z in enumerate(sets):
                checks += 1
                if diffs[j, m] * nx > sxy * sums[i, m]:
                    bad.append(("ruzsa", sorted(X), sorted(Y), sorted(Z)))
    return checks, bad


def oracle_space(universe: int, max_size: int, max_fold: int) -> int:
    s = len(_subsets(universe, max_size)) if universe < 24 else 10**9
    return s * s * len(_folds(max_fold)) + s**3


def exhaustive_oracle(universe_bound: int, max_size: int, max_fold: int = 3, jobs: int = 1, limit: int = 10**7) -> OracleReport:
    """Every ``X, Y, Z`` within ``{0..universe_bound}`` of size ``<= max_size``, all folds ``k + l <= max_fold``.

    Checks the Plünnecke-type bound on every ``(X, Y, k, l)`` and the Ruzsa
    triangle bound on every ``(X, Y, Z)`` in integer arithmetic.
    """
    if universe_bound < 0 or max_size < 1 or max_fold < 2:
        raise PreconditionError("need universe >= 0, max_size >= 1, max_fold >= 2")
    space = oracle_space(universe_bound, max_size, max_fold)
    if space > limit:
        raise SpaceTooLarge(f"{space} checks exceed the limit {limit}")
    n = len(_subsets(universe_bound, max_size))
    shards = max(1, jobs)
    step = -(-n // shards)
    tasks = [(i, min(n, i + step), universe_bound, max_size, max_fold) for i in range(0, n, step)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_oracle_shard, tasks))
    else:
        results = [_oracle_shard(t) for t in tasks]
    checks = sum(c for c, _ in results)
    violations = []
    for _, bad in results:
        for item in bad:
            violations.append(_violation(item))
    return OracleReport(checks, violations)


def _violation(item):
    if item[0] == "plunnecke":
        _, X, Y, k, l = item
        return check_plunnecke(make_set(X), make_set(Y), k, l)
    _, X, Y, Z = item
    return check_ruzsa(make_set(X), make_set(Y), make_set(Z))


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


def curated_corpus(seed: int = 2024) -> list:
    """``(label, set)`` pairs: short APs and GPs plus seeded random sets."""
    out = [
        ("ap8", arithmetic_progression(8, 1, 1)),
        ("gp8", geometric_progression(8, 1, 2)),
        ("ap16", arithmetic_progression(16, 1, 1)),
        ("gp16", geometric_progression(16, 1, 2)),
        ("ap32_step3", arithmetic_progression(32, 2, 3)),
    ]
    for i, n in enumerate((8, 12, 16, 24, 32)):
        out.append((f"random{n}", random_set(n, 1, 10**3, seed + i)))
    return out


def run_corpus(seed: int = 2024, functions=("ln", "exp"), budget: GrowthBudget = DEFAULT_BUDGET) -> list:
    """Proven checks and ratio reports over :func:`curated_corpus`."""
    results = []
    for label, A in curated_corpus(seed):
        for name in functions:
            f = convexfn.parse_function(name)
            for r in check_main(A, f, budget):
                r.parameters["set"] = label
                results.append(r)
            r = check_enr(A, f, 2, budget)
            r.parameters["set"] = label
            results.append(r)
        for r in (check_plunnecke(A, A, 2, 1, budget), check_ruzsa(A, A, A, budget)):
            r.parameters["set"] = label
            results.append(r)
        t = A[1] - A[0]
        r = check_cor43(A, t, budget)
        r.parameters["set"] = label
        results.append(r)
    return results


PROVEN = ("plunnecke", "ruzsa", "triangle_reduction")
