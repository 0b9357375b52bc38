"""Exact evaluation of the truncated sums and hypergeometric identities.

All series parameters are integer exponents of q (a = q**alpha and so on),
so every value lives in ``RatFunc``.  Very-well-poised parameter pairs
(q*sqrt(a), -q*sqrt(a)) / (sqrt(a), -sqrt(a)) are never split into square
roots: the paired quotient collapses to (1 - a*q**(2k)) / (1 - a), which
keeps all exponents integral.

The evaluators share one summation kernel (``qobjects.qsum``) but build
their terms along independent routes:

* ``theorem_sum``      - direct term-by-term summation,
* ``_vwp_series``      - single very-well-poised terminating series
                         (the shape shared by the multiseries transform's
                         left side, the 8phi7, and the Karlsson-Minton
                         summation),
* ``_multisum_terms``  - the (m-1)-fold sum on the transformed side,
* ``watson_pair``      - dedicated 8phi7 / 4phi3 loops.

``proof_decomposition`` rewrites a theorem sum as prefactor * multisum via
the multiseries transformation specialised in base q**d, which is the
factorisation the congruence proofs rest on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .exactalg import RatFunc
from .qobjects import QPochSpec, QProduct, VanishingDenominator, qsum

__all__ = [
    "AndrewsParams",
    "InvalidCase",
    "KarlssonMintonParams",
    "TheoremCase",
    "Truncation",
    "Variant",
    "andrews_lhs",
    "andrews_rhs",
    "draw_andrews_params",
    "draw_km_params",
    "draw_watson_exponents",
    "gasper_terminating_sum",
    "multi_km_sum",
    "proof_decomposition",
    "sample_until_valid",
    "theorem_sum",
    "theorem_term",
    "truncated_sum",
    "watson_pair",
]


class Variant(Enum):
    THM1 = "thm1"
    THM2 = "thm2"


class Truncation(Enum):
    UPPER = "upper"
    FULL = "full"


class InvalidCase(ValueError):
    """A parameter tuple violating stated hypotheses, all named."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _case_violations(d: int, r: int, n: int, variant: Variant) -> list[str]:
    bad = []
    if d < 5 or d % 2 == 0:
        bad.append("d must be an odd integer >= 5")
    if r % 2 == 0:
        bad.append("r must be odd")
    if r > d - 4:
        bad.append("r <= d - 4 violated")
    if math.gcd(d, r) != 1:
        bad.append("gcd(d, r) = 1 violated")
    if n <= 1:
        bad.append("n > 1 violated")
    if d >= 1:
        if variant is Variant.THM1:
            if n % d != (-r) % d:
                bad.append("n = -r (mod d) violated")
            if n < d - r:
                bad.append("n >= d - r violated")
        else:
            if (2 * n) % d != (-r) % d:
                bad.append("2n = -r (mod d) violated")
            if 2 * n < d - r:
                bad.append("n >= (d - r)/2 violated")
    return bad


@dataclass(frozen=True)
class TheoremCase:
    """A validated (d, r, n) parameter tuple with its truncation choice.

    Hypotheses: d, r odd, d >= 5, r <= d - 4, gcd(d, r) = 1, and
    n = -r (mod d) with n >= d - r   (THM1), or
    2n = -r (mod d) with n >= (d - r)/2  (THM2).
    The second congruence is the meaning of "n = -r/2 (mod d)": 2 is
    invertible mod d because d is odd.
    """

    d: int
    r: int
    n: int
    variant: Variant
    truncation: Truncation = Truncation.UPPER

    def __post_init__(self) -> None:
        bad = _case_violations(self.d, self.r, self.n, self.variant)
        if bad:
            raise InvalidCase(bad)

    @property
    def upper_bound(self) -> int:
        """The truncation order M of the sum."""
        if self.truncation is Truncation.FULL:
            return self.n - 1
        d, r, n = self.d, self.r, self.n
        if self.variant is Variant.THM1:
            return (d * n - n - r) // d
        return (d * n - 2 * n - r) // d

    @property
    def depth(self) -> int:
        """Number of parameter pairs m = (d + 1)/2 in the multiseries form."""
        return (self.d + 1) // 2

    def describe(self) -> str:
        return (
            f"{self.variant.value}(d={self.d}, r={self.r}, n={self.n}, "
            f"{self.truncation.value}, M={self.upper_bound})"
        )


# ---------------------------------------------------------------------------
# the truncated sums


def _term_product(d: int, r: int, k: int) -> QProduct:
    # [2dk + r] * (q^r; q^d)_k^d / (q^d; q^d)_k^d * q^(d(d-r-2)k/2)
    t = QProduct()
    t.mul_one_minus_q(2 * d * k + r, 1)
    t.mul_one_minus_q(1, -1)
    t.mul_pochhammer(QPochSpec(r, d, k), d)
    t.mul_pochhammer(QPochSpec(d, d, k), -d)
    t.mul_qpow(d * (d - r - 2) * k // 2)
    return t


def _check_sum_shape(d: int, r: int) -> None:
    if d < 1:
        raise ValueError("d must be a positive integer")
    if (d * (d - r - 2)) % 2:
        raise ValueError("d(d - r - 2) must be even for an integral q-power")


def theorem_term(case: TheoremCase, k: int) -> RatFunc:
    """The exact k-th summand of the theorem sum, 0 <= k <= M."""
    if not 0 <= k <= case.upper_bound:
        raise ValueError(f"k = {k} outside 0..{case.upper_bound}")
    return _term_product(case.d, case.r, k).to_ratfunc()


def truncated_sum(d: int, r: int, upper: int) -> RatFunc:
    """sum_{k=0}^{upper} [2dk+r] (q^r;q^d)_k^d / (q^d;q^d)_k^d q^(d(d-r-2)k/2).

    The raw sum builder: no theorem hypotheses are imposed beyond the
    q-power being integral, so excluded families (for example d = 3) can
    still be evaluated for regression checks.
    """
    _check_sum_shape(d, r)
    if upper < 0:
        raise ValueError("upper bound must be non-negative")
    return qsum(_term_product(d, r, k) for k in range(upper + 1))


def theorem_sum(case: TheoremCase) -> RatFunc:
    """The truncated sum of the case, summed to its truncation order."""
    return truncated_sum(case.d, case.r, case.upper_bound)


# ---------------------------------------------------------------------------
# terminating very-well-poised series (single sum)


def _vwp_term(alpha: int, bc: Sequence[int], N: int, w: int, base: int, k: int) -> QProduct:
    t = QProduct()
    t.mul_one_minus_q(alpha + 2 * base * k, 1, "very-well-poised numerator pair")
    t.mul_one_minus_q(alpha, -1, "very-well-poised denominator pair (a = 1)")
    t.mul_pochhammer(QPochSpec(alpha, base, k))
    t.mul_pochhammer(QPochSpec(base, base, k), -1)
    for e in bc:
        t.mul_pochhammer(QPochSpec(e, base, k))
        t.mul_pochhammer(QPochSpec(alpha + base - e, base, k), -1)
    t.mul_pochhammer(QPochSpec(-base * N, base, k))
    t.mul_pochhammer(QPochSpec(alpha + base * (N + 1), base, k), -1)
    t.mul_qpow(w * k)
    return t


def _vwp_series(alpha: int, bc: Sequence[int], N: int, base: int = 1) -> RatFunc:
    """Terminating very-well-poised series with paired parameters.

    ``bc`` lists the 2m free parameter exponents; each e is paired with
    a*q/e in the denominator.  The argument power per step comes out as
    w = m*alpha + base*(m + N) - sum(bc), which specialises to q**(N-nu)
    for the Karlsson-Minton parameterisation.
    """
    if len(bc) % 2:
        raise ValueError("parameter exponents must come in pairs")
    if N < 0:
        raise ValueError("termination order must be non-negative")
    m = len(bc) // 2
    w = m * alpha + base * (m + N) - sum(bc)
    return qsum(_vwp_term(alpha, bc, N, w, base, k) for k in range(N + 1))


# ---------------------------------------------------------------------------
# the multiseries transformation


@dataclass(frozen=True)
class AndrewsParams:
    """Parameters of the multiseries transformation: a = q**a_exp and the
    m >= 2 pairs (b_i, c_i) = (q**b, q**c), terminating at order N."""

    a: int
    pairs: tuple[tuple[int, int], ...]
    N: int

    def __post_init__(self) -> None:
        if len(self.pairs) < 2:
            raise ValueError("at least two parameter pairs are required")
        if self.N < 0:
            raise ValueError("termination order must be non-negative")


def andrews_lhs(p: AndrewsParams) -> RatFunc:
    """Left side: the single terminating very-well-poised series."""
    bc = [e for pair in p.pairs for e in pair]
    return _vwp_series(p.a, bc, p.N)


def _prefactor_product(alpha: int, pairs: Sequence[tuple[int, int]], N: int, base: int) -> QProduct:
    bm, cm = pairs[-1]
    t = QProduct()
    t.mul_pochhammer(QPochSpec(alpha + base, base, N))
    t.mul_pochhammer(QPochSpec(alpha + base - bm - cm, base, N))
    t.mul_pochhammer(QPochSpec(alpha + base - bm, base, N), -1)
    t.mul_pochhammer(QPochSpec(alpha + base - cm, base, N), -1)
    return t


def _compositions_at_most(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        yield ()
        return
    for head in range(total + 1):
        for rest in _compositions_at_most(parts - 1, total - head):
            yield (head,) + rest


def _multisum_terms(
    alpha: int, pairs: Sequence[tuple[int, int]], N: int, base: int
) -> Iterator[QProduct]:
    """Terms of the (m-1)-fold sum on the transformed side.

    Enumeration stops at j_1 + ... + j_{m-1} = N: beyond that the
    (q**(-N); q)_J factor vanishes identically.
    """
    m = len(pairs)
    bm, cm = pairs[-1]
    for js in _compositions_at_most(m - 1, N):
        t = QProduct()
        partial = 0
        for i, j in enumerate(js):
            b, c = pairs[i]
            t.mul_pochhammer(QPochSpec(alpha + base - b - c, base, j))
            t.mul_pochhammer(QPochSpec(base, base, j), -1)
            partial += j
            bn, cn = pairs[i + 1]
            t.mul_pochhammer(QPochSpec(bn, base, partial))
            t.mul_pochhammer(QPochSpec(cn, base, partial))
            t.mul_pochhammer(QPochSpec(alpha + base - b, base, partial), -1)
            t.mul_pochhammer(QPochSpec(alpha + base - c, base, partial), -1)
            if i < m - 2:
                t.mul_qpow((alpha + base - bn - cn) * partial)
        J = partial
        t.mul_pochhammer(QPochSpec(-base * N, base, J))
        t.mul_pochhammer(QPochSpec(bm + cm - base * N - alpha, base, J), -1)
        t.mul_qpow(base * J)
        yield t


def andrews_rhs(p: AndrewsParams) -> RatFunc:
    """Right side: prefactor times the (m-1)-fold sum."""
    pre = _prefactor_product(p.a, p.pairs, p.N, 1)
    return qsum(
        term.mul(pre) for term in _multisum_terms(p.a, p.pairs, p.N, 1)
    )


# ---------------------------------------------------------------------------
# the classical m = 2 transformation, via its own summation loops


def watson_pair(a: int, b: int, c: int, d: int, e: int, N: int) -> tuple[RatFunc, RatFunc]:
    """Both sides of the 8phi7 -> 4phi3 transformation, evaluated
    independently; the two values must be equal."""
    lhs = _vwp_series(a, [b, c, d, e], N)
    pre = _prefactor_product(a, [(b, c), (d, e)], N, 1)
    terms = []
    for j in range(N + 1):
        t = QProduct()
        t.mul_pochhammer(QPochSpec(a + 1 - b - c, 1, j))
        t.mul_pochhammer(QPochSpec(d, 1, j))
        t.mul_pochhammer(QPochSpec(e, 1, j))
        t.mul_pochhammer(QPochSpec(-N, 1, j))
        t.mul_pochhammer(QPochSpec(1, 1, j), -1)
        t.mul_pochhammer(QPochSpec(a + 1 - b, 1, j), -1)
        t.mul_pochhammer(QPochSpec(a + 1 - c, 1, j), -1)
        t.mul_pochhammer(QPochSpec(d + e - N - a, 1, j), -1)
        t.mul_qpow(j)
        t.mul(pre.copy())
        terms.append(t)
    rhs = qsum(terms)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Karlsson-Minton type summations


@dataclass(frozen=True)
class KarlssonMintonParams:
    """Parameters of the very-well-poised Karlsson-Minton summation:
    a = q**a_exp, e_j = q**(e[j]), integer shifts nondeg[j] >= 0, and
    termination order N.  The optional b / dd exponents of the full
    two-extra-parameter form are accepted only at the terminating
    specialisation dd = b + 1, b = -N (the non-terminating series is out
    of scope)."""

    a: int
    e: tuple[int, ...]
    nondeg: tuple[int, ...]
    N: int
    b: int | None = None
    dd: int | None = None

    def __post_init__(self) -> None:
        if len(self.e) != len(self.nondeg) or not self.e:
            raise ValueError("e and nondeg must be non-empty and equally long")
        if any(v < 0 for v in self.nondeg):
            raise ValueError("shifts must be non-negative")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.b is not None and self.b != -self.N:
            raise ValueError("only the terminating specialisation b = -N is supported")
        if self.dd is not None and self.dd != 1 - self.N:
            raise ValueError("only the terminating specialisation dd = 1 - N is supported")

    @property
    def nu(self) -> int:
        return sum(self.nondeg)


def gasper_terminating_sum(p: KarlssonMintonParams) -> RatFunc:
    """The terminating very-well-poised Karlsson-Minton sum; identically 0
    whenever N > nu = sum of the shifts."""
    if p.N <= p.nu:
        raise ValueError(f"requires N > nu, got N = {p.N}, nu = {p.nu}")
    bc = [x for eps, nd in zip(p.e, p.nondeg) for x in (eps, p.a + nd + 1 - eps)]
    return _vwp_series(p.a, bc, p.N)


def multi_km_sum(p: KarlssonMintonParams) -> RatFunc:
    """The vanishing (m-1)-fold sum: the multiseries transform specialised
    by b_i = a*q**(n_i+1)/e_i, c_i = e_{i+1} (indices wrapping around)."""
    m = len(p.e)
    if m < 2:
        raise ValueError("at least two parameter pairs are required")
    if p.N <= p.nu:
        raise ValueError(f"requires N > nu, got N = {p.N}, nu = {p.nu}")
    pairs = tuple(
        (p.a + p.nondeg[i] + 1 - p.e[i], p.e[(i + 1) % m]) for i in range(m)
    )
    return qsum(_multisum_terms(p.a, pairs, p.N, 1))


# ---------------------------------------------------------------------------
# proof decomposition of the theorem sums


def _decomposition_pairs(case: TheoremCase) -> tuple[tuple[int, int], ...]:
    d, r, n, m = case.d, case.r, case.n, case.depth
    half = (d + r) // 2
    if case.variant is Variant.THM1:
        return ((r, r),) * (m - 1) + ((half, d + (d - 1) * n),)
    return ((half, r),) + ((r, r),) * (m - 2) + ((r, d + (d - 2) * n),)


def proof_decomposition(case: TheoremCase) -> tuple[RatFunc, RatFunc]:
    """Rewrite the theorem sum (at its upper truncation) as
    prefactor * multisum; the product equals theorem_sum(case) exactly.

    The prefactor carries [r] and the two length-M factorial quotients in
    base q**d; the multisum is the (m-1)-fold transformed sum whose
    vanishing-order analysis yields the congruence.
    """
    if case.truncation is not Truncation.UPPER:
        raise ValueError("decomposition is defined for the upper truncation")
    d, r = case.d, case.r
    N = case.upper_bound
    pairs = _decomposition_pairs(case)
    pre = QProduct()
    pre.mul_one_minus_q(r, 1)
    pre.mul_one_minus_q(1, -1)
    pre.mul(_prefactor_product(r, pairs, N, d))
    multisum = qsum(_multisum_terms(r, pairs, N, d))
    return pre.to_ratfunc(), multisum


# ---------------------------------------------------------------------------
# randomized parameter draws for identity fuzzing

EXPONENT_SPAN = 12  # |exponent| bound for randomized draws


def draw_andrews_params(rng: random.Random, m: int, N: int | None = None,
                        n_max: int = 4) -> AndrewsParams:
    order = rng.randint(0, n_max) if N is None else N
    a = rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN)
    pairs = tuple(
        (rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN), rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN))
        for _ in range(m)
    )
    return AndrewsParams(a=a, pairs=pairs, N=order)


def draw_watson_exponents(rng: random.Random, N: int | None = None,
                          n_max: int = 4) -> tuple[int, int, int, int, int, int]:
    order = rng.randint(0, n_max) if N is None else N
    vals = [rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN) for _ in range(5)]
    return (*vals, order)


def draw_km_params(rng: random.Random, m: int, N: int | None = None) -> KarlssonMintonParams:
    if N is None:
        nondeg = tuple(rng.randint(0, 2) for _ in range(m))
        order = sum(nondeg) + rng.randint(1, 3)
    else:
        nondeg = []
        budget = N - 1
        for _ in range(m):
            v = rng.randint(0, budget) if budget > 0 else 0
            nondeg.append(v)
            budget -= v
        nondeg = tuple(nondeg)
        order = N
    a = rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN)
    eps = tuple(rng.randint(-EXPONENT_SPAN, EXPONENT_SPAN) for _ in range(m))
    return KarlssonMintonParams(a=a, e=eps, nondeg=nondeg, N=order)


def sample_until_valid(rng: random.Random, draw, check, max_attempts: int = 500):
    """Run ``check(draw(rng))`` until no degeneracy error occurs.

    Returns (params, result, resamples); degenerate draws (vanishing
    denominators) are discarded and counted.
    """
    resamples = 0
    while True:
        params = draw(rng)
        try:
            return params, check(params), resamples
        except VanishingDenominator:
            resamples += 1
            if resamples >= max_attempts:
                raise
