"""q-shifted factorials, their products and powers, and the exact summation
kernel used by every series evaluator in the package.

Every q-expression handled here is a product of factors (1 - q**e) with
integer e, times an integer power of q and a sign.  ``QProduct`` keeps that
structure explicit: folding each factor through

    1 - q**e  =  -(q**e - 1)            for e > 0,
    1 - q**e  =  (q**|e| - 1) / q**|e|  for e < 0,

leaves sign * q**qexp * prod (q**a - 1)**mult with every a >= 1.  Sums of
such terms are accumulated over a common factored denominator and reduced
against cyclotomic factors only, so no general polynomial gcd is ever
needed on the large numerators the theorem sums produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .exactalg import (
    ONE,
    Poly,
    RATFUNC_ZERO,
    RatFunc,
    cyclotomic,
    divisors,
    _poly_phi_valuation,
)

__all__ = [
    "QPochSpec",
    "QProduct",
    "VanishingDenominator",
    "q_pochhammer",
    "q_poch_product",
    "qsum",
    "rising_factorial",
]


class VanishingDenominator(ZeroDivisionError):
    """An identically-zero factor was raised to a negative power."""


@dataclass(frozen=True)
class QPochSpec:
    """The q-shifted factorial (q**e; q**d)_k with e = base_exponent,
    d = step, k = length.  The base exponent may be negative."""

    base_exponent: int
    step: int
    length: int

    def __post_init__(self) -> None:
        if self.step < 1:
            raise ValueError("step must be a positive integer")
        if self.length < 0:
            raise ValueError("length must be non-negative")

    def factor_exponents(self) -> range:
        return range(
            self.base_exponent,
            self.base_exponent + self.step * self.length,
            self.step,
        )

    def __str__(self) -> str:
        return f"(q^{self.base_exponent}; q^{self.step})_{self.length}"


class QProduct:
    """sign * q**qexp * prod (q**a - 1)**mult over a >= 1, or zero.

    Mutable builder; callers assemble a product factor by factor and then
    either expand it (``to_ratfunc``) or hand it to ``qsum``.
    """

    __slots__ = ("sign", "qexp", "factors", "is_zero")

    def __init__(self) -> None:
        self.sign = 1
        self.qexp = 0
        self.factors: dict[int, int] = {}
        self.is_zero = False

    def copy(self) -> "QProduct":
        out = QProduct()
        out.sign = self.sign
        out.qexp = self.qexp
        out.factors = dict(self.factors)
        out.is_zero = self.is_zero
        return out

    def mul_one_minus_q(self, e: int, power: int = 1, context: str = "") -> "QProduct":
        """Multiply by (1 - q**e)**power."""
        if power == 0:
            return self
        if e == 0:
            if power < 0:
                what = context or f"(1 - q^0)^{power}"
                raise VanishingDenominator(f"vanishing denominator: {what}")
            self.is_zero = True
            return self
        a = abs(e)
        m = self.factors.get(a, 0) + power
        if m:
            self.factors[a] = m
        else:
            del self.factors[a]
        if e > 0:
            if power % 2:
                self.sign = -self.sign
        else:
            self.qexp += e * power
        return self

    def mul_qpow(self, w: int) -> "QProduct":
        self.qexp += w
        return self

    def mul_pochhammer(self, spec: QPochSpec, power: int = 1) -> "QProduct":
        for e in spec.factor_exponents():
            self.mul_one_minus_q(e, power, context=f"{spec}^{power}")
        return self

    def mul(self, other: "QProduct") -> "QProduct":
        self.sign *= other.sign
        self.qexp += other.qexp
        for a, m in other.factors.items():
            new = self.factors.get(a, 0) + m
            if new:
                self.factors[a] = new
            else:
                del self.factors[a]
        self.is_zero = self.is_zero or other.is_zero
        return self

    def evaluate(self, t) -> Fraction:
        """Exact numeric value at q = t (for cross-checks)."""
        if self.is_zero:
            return Fraction(0)
        t = Fraction(t)
        out = Fraction(self.sign) * t**self.qexp
        for a, m in self.factors.items():
            base = t**a - 1
            if base == 0 and m < 0:
                raise ZeroDivisionError(f"(q^{a} - 1) vanishes at q = {t}")
            out *= base**m
        return out

    def to_ratfunc(self) -> RatFunc:
        if self.is_zero:
            return RATFUNC_ZERO
        return qsum([self])

    def __repr__(self) -> str:
        if self.is_zero:
            return "QProduct(0)"
        body = " * ".join(f"(q^{a} - 1)^{m}" for a, m in sorted(self.factors.items()))
        return f"QProduct({'-' if self.sign < 0 else ''}q^{self.qexp} {body})"


# ---------------------------------------------------------------------------
# expansion helpers (plain coefficient lists, constant term first)


def _mul_binomial(cs: list[int], a: int) -> list[int]:
    """Multiply a coefficient list by (q**a - 1)."""
    n = len(cs)
    if a >= n:
        return [-c for c in cs] + [0] * (a - n) + cs
    head = [-c for c in cs[:a]]
    mid = [x - y for x, y in zip(cs, cs[a:])]
    tail = list(cs[n - a:])
    return head + mid + tail


def _expand_factors(factors: dict[int, int], sign: int = 1) -> list[int]:
    cs = [sign]
    for a in sorted(factors):
        for _ in range(factors[a]):
            cs = _mul_binomial(cs, a)
    return cs


def qsum(products: Iterable[QProduct]) -> RatFunc:
    """Exact sum of QProduct terms as a canonical rational function.

    All terms are placed over the least common factored denominator, the
    numerators are expanded by repeated binomial multiplication, and the
    final fraction is reduced by cancelling cyclotomic factors (the only
    irreducible factors the denominator can contain).
    """
    terms = [t for t in products if not t.is_zero]
    if not terms:
        return RATFUNC_ZERO

    den_need: dict[int, int] = {}
    min_qexp = 0
    for t in terms:
        for a, m in t.factors.items():
            if m < 0 and -m > den_need.get(a, 0):
                den_need[a] = -m
        if t.qexp < min_qexp:
            min_qexp = t.qexp
    qden = -min_qexp

    acc: list[int] = []
    for t in terms:
        mults: dict[int, int] = dict(den_need)
        for a, m in t.factors.items():
            new = mults.get(a, 0) + m
            if new:
                mults[a] = new
            else:
                mults.pop(a, None)
        cs = _expand_factors(mults, t.sign)
        shift = t.qexp + qden
        top = shift + len(cs)
        if top > len(acc):
            acc.extend([0] * (top - len(acc)))
        for i, c in enumerate(cs):
            if c:
                acc[shift + i] += c
    num = Poly(acc)
    if num.is_zero:
        return RATFUNC_ZERO

    # reduce: the denominator factors only into q and cyclotomics
    den_cyc: dict[int, int] = {}
    for a, m in den_need.items():
        for c in divisors(a):
            den_cyc[c] = den_cyc.get(c, 0) + m
    cancelled: dict[int, int] = {}
    for c in sorted(den_cyc):
        v = _poly_phi_valuation(num, cyclotomic(c), cap=den_cyc[c])
        if v:
            cancelled[c] = v
            phi = cyclotomic(c)
            for _ in range(v):
                num = num.divmod_monic(phi)[0]
    low, num = num.split_monomial()
    qstrip = min(low, qden)
    if low > qstrip:
        num = num.shifted(low - qstrip)

    den = Poly(_expand_factors(den_need))
    for c, v in cancelled.items():
        phi = cyclotomic(c)
        for _ in range(v):
            den = den.divmod_monic(phi)[0]
    den = den.shifted(qden - qstrip)
    if den.lead < 0:
        num, den = -num, -den
    return RatFunc._from_canonical(num, den)


# ---------------------------------------------------------------------------
# public q-objects


def q_pochhammer(spec: QPochSpec) -> RatFunc:
    """(q**e; q**d)_k as a canonical rational function.

    Negative base exponents put pure powers of q into the denominator,
    e.g. (q**-1; q**5)_1 = -(1 - q)/q.
    """
    return QProduct().mul_pochhammer(spec).to_ratfunc()


def q_poch_product(
    specs: Sequence[tuple[QPochSpec, int]],
) -> RatFunc:
    """Product of q-shifted factorials raised to integer powers.

    Raising an identically-zero factorial to a negative power raises
    VanishingDenominator naming the offending spec.
    """
    acc = QProduct()
    for spec, power in specs:
        acc.mul_pochhammer(spec, power)
    return acc.to_ratfunc()


def rising_factorial(a: Union[Fraction, int], k: int) -> Fraction:
    """Classical rising factorial a (a+1) ... (a+k-1) over exact rationals."""
    if k < 0:
        raise ValueError("length must be non-negative")
    out = Fraction(1)
    a = Fraction(a)
    for i in range(k):
        out *= a + i
    return out
