"""Exact arithmetic over Z[q]: dense polynomials, canonical rational
functions, cyclotomic polynomials and their valuations.

Conventions used everywhere in this package:

* ``Poly`` stores dense integer coefficients, constant term first, with no
  trailing zeros; the zero polynomial is the empty tuple.  Coefficients are
  Python ints, so nothing ever overflows or rounds.
* ``RatFunc`` is the universal value type for q-expressions (it absorbs
  negative powers of q).  It is always canonical: gcd(num, den) = 1, the
  denominator is non-zero with positive leading coefficient, and zero is
  represented as 0/1.
* Values are immutable after construction and may be shared freely between
  threads.  The only shared state is the memo table behind ``cyclotomic``
  and ``q_integer``; inserts are idempotent, so concurrent reads are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

__all__ = [
    "ExactDivisionError",
    "InfiniteValuation",
    "INFINITE",
    "Poly",
    "RatFunc",
    "ValuationReport",
    "ZERO",
    "ONE",
    "Q",
    "cyclotomic",
    "divisors",
    "phi_valuation",
    "poly_gcd",
    "q_integer",
    "ratfunc_normalize",
    "rational_p_valuation",
]


class ExactDivisionError(ArithmeticError):
    """Raised when a polynomial division that must be exact is not."""


# ---------------------------------------------------------------------------
# Polynomials


class Poly:
    """Dense univariate polynomial over Z; coeffs[i] multiplies q**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def monomial(exponent: int, coefficient: int = 1) -> "Poly":
        if exponent < 0:
            raise ValueError("monomial exponent must be non-negative")
        return Poly((0,) * exponent + (coefficient,))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly((other,))
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other: Union["Poly", int]) -> "Poly":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other: Union["Poly", int]) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Union["Poly", int]) -> "Poly":
        return _as_poly(other) + (-self)

    def __mul__(self, other: Union["Poly", int]) -> "Poly":
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        # iterate the operand with fewer non-zero entries on the outside
        if sum(1 for c in a if c) > sum(1 for c in b if c):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power; use RatFunc")
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shifted(self, k: int) -> "Poly":
        """Multiply by q**k (k >= 0)."""
        if k < 0:
            raise ValueError("negative shift")
        if self.is_zero or k == 0:
            return self
        return Poly((0,) * k + self.coeffs)

    def split_monomial(self) -> tuple[int, "Poly"]:
        """Write self = q**s * p with p(0) != 0; returns (s, p)."""
        if self.is_zero:
            return 0, self
        s = 0
        while self.coeffs[s] == 0:
            s += 1
        return s, Poly(self.coeffs[s:])

    @property
    def content(self) -> int:
        """Non-negative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
            if g == 1:
                break
        return g

    def primitive_part(self) -> "Poly":
        """Divide out the content, preserving the sign of the leading term."""
        c = self.content
        if c in (0, 1):
            return self
        return Poly(x // c for x in self.coeffs)

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def evaluate(self, x):
        """Horner evaluation; works for int and Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_monic(self, div: "Poly") -> tuple["Poly", "Poly"]:
        """Quotient and remainder by a monic divisor (always exact over Z)."""
        if div.lead != 1:
            raise ValueError("divisor must be monic")
        dd = div.degree
        if self.degree < dd:
            return ZERO, self
        rem = list(self.coeffs)
        quot = [0] * (self.degree - dd + 1)
        body = [(j, c) for j, c in enumerate(div.coeffs[:-1]) if c]
        for i in range(self.degree, dd - 1, -1):
            c = rem[i]
            if c:
                k = i - dd
                quot[k] = c
                rem[i] = 0
                for j, dj in body:
                    rem[k + j] -= c * dj
        return Poly(quot), Poly(rem[:dd])

    def div_exact(self, div: "Poly") -> "Poly":
        """Exact division in Z[q]; raises ExactDivisionError otherwise."""
        if div.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return ZERO
        if div.lead == 1:
            q, r = self.divmod_monic(div)
            if not r.is_zero:
                raise ExactDivisionError("division left a remainder")
            return q
        dd, lead = div.degree, div.lead
        if self.degree < dd:
            raise ExactDivisionError("divisor degree exceeds dividend degree")
        rem = list(self.coeffs)
        quot = [0] * (self.degree - dd + 1)
        body = [(j, c) for j, c in enumerate(div.coeffs[:-1]) if c]
        for i in range(self.degree, dd - 1, -1):
            c = rem[i]
            if c:
                if c % lead:
                    raise ExactDivisionError("leading coefficient does not divide")
                t = c // lead
                k = i - dd
                quot[k] = t
                rem[i] = 0
                for j, dj in body:
                    rem[k + j] -= t * dj
        if any(rem):
            raise ExactDivisionError("division left a remainder")
        return Poly(quot)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "q" if i == 1 else f"q^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = Poly()
ONE = Poly((1,))
Q = Poly((0, 1))


def _as_poly(x: Union[Poly, int]) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly((x,))
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


# ---------------------------------------------------------------------------
# GCD

_HEURISTIC_MIN_DEGREE = 24


def _positive_primitive(p: Poly) -> Poly:
    p = p.primitive_part()
    return -p if p.lead < 0 else p


def _pseudo_rem(f: Poly, g: Poly) -> Poly:
    """Fraction-free remainder of f by g (differs from rem by a power of lc(g))."""
    dg, lg = g.degree, g.lead
    r = f
    while not r.is_zero and r.degree >= dg:
        r = r * lg - g * Poly.monomial(r.degree - dg, r.lead)
    return r


def _gcd_prs(f: Poly, g: Poly) -> Poly:
    # primitive remainder sequence: content is stripped after every step,
    # which keeps coefficient growth polynomial instead of exponential
    if f.degree < g.degree:
        f, g = g, f
    while not g.is_zero:
        r = _pseudo_rem(f, g)
        f, g = g, r.primitive_part()
    return f


def _balanced_digits(n: int, xi: int) -> Poly:
    coeffs = []
    half = xi // 2
    while n:
        d = n % xi
        if d > half:
            d -= xi
        coeffs.append(d)
        n = (n - d) // xi
    return Poly(coeffs)


def _gcd_heuristic(f: Poly, g: Poly) -> Poly | None:
    """Evaluation/interpolation gcd; returns None when no attempt verifies.

    A candidate is only accepted after exact trial division into both
    inputs, so a successful return is always a genuine common divisor.
    """
    xi = 2 * min(f.height, g.height) + 29
    for _ in range(6):
        fv, gv = f.evaluate(xi), g.evaluate(xi)
        if fv and gv:
            cand = _balanced_digits(math.gcd(fv, gv), xi)
            if not cand.is_zero:
                cand = _positive_primitive(cand)
                try:
                    f.div_exact(cand)
                    g.div_exact(cand)
                except ExactDivisionError:
                    pass
                else:
                    return cand
        xi = xi * 73794 // 27011 + 5
    return None


def poly_gcd(a: Union[Poly, int], b: Union[Poly, int]) -> Poly:
    """Primitive gcd in Z[q] with positive leading coefficient.

    The result has integer content 1 and divides both inputs exactly;
    gcd(0, 0) = 0 by convention.
    """
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero and b.is_zero:
        return ZERO
    if a.is_zero:
        return _positive_primitive(b)
    if b.is_zero:
        return _positive_primitive(a)
    sa, pa = a.split_monomial()
    sb, pb = b.split_monomial()
    shift = min(sa, sb)
    pa, pb = pa.primitive_part(), pb.primitive_part()
    if pa.degree == 0 or pb.degree == 0:
        g = ONE
    else:
        g = None
        if min(pa.degree, pb.degree) > _HEURISTIC_MIN_DEGREE:
            g = _gcd_heuristic(pa, pb)
        if g is None:
            g = _positive_primitive(_gcd_prs(pa, pb))
    return g.shifted(shift)


# ---------------------------------------------------------------------------
# Cyclotomic polynomials and q-integers


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    """Sorted positive divisors of n (n >= 1)."""
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return tuple(small + large[::-1])


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """n-th cyclotomic polynomial, via q**n - 1 = prod over divisors.

    Roots of unity are never materialised: the polynomial is obtained by
    exact division of q**n - 1 by the lower-index cyclotomics.
    """
    if n < 1:
        raise ValueError("cyclotomic index must be a positive integer")
    p = Poly((-1,) + (0,) * (n - 1) + (1,))
    for m in divisors(n):
        if m < n:
            p = p.div_exact(cyclotomic(m))
    return p


@lru_cache(maxsize=None)
def q_integer(n: int) -> Poly:
    """[n] = 1 + q + ... + q**(n-1); [0] = 0."""
    if n < 0:
        raise ValueError("q-integer index must be non-negative")
    return Poly((1,) * n)


# ---------------------------------------------------------------------------
# Rational functions


class RatFunc:
    """Canonical fraction num/den of two integer polynomials in q."""

    __slots__ = ("num", "den")

    def __init__(self, num: Union[Poly, int], den: Union[Poly, int] = ONE):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num, self.den = ZERO, ONE
            return
        g = poly_gcd(num, den)
        if g.degree > 0 or g.coeffs[0] != 1:
            num, den = num.div_exact(g), den.div_exact(g)
        c = math.gcd(num.content, den.content)
        if c > 1:
            num = Poly(x // c for x in num.coeffs)
            den = Poly(x // c for x in den.coeffs)
        if den.lead < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def _from_canonical(cls, num: Poly, den: Poly) -> "RatFunc":
        """Trusted constructor for values already in canonical form."""
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_poly(self) -> bool:
        return self.den == ONE

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Poly)):
            other = RatFunc(other)
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __neg__(self) -> "RatFunc":
        return RatFunc._from_canonical(-self.num, self.den)

    def __add__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        other = _as_ratfunc(other)
        g = poly_gcd(self.den, other.den)
        sd, od = self.den.div_exact(g), other.den.div_exact(g)
        num = self.num * od + other.num * sd
        return RatFunc(num, sd * od * g)

    __radd__ = __add__

    def __sub__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        return _as_ratfunc(other) + (-self)

    def __mul__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        other = _as_ratfunc(other)
        if self.is_zero or other.is_zero:
            return RATFUNC_ZERO
        a, d = self.num, other.den
        g = poly_gcd(a, d)
        if g != ONE:
            a, d = a.div_exact(g), d.div_exact(g)
        b, c = self.den, other.num
        g = poly_gcd(c, b)
        if g != ONE:
            c, b = c.div_exact(g), b.div_exact(g)
        num, den = a * c, b * d
        cont = math.gcd(num.content, den.content)
        if cont > 1:
            num = Poly(x // cont for x in num.coeffs)
            den = Poly(x // cont for x in den.coeffs)
        return RatFunc._from_canonical(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        num, den = self.den, self.num
        if den.lead < 0:
            num, den = -num, -den
        return RatFunc._from_canonical(num, den)

    def __truediv__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        return self * _as_ratfunc(other).inverse()

    def __rtruediv__(self, other: Union["RatFunc", Poly, int]) -> "RatFunc":
        return _as_ratfunc(other) * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = RATFUNC_ONE
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def evaluate(self, t) -> Fraction:
        """Exact value at q = t; raises ZeroDivisionError on a pole."""
        dv = self.den.evaluate(Fraction(t))
        if dv == 0:
            raise ZeroDivisionError(f"denominator vanishes at q = {t}")
        return Fraction(self.num.evaluate(Fraction(t))) / dv

    def __repr__(self) -> str:
        if self.is_poly:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / ({self.den}))"


RATFUNC_ZERO = RatFunc._from_canonical(ZERO, ONE)
RATFUNC_ONE = RatFunc._from_canonical(ONE, ONE)


def _as_ratfunc(x: Union[RatFunc, Poly, int]) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(_as_poly(x))


def ratfunc_normalize(num: Union[Poly, int], den: Union[Poly, int]) -> RatFunc:
    """Canonical fraction num/den; rejects a zero denominator."""
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# Valuations


class InfiniteValuation:
    """Valuation of the zero function; compares greater than every integer."""

    _instance: "InfiniteValuation | None" = None

    def __new__(cls) -> "InfiniteValuation":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (InfiniteValuation, ())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, InfiniteValuation)

    def __hash__(self) -> int:
        return hash("InfiniteValuation")

    def __ge__(self, other) -> bool:
        return True

    def __gt__(self, other) -> bool:
        return not isinstance(other, InfiniteValuation)

    def __le__(self, other) -> bool:
        return isinstance(other, InfiniteValuation)

    def __lt__(self, other) -> bool:
        return False

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = InfiniteValuation()

Valuation = Union[int, InfiniteValuation]


def _poly_phi_valuation(p: Poly, phi: Poly, cap: int | None = None) -> int:
    """Multiplicity of the monic factor phi in p (p != 0)."""
    count = 0
    probe = phi.evaluate(2)
    use_probe = probe not in (-1, 0, 1)
    while cap is None or count < cap:
        if use_probe and p.evaluate(2) % probe:
            break
        quot, rem = p.divmod_monic(phi)
        if not rem.is_zero:
            break
        p = quot
        count += 1
        if p.is_zero:
            break
    return count


def phi_valuation(f: Union[RatFunc, Poly, int], m: int) -> Valuation:
    """Exponent of the m-th cyclotomic polynomial in f.

    Negative when the factor lives in the denominator; INFINITE for f = 0
    (a distinct outcome, never an integer).
    """
    if m < 1:
        raise ValueError("cyclotomic index must be a positive integer")
    f = _as_ratfunc(f)
    if f.is_zero:
        return INFINITE
    phi = cyclotomic(m)
    return _poly_phi_valuation(f.num, phi) - _poly_phi_valuation(f.den, phi)


def rational_p_valuation(x: Union[Fraction, int], p: int) -> Valuation:
    """Standard p-adic valuation of an exact rational; INFINITE for x = 0."""
    if p < 2 or any(p % k == 0 for k in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError(f"p = {p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INFINITE

    def vp(n: int) -> int:
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    return vp(x.numerator) - vp(x.denominator)


@dataclass
class ValuationReport:
    """Achieved vs required cyclotomic valuations for one congruence check.

    ``passed`` is true exactly when every required entry is met.
    """

    achieved: dict[int, Valuation]
    required: dict[int, int]
    passed: bool

    @classmethod
    def compare(cls, achieved: dict[int, Valuation], required: dict[int, int]) -> "ValuationReport":
        ok = all(achieved[m] >= need for m, need in required.items())
        return cls(achieved=achieved, required=required, passed=ok)
