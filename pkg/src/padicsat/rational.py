"""Exact rational arithmetic: p-adic valuations, leading digits, power sums.

Everything here is computed exactly with `fractions.Fraction`; no floats enter
any arithmetic path.  The two float infinities are used only as order sentinels
for the extended integers Z u {-inf, +inf}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import InputError, OverflowGuardError

INF = float("inf")
NEG_INF = float("-inf")

#: An element of Z u {-inf, +inf}: a plain int, or one of the two sentinels.
ExtInt = Union[int, float]

#: Largest |exponent| a power sum will materialize by default.
DEFAULT_EXPONENT_GUARD = 1 << 20

RationalLike = Union[int, str, Fraction]


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or "a/b" string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise InputError(f"not an exact rational: {x!r}")


def is_finite(v: ExtInt) -> bool:
    return v != INF and v != NEG_INF


def ext_add(a: ExtInt, b: ExtInt) -> ExtInt:
    """Addition on Z u {-inf, +inf}.

    The mixed case inf + (-inf) is deliberately rejected so that bugs surface;
    the one algorithm that needs a convention for it goes through
    :meth:`PivotCosts.doubled_cost` instead.
    """
    if (a == INF and b == NEG_INF) or (a == NEG_INF and b == INF):
        raise ArithmeticError("ext_add of opposite infinities is undefined")
    if not is_finite(a):
        return a
    if not is_finite(b):
        return b
    return a + b


def pivot_sum(a: ExtInt, b: ExtInt) -> ExtInt:
    """Extended addition where +inf absorbs: inf + (-inf) = inf.

    This is the convention used when ranking pivot candidates (a zero entry
    must never win a pivot contest, even in a column whose bound is -inf).
    """
    if a == INF or b == INF:
        return INF
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


# ---------------------------------------------------------------------------
# primality

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24, ample here)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_KNOWN_PRIMES: set[int] = set()


def check_prime(p: int) -> int:
    if p not in _KNOWN_PRIMES:
        if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
            raise InputError(f"modulus {p!r} is not prime")
        _KNOWN_PRIMES.add(p)
    return p


# ---------------------------------------------------------------------------
# valuations

def int_valuation(n: int, p: int) -> ExtInt:
    """Largest e with p**e dividing n, or +inf for n == 0.

    Uses repeated squaring of the divisor so huge powers (think 2**(10**6))
    cost O(log e) big-int divisions instead of e of them.
    """
    if n == 0:
        return INF
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    if n % p:
        return 0
    powers = []
    q = p
    while n % q == 0:
        powers.append(q)
        q *= q
    v = 1 << (len(powers) - 1)
    n //= powers[-1]
    for i in range(len(powers) - 2, -1, -1):
        if n % powers[i] == 0:
            n //= powers[i]
            v += 1 << i
    return v


def valuation(q: RationalLike, p: int) -> ExtInt:
    """p-adic valuation of a rational; valuation(0, p) is +inf.

    For q = a/b in lowest terms this is v_p(a) - v_p(b); only one of the two
    terms can be nonzero.
    """
    check_prime(p)
    q = as_fraction(q)
    if q == 0:
        return INF
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def leading_digit(q: RationalLike, p: int) -> int:
    """The unique digit i in 1..p-1 with v_p(q - i * p**v_p(q)) > v_p(q).

    Equivalently: write q = u * p**n with u a p-adic unit; the digit is the
    residue of u mod p.  Defined for q != 0 only.
    """
    check_prime(p)
    q = as_fraction(q)
    if q == 0:
        raise InputError("leading digit of 0 is undefined")
    a, b = q.numerator, q.denominator
    a //= p ** int_valuation(a, p)
    b //= p ** int_valuation(b, p)
    return a * pow(b, -1, p) % p


# ---------------------------------------------------------------------------
# power sums

def _normalized_terms(terms: Iterable[tuple[RationalLike, int]]) -> tuple[tuple[Fraction, int], ...]:
    merged: dict[int, Fraction] = {}
    for coeff, exp in terms:
        if not isinstance(exp, int) or isinstance(exp, bool):
            raise InputError(f"power-sum exponent must be an int, got {exp!r}")
        c = as_fraction(coeff)
        merged[exp] = merged.get(exp, Fraction(0)) + c
    return tuple(sorted(((c, e) for e, c in merged.items() if c != 0), key=lambda t: t[1]))


@dataclass(frozen=True)
class PowerSum:
    """A finite formal sum of terms a * p**c with rational a and integer c.

    The normal form keeps exponents strictly increasing and coefficients
    nonzero; the empty sum denotes 0.  The represented value can be far too
    large to write down (exponents near 10**6 are routine), so arithmetic and
    valuation never materialize p**c unless explicitly asked to.
    """

    prime: int
    terms: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        check_prime(self.prime)
        object.__setattr__(self, "terms", _normalized_terms(self.terms))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "PowerSum":
        return cls(p, ())

    @classmethod
    def from_rational(cls, p: int, q: RationalLike) -> "PowerSum":
        """The one-term sum q * p**0."""
        return cls(p, ((as_fraction(q), 0),))

    # -- ring-ish operations -----------------------------------------------

    def _require_same_prime(self, other: "PowerSum") -> None:
        if self.prime != other.prime:
            raise InputError(f"mixed primes {self.prime} and {other.prime}")

    def __add__(self, other: "PowerSum") -> "PowerSum":
        if not isinstance(other, PowerSum):
            return NotImplemented
        self._require_same_prime(other)
        return PowerSum(self.prime, self.terms + other.terms)

    def __neg__(self) -> "PowerSum":
        return PowerSum(self.prime, tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self + (-other)

    def scale(self, r: RationalLike) -> "PowerSum":
        """Multiply by a rational scalar."""
        r = as_fraction(r)
        if r == 0:
            return PowerSum.zero(self.prime)
        return PowerSum(self.prime, tuple((c * r, e) for c, e in self.terms))

    def shift(self, k: int) -> "PowerSum":
        """Multiply by p**k, i.e. translate every exponent by k."""
        return PowerSum(self.prime, tuple((c, e + k) for c, e in self.terms))

    def is_zero(self) -> bool:
        """Whether the represented value is zero.

        Terms at distinct exponents can still cancel numerically, e.g.
        1@1 + (-1/3)@2 over p = 3; an empty term list is sufficient but not
        necessary.  The valuation merge decides the general case exactly.
        """
        if not self.terms:
            return True
        if len(self.terms) == 1:
            return False
        return self.valuation() == INF

    # -- the interesting part ----------------------------------------------

    def valuation(self) -> ExtInt:
        """p-adic valuation of the represented value, without materializing.

        Each term is first rewritten so its coefficient is a p-adic unit
        (a, c) -> (a * p**-v_p(a), c + v_p(a)).  If the minimal exponent is
        then attained exactly once it is the valuation, by the ultrametric
        equality case.  Otherwise two minimal terms are merged and the loop
        repeats; every merge removes a term, so at most len(terms) merges run.
        """
        p = self.prime
        pairs: list[tuple[Fraction, int]] = []
        for coeff, exp in self.terms:
            v = valuation(coeff, p)
            pairs.append((coeff / Fraction(p) ** v, exp + v))
        while True:
            if not pairs:
                return INF
            low = min(e for _, e in pairs)
            at_low = [i for i, (_, e) in enumerate(pairs) if e == low]
            if len(at_low) == 1:
                return low
            i, j = at_low[0], at_low[1]
            merged = pairs[i][0] + pairs[j][0]
            rest = [pairs[k] for k in range(len(pairs)) if k != i and k != j]
            if merged != 0:
                v = valuation(merged, p)
                rest.append((merged / Fraction(p) ** v, low + v))
            pairs = rest

    def materialize(self, guard: int = DEFAULT_EXPONENT_GUARD) -> Fraction:
        """Evaluate to an exact Fraction; refuse exponents beyond the guard."""
        total = Fraction(0)
        p = Fraction(self.prime)
        for coeff, exp in self.terms:
            if abs(exp) > guard:
                raise OverflowGuardError(
                    f"exponent {exp} exceeds materialization guard {guard}"
                )
            total += coeff * p ** exp
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}@{e}" for c, e in self.terms)
