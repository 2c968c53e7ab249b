"""Exact arithmetic foundation: half-integer quantum numbers, big rationals,
big-integer combinatorics, and canonical signed-radical numbers.

Every value in this package is exact.  Rational numbers are
:class:`fractions.Fraction` (re-exported as ``BigRational``); irrational
values are :class:`RadicalSum`, finite sums ``sum_i c_i * sqrt(k_i)`` with
rational coefficients and distinct squarefree integer kernels.  Equality of
two RadicalSums is equality of their term maps, so agreement checks carry no
tolerance anywhere.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "BigRational",
    "HalfInt",
    "KernelBoundError",
    "NegativeRadicandError",
    "RadicalSum",
    "Rationalish",
    "binomial",
    "canonical_sqrt",
    "factorial",
    "sum_signed_sqrts",
    "to_decimal",
]

#: Exact ratio of arbitrary-precision integers, always in lowest terms with a
#: positive denominator.  The stdlib type satisfies the contract as-is.
BigRational = Fraction

Rationalish = Union[int, Fraction]

#: Default trial-division bound for squarefree factorization.  Radicands in
#: this package are ratios of factorial/binomial products, so every prime
#: factor is bounded by the largest factorial argument; 1000 covers all
#: couplings with 2j <= 200 with room to spare.
DEFAULT_PRIME_BOUND = 1000


class NegativeRadicandError(ValueError):
    """Raised when a square root of a negative rational is requested.

    No radicand in the coupling formulas is ever negative; hitting this means
    an upstream index bug, so it is an error rather than a NaN-like value.
    """


class KernelBoundError(ValueError):
    """Raised when a residual factor cannot be certified squarefree.

    Canonicalization refuses to guess: if trial division up to the prime
    bound leaves a composite that might hide a square, we fail loudly instead
    of silently mis-canonicalizing.
    """


# ---------------------------------------------------------------------------
# Half-integers
# ---------------------------------------------------------------------------


class HalfInt:
    """An angular-momentum quantum number, stored exactly as its doubled value.

    ``HalfInt("3/2").twice == 3``.  Sums, differences and comparisons are
    exact integer arithmetic on the doubled representation; loop bounds in
    the coupling algebra therefore stay plain integers.
    """

    __slots__ = ("twice",)

    def __init__(self, value: Union["HalfInt", int, str, float, Fraction]):
        self.twice = _coerce_twice(value)

    @classmethod
    def from_twice(cls, twice: int) -> "HalfInt":
        """Build from the doubled integer value (``from_twice(3)`` is 3/2)."""
        if not isinstance(twice, int):
            raise TypeError(f"doubled value must be an int, got {twice!r}")
        obj = object.__new__(cls)
        obj.twice = twice
        return obj

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __add__(self, other: Union["HalfInt", int]) -> "HalfInt":
        return HalfInt.from_twice(self.twice + _coerce_twice(other))

    def __sub__(self, other: Union["HalfInt", int]) -> "HalfInt":
        return HalfInt.from_twice(self.twice - _coerce_twice(other))

    def __neg__(self) -> "HalfInt":
        return HalfInt.from_twice(-self.twice)

    def __abs__(self) -> "HalfInt":
        return HalfInt.from_twice(abs(self.twice))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (HalfInt, int)):
            return self.twice == _coerce_twice(other)
        return NotImplemented

    def __lt__(self, other: Union["HalfInt", int]) -> bool:
        return self.twice < _coerce_twice(other)

    def __le__(self, other: Union["HalfInt", int]) -> bool:
        return self.twice <= _coerce_twice(other)

    def __gt__(self, other: Union["HalfInt", int]) -> bool:
        return self.twice > _coerce_twice(other)

    def __ge__(self, other: Union["HalfInt", int]) -> bool:
        return self.twice >= _coerce_twice(other)

    def __hash__(self) -> int:
        return hash(self.twice)

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({str(self)!r})"


def _coerce_twice(value) -> int:
    """Doubled-integer value of anything that denotes a half-integer."""
    if isinstance(value, HalfInt):
        return value.twice
    if isinstance(value, int):
        return 2 * value
    if isinstance(value, (str, float, Fraction)):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError, OverflowError):
            raise ValueError(f"not a half-integer: {value!r}") from None
        if frac.denominator == 1:
            return 2 * frac.numerator
        if frac.denominator == 2:
            return frac.numerator
        raise ValueError(f"not a half-integer: {value!r}")
    raise TypeError(f"cannot interpret {value!r} as a half-integer")


# ---------------------------------------------------------------------------
# Big-integer combinatorics
# ---------------------------------------------------------------------------


def factorial(n: int) -> int:
    """n! as an exact big integer (n >= 0)."""
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with the generalized-zero convention.

    Returns 0 for k < 0 or k > n, which lets summation formulas run over
    loose index ranges and truncate themselves.  n must be >= 0.
    """
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# Squarefree canonicalization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _primes_up_to(bound: int) -> tuple[int, ...]:
    """All primes <= bound, by sieve.  Cached; safe to race (idempotent)."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _split_square(n: int, bound: int) -> tuple[int, int]:
    """Write n = root**2 * kernel with kernel squarefree (n > 0).

    Trial division by primes <= bound, with two exact escape hatches for a
    residual r whose prime factors all exceed the bound: a perfect square
    folds into the root, and r < bound**3 is provably squarefree (it can only
    be p or p*q).  Anything else raises KernelBoundError.
    """
    root = 1
    kernel = 1
    exhausted = True
    for p in _primes_up_to(bound):
        if p * p > n:
            exhausted = False
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            root *= p ** (e >> 1)
            if e & 1:
                kernel *= p
    if n == 1:
        return root, kernel
    if not exhausted:
        # no factor <= sqrt(n): the residual is prime, hence squarefree
        return root, kernel * n
    s = isqrt(n)
    if s * s == n:
        return root * s, kernel
    if n < bound * bound * bound:
        # all factors > bound and not a square: must be p or p*q, squarefree
        return root, kernel * n
    raise KernelBoundError(
        f"residual factor {n} exceeds prime bound {bound}; "
        f"raise the bound to canonicalize this radicand"
    )


def canonical_sqrt(
    value: Rationalish, prime_bound: int | None = None
) -> tuple[Fraction, int]:
    """Canonical form of sqrt(value): (c, k) with c**2 * k == value exactly.

    c is a nonnegative rational, k a squarefree positive integer.  value
    must be >= 0; value == 0 gives (0, 1).  ``prime_bound`` overrides the
    trial-division bound when the caller knows the largest possible prime
    factor (all radicands here come from factorial ratios, so the largest
    factorial argument is such a bound).
    """
    r = Fraction(value)
    if r < 0:
        raise NegativeRadicandError(f"negative radicand {r}")
    if r == 0:
        return Fraction(0), 1
    bound = prime_bound if prime_bound is not None else DEFAULT_PRIME_BOUND
    num_root, num_kernel = _split_square(r.numerator, bound)
    den_root, den_kernel = _split_square(r.denominator, bound)
    # sqrt(n/d) = sqrt(n*d)/d; with n, d coprime the kernels are coprime too
    return Fraction(num_root, den_root * den_kernel), num_kernel * den_kernel


# ---------------------------------------------------------------------------
# RadicalSum
# ---------------------------------------------------------------------------


class RadicalSum:
    """Exact number of the form ``sum_i c_i * sqrt(k_i)``.

    Terms are keyed by their squarefree positive integer kernel; no stored
    coefficient is zero and the empty sum is exactly 0.  Two values are equal
    iff their term maps are equal.  Instances are immutable; all arithmetic
    returns new values.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Rationalish] | None = None):
        cleaned: dict[int, Fraction] = {}
        if terms:
            for kernel, coeff in terms.items():
                if not isinstance(kernel, int) or kernel <= 0:
                    raise ValueError(f"kernel must be a positive int, got {kernel!r}")
                c = Fraction(coeff)
                if not c:
                    continue
                if kernel > 3:
                    root, kernel = _split_square(kernel, DEFAULT_PRIME_BOUND)
                    c *= root
                total = cleaned.get(kernel, 0) + c
                if total:
                    cleaned[kernel] = total
                else:
                    cleaned.pop(kernel, None)
        self._terms = cleaned

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "RadicalSum":
        return cls()

    @classmethod
    def one(cls) -> "RadicalSum":
        return cls({1: Fraction(1)})

    @classmethod
    def rational(cls, value: Rationalish) -> "RadicalSum":
        return cls({1: Fraction(value)})

    @classmethod
    def sqrt(
        cls, value: Rationalish, prime_bound: int | None = None
    ) -> "RadicalSum":
        """Exact sqrt of a nonnegative rational, canonicalized."""
        c, k = canonical_sqrt(value, prime_bound)
        return cls({k: c})

    @classmethod
    def term(
        cls, coeff: Rationalish, kernel: int, prime_bound: int | None = None
    ) -> "RadicalSum":
        """c * sqrt(kernel) for any positive integer kernel (canonicalized)."""
        if kernel <= 0:
            raise ValueError(f"kernel must be positive, got {kernel}")
        bound = prime_bound if prime_bound is not None else DEFAULT_PRIME_BOUND
        root, k = _split_square(kernel, bound)
        return cls({k: Fraction(coeff) * root})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {1}

    @property
    def num_terms(self) -> int:
        return len(self._terms)

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        """(kernel, coefficient) pairs in increasing kernel order."""
        return iter(sorted(self._terms.items()))

    def as_fraction(self) -> Fraction:
        """The exact rational value; raises if any irrational term remains."""
        if not self._terms:
            return Fraction(0)
        if set(self._terms) == {1}:
            return self._terms[1]
        raise ValueError(f"{self} is not rational")

    def sign(self) -> int:
        """-1, 0 or +1.  Defined for sums with at most one term."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            (coeff,) = self._terms.values()
            return 1 if coeff > 0 else -1
        raise ValueError(f"sign of multi-term sum {self} is not structural")

    def squared(self) -> "RadicalSum":
        return self * self

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "RadicalSum":
        other = _coerce_radical(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        merged = dict(self._terms)
        for kernel, coeff in other._terms.items():
            total = merged.get(kernel, 0) + coeff
            if total:
                merged[kernel] = total
            else:
                merged.pop(kernel, None)
        return _raw_radical(merged)

    __radd__ = __add__

    def __sub__(self, other) -> "RadicalSum":
        other = _coerce_radical(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RadicalSum":
        other = _coerce_radical(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "RadicalSum":
        return _raw_radical({k: -c for k, c in self._terms.items()})

    def __mul__(self, other) -> "RadicalSum":
        if isinstance(other, (int, Fraction)):
            scale = Fraction(other)
            if not scale:
                return RadicalSum.zero()
            return _raw_radical({k: c * scale for k, c in self._terms.items()})
        if not isinstance(other, RadicalSum):
            return NotImplemented
        if len(self._terms) == 1 and len(other._terms) == 1:
            ((k1, c1),) = self._terms.items()
            ((k2, c2),) = other._terms.items()
            if k1 == k2:
                return _raw_radical({1: c1 * c2 * k1})
            g = math.gcd(k1, k2)
            return _raw_radical({(k1 // g) * (k2 // g): c1 * c2 * g})
        product: dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                # sqrt(k1)*sqrt(k2) = g*sqrt(k1*k2/g**2), g = gcd(k1, k2);
                # both kernels squarefree, so the new kernel is squarefree
                g = math.gcd(k1, k2)
                kernel = (k1 // g) * (k2 // g)
                coeff = c1 * c2 * g
                total = product.get(kernel, 0) + coeff
                if total:
                    product[kernel] = total
                else:
                    product.pop(kernel, None)
        return _raw_radical(product)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RadicalSum":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of RadicalSum by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, RadicalSum):
            if other.is_zero:
                raise ZeroDivisionError("division of RadicalSum by zero")
            if other.num_terms != 1:
                raise ValueError("can only divide by a single-term RadicalSum")
            ((kernel, coeff),) = other._terms.items()
            # 1/(c*sqrt(k)) = sqrt(k)/(c*k)
            return self * _raw_radical({kernel: Fraction(1, 1) / (coeff * kernel)})
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RadicalSum):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            coerced = _coerce_radical(other)
            return self._terms == coerced._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __float__(self) -> float:
        return sum(float(c) * math.sqrt(k) for k, c in self._terms.items())

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        if len(self._terms) == 1:
            ((kernel, coeff),) = self._terms.items()
            if kernel == 1:
                return str(coeff)
            radicand = coeff * coeff * kernel
            sign = "-" if coeff < 0 else ""
            return f"{sign}sqrt({radicand})"
        pieces = []
        for kernel, coeff in sorted(self._terms.items()):
            mag = abs(coeff)
            body = str(mag) if kernel == 1 else f"{mag}*sqrt({kernel})"
            if not pieces:
                pieces.append(("-" if coeff < 0 else "") + body)
            else:
                pieces.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"<RadicalSum {self}>"

    @classmethod
    def parse(cls, text: str) -> "RadicalSum":
        """Inverse of str(): accepts '0', 'p/q', '[-]sqrt(p/q)' and the
        multi-term 'c*sqrt(k)' sum form."""
        stripped = text.strip()
        if not stripped:
            raise ValueError("empty exact-value text")
        normalized = stripped.replace(" - ", " + -").split(" + ")
        total = cls.zero()
        for piece in normalized:
            total = total + _parse_term(piece.strip())
        return total


_SQRT_RE = re.compile(r"^(-)?sqrt\(([0-9]+(?:/[0-9]+)?)\)$")
_COEFF_SQRT_RE = re.compile(r"^(-?[0-9]+(?:/[0-9]+)?)\*sqrt\(([0-9]+)\)$")


def _parse_term(piece: str) -> RadicalSum:
    match = _SQRT_RE.match(piece)
    if match:
        value = RadicalSum.sqrt(Fraction(match.group(2)))
        return -value if match.group(1) else value
    match = _COEFF_SQRT_RE.match(piece)
    if match:
        return RadicalSum.term(Fraction(match.group(1)), int(match.group(2)))
    try:
        return RadicalSum.rational(Fraction(piece))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"unparseable exact-value text: {piece!r}") from None


def _raw_radical(terms: dict[int, Fraction]) -> RadicalSum:
    """Internal constructor for already-clean term maps (no zero coeffs)."""
    obj = object.__new__(RadicalSum)
    obj._terms = terms
    return obj


def _coerce_radical(value):
    if isinstance(value, RadicalSum):
        return value
    if isinstance(value, (int, Fraction)):
        if value == 0:
            return RadicalSum.zero()
        return _raw_radical({1: Fraction(value)})
    return NotImplemented


def sum_signed_sqrts(
    signed_radicands: Iterable[tuple[int, Rationalish]],
    prime_bound: int | None = None,
    shared_factor: Rationalish | None = None,
) -> RadicalSum:
    """Exact ``sum_i s_i * sqrt(r_i * shared_factor)`` for radicands r_i >= 0.

    Only the first nonzero radicand is factored; every later term is compared
    to it by an exact perfect-square ratio test, which is what makes long
    commensurable sums (the common case here) cheap.  Incommensurable terms
    fall back to full canonicalization, so the result is exact either way.
    A positive ``shared_factor`` common to all radicands can be passed
    separately; it cancels from the ratio tests and is only folded in when a
    term is actually canonicalized.
    """
    shared = Fraction(shared_factor) if shared_factor is not None else None
    if shared is not None and shared <= 0:
        raise NegativeRadicandError(f"shared factor {shared} must be positive")
    ref_coeff: Fraction | None = None
    ref_kernel = 1
    ref_radicand = Fraction(0)
    accumulated = Fraction(0)
    extras: dict[int, Fraction] = {}
    for sign, radicand in signed_radicands:
        r = Fraction(radicand)
        if r < 0:
            raise NegativeRadicandError(f"negative radicand {r}")
        if r == 0:
            continue
        if ref_coeff is None:
            ref_coeff, ref_kernel = canonical_sqrt(
                r if shared is None else r * shared, prime_bound
            )
            ref_radicand = r
            accumulated = sign * ref_coeff
            continue
        ratio = r / ref_radicand
        num_root = isqrt(ratio.numerator)
        den_root = isqrt(ratio.denominator)
        if num_root * num_root == ratio.numerator and den_root * den_root == ratio.denominator:
            accumulated += sign * ref_coeff * Fraction(num_root, den_root)
        else:
            coeff, kernel = canonical_sqrt(
                r if shared is None else r * shared, prime_bound
            )
            extras[kernel] = extras.get(kernel, Fraction(0)) + sign * coeff
    terms: dict[int, Fraction] = {}
    if accumulated:
        terms[ref_kernel] = accumulated
    for kernel, coeff in extras.items():
        total = terms.get(kernel, 0) + coeff
        if total:
            terms[kernel] = total
        else:
            terms.pop(kernel, None)
    return _raw_radical(terms)


# ---------------------------------------------------------------------------
# Decimal rendering
# ---------------------------------------------------------------------------


def to_decimal(value: Union[RadicalSum, Rationalish], places: int) -> str:
    """Correctly rounded decimal string with exactly ``places`` fraction digits.

    Rounding is round-half-even.  Rational values are rounded exactly; sums
    with irrational terms are bracketed by integer square-root intervals at
    increasing guard precision until the rounding is unambiguous (a sum with
    an irrational term is never exactly on a rounding boundary, so this
    terminates).
    """
    if places < 1:
        raise ValueError(f"places must be >= 1, got {places}")
    if isinstance(value, RadicalSum):
        items = sorted(value._terms.items())
    else:
        frac = Fraction(value)
        items = [(1, frac)] if frac else []
    if not items:
        return _format_scaled(0, places)
    if all(kernel == 1 for kernel, _ in items):
        total = items[0][1]
        scaled = _round_half_even(total.numerator * 10**places, total.denominator)
        return _format_scaled(scaled, places)
    guard = 12
    while True:
        shift = 10**guard
        scale = 10 ** (places + guard)
        lo = 0
        hi = 0
        for kernel, coeff in items:
            if kernel == 1:
                v = coeff * scale
                floor = v.numerator // v.denominator
                lo += floor
                hi += -((-v.numerator) // v.denominator)
            else:
                n = kernel * coeff.numerator * coeff.numerator * scale * scale
                root = isqrt(n)
                den = coeff.denominator
                if coeff > 0:
                    lo += root // den
                    hi += -((-(root + 1)) // den)
                else:
                    lo -= -((-(root + 1)) // den)
                    hi -= root // den
        rounded_lo = _round_half_even(lo, shift)
        rounded_hi = _round_half_even(hi, shift)
        if rounded_lo == rounded_hi:
            return _format_scaled(rounded_lo, places)
        guard *= 2


def _round_half_even(n: int, d: int) -> int:
    """round(n/d) with ties to even, d > 0, exact integer arithmetic."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    q, r = divmod(n, d)
    if 2 * r > d or (2 * r == d and q & 1):
        q += 1
    return sign * q


def _format_scaled(scaled: int, places: int) -> str:
    magnitude = abs(scaled)
    whole, frac = divmod(magnitude, 10**places)
    sign = "-" if scaled < 0 else ""
    return f"{sign}{whole}.{frac:0{places}d}"
