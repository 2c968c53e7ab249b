"""Closed-form Clebsch-Gordan computation and quantum-number validation.

Two independent closed forms are implemented: a binomial-ratio summation
derived from ladder-operator subspace reconstruction (`cg_alternative`) and
Racah's classical single-sum factorial formula (`cg_racah`).  They are kept
algorithmically disjoint on purpose; the verification module certifies their
exact agreement.  The Wigner 3j symbol is obtained from the Racah route via
the standard phase-and-normalization conversion.

All index arithmetic happens on doubled integers (``HalfInt.twice``), so
every loop bound is a plain int and no rounding can occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .numerics import HalfInt, RadicalSum, binomial, canonical_sqrt, sum_signed_sqrts

__all__ = [
    "CouplingSpec",
    "MalformedCouplingError",
    "ThreeJSpec",
    "ValidationResult",
    "Validity",
    "cg_alternative",
    "cg_racah",
    "cg_to_wigner3j",
    "validate",
    "wigner3j",
]


class MalformedCouplingError(ValueError):
    """Arguments that no Clebsch-Gordan coefficient is defined for.

    Raised for negative j, |m| > j or half-integer parity violations; these
    signal caller bugs.  Physically forbidden but well-formed arguments are
    not errors, they give coefficient 0.
    """


@dataclass(frozen=True)
class CouplingSpec:
    """Argument list of a Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M>."""

    j1: HalfInt
    j2: HalfInt
    m1: HalfInt
    m2: HalfInt
    J: HalfInt
    M: HalfInt

    @classmethod
    def of(cls, j1, j2, m1, m2, J, M) -> "CouplingSpec":
        """Coercing constructor: accepts ints, 'p/q' strings, Fractions."""
        return cls(
            HalfInt(j1), HalfInt(j2), HalfInt(m1), HalfInt(m2), HalfInt(J), HalfInt(M)
        )

    def __str__(self) -> str:
        return (
            f"C(j1={self.j1}, j2={self.j2}, m1={self.m1}, m2={self.m2}, "
            f"J={self.J}, M={self.M})"
        )


@dataclass(frozen=True)
class ThreeJSpec:
    """Argument matrix of a Wigner 3j symbol (columns (j_i, m_i))."""

    j1: HalfInt
    j2: HalfInt
    j3: HalfInt
    m1: HalfInt
    m2: HalfInt
    m3: HalfInt

    @classmethod
    def of(cls, j1, j2, j3, m1, m2, m3) -> "ThreeJSpec":
        return cls(
            HalfInt(j1), HalfInt(j2), HalfInt(j3), HalfInt(m1), HalfInt(m2), HalfInt(m3)
        )

    def __str__(self) -> str:
        return f"3j({self.j1} {self.j2} {self.j3}; {self.m1} {self.m2} {self.m3})"


class Validity(Enum):
    WELL_FORMED = "well-formed"
    MALFORMED = "malformed"
    SELECTION_ZERO = "selection-zero"


@dataclass(frozen=True)
class ValidationResult:
    validity: Validity
    reason: str | None = None

    @property
    def is_well_formed(self) -> bool:
        return self.validity is Validity.WELL_FORMED

    @property
    def is_malformed(self) -> bool:
        return self.validity is Validity.MALFORMED

    @property
    def is_selection_zero(self) -> bool:
        return self.validity is Validity.SELECTION_ZERO


_WELL_FORMED = ValidationResult(Validity.WELL_FORMED)


def validate(spec: CouplingSpec) -> ValidationResult:
    """Classify a coupling spec.

    Malformed arguments (negative j, |m| > j, parity mismatches) signal
    caller bugs.  Selection-zero arguments are well-formed but physically
    forbidden (triangle rule, integer total, M = m1 + m2); the coefficient
    for those is exactly 0.
    """
    tj1, tj2 = spec.j1.twice, spec.j2.twice
    tm1, tm2 = spec.m1.twice, spec.m2.twice
    tJ, tM = spec.J.twice, spec.M.twice
    for name, tj in (("j1", tj1), ("j2", tj2), ("J", tJ)):
        if tj < 0:
            return ValidationResult(Validity.MALFORMED, f"{name} is negative")
    for jname, mname, tj, tm in (
        ("j1", "m1", tj1, tm1),
        ("j2", "m2", tj2, tm2),
        ("J", "M", tJ, tM),
    ):
        if (tj + tm) % 2:
            return ValidationResult(
                Validity.MALFORMED,
                f"parity of {mname} inconsistent with {jname} ({jname}+{mname} not an integer)",
            )
        if abs(tm) > tj:
            return ValidationResult(Validity.MALFORMED, f"|{mname}| exceeds {jname}")
    if tJ < abs(tj1 - tj2) or tJ > tj1 + tj2:
        return ValidationResult(Validity.SELECTION_ZERO, "triangle rule violated")
    if (tj1 + tj2 + tJ) % 2:
        return ValidationResult(Validity.SELECTION_ZERO, "j1+j2+J is not an integer")
    if tM != tm1 + tm2:
        return ValidationResult(Validity.SELECTION_ZERO, "M != m1 + m2")
    return _WELL_FORMED


def _require_well_formed(spec: CouplingSpec) -> ValidationResult:
    result = validate(spec)
    if result.is_malformed:
        raise MalformedCouplingError(f"{spec}: {result.reason}")
    return result


@lru_cache(maxsize=None)
def _norm_denominator_sum(tj1: int, tj2: int, depth: int) -> Fraction:
    """sum_i C(2j2-m+i, i) C(m, i) / C(2j1, i) over i = 0..m (m = ``depth``).

    This is the inverse square of the highest-weight leading coefficient for
    the subspace J = j1 + j2 - m; it is shared by the closed-form coefficient
    formula and by the ladder engine's normalization.
    """
    total = Fraction(0)
    for i in range(depth + 1):
        total += Fraction(
            binomial(tj2 - depth + i, i) * binomial(depth, i), binomial(tj1, i)
        )
    return total


def cg_alternative(spec: CouplingSpec) -> RadicalSum:
    """Clebsch-Gordan coefficient via the binomial-ratio summation.

    The value is ``sum_{l=K}^{N} (-1)^l sqrt(R_l)`` where each R_l is a ratio
    of binomial products and K = max(0, j1-J+m2), N = min(j1+j2-J, j1-m1).
    Out-of-range binomials contribute factor 0, so the loose l range
    truncates itself; the explicit K..N bounds are just the efficient loop.
    Selection-zero specs (including an empty l range) give exactly 0.
    """
    result = _require_well_formed(spec)
    if result.is_selection_zero:
        return RadicalSum.zero()
    tj1, tj2 = spec.j1.twice, spec.j2.twice
    tm1 = spec.m1.twice
    tJ, tM = spec.J.twice, spec.M.twice

    m = (tj1 + tj2 - tJ) // 2          # subspace depth j1+j2-J
    s_jm = (tJ - tM) // 2              # J - M
    a1 = (tj1 - tm1) // 2              # j1 - m1
    q2 = (tj2 - tj1 + tJ) // 2         # j2 - j1 + J  (= 2j2 - m)
    top5 = (tj2 - tM + tm1) // 2       # j2 - M + m1

    lo = max(0, (tj1 - tJ + spec.m2.twice) // 2)
    hi = min(m, a1)
    if lo > hi:
        return RadicalSum.zero()

    denom_base = binomial(tJ, s_jm) * _norm_denominator_sum(tj1, tj2, m)
    prime_bound = max(tj1 + tj2 + 2, 3)

    # the shared 1/(C(2J, J-M) * norm sum) factor cancels from term ratios,
    # so it is handed to the accumulator separately
    signed_radicands = []
    for l in range(lo, hi + 1):
        numer = (
            binomial(tj1 - l, a1 - l)
            * binomial(q2 + l, s_jm - a1 + l)
            * binomial(q2 + l, l)
            * binomial(a1, l)
            * binomial(top5, s_jm - a1 + l)
            * binomial(m, l)
        )
        if not numer:
            continue
        signed_radicands.append(
            (-1 if l & 1 else 1, Fraction(numer, binomial(tj1, l)))
        )
    return sum_signed_sqrts(
        signed_radicands, prime_bound, shared_factor=Fraction(1) / denom_base
    )


def cg_racah(spec: CouplingSpec) -> RadicalSum:
    """Clebsch-Gordan coefficient via Racah's single-sum factorial formula.

    A common square-root prefactor (canonicalized exactly) multiplies an
    alternating rational sum over every z that keeps all factorial arguments
    nonnegative.  The result is structurally a single-term RadicalSum, which
    is what makes this route the collapse oracle for `cg_alternative`.
    """
    result = _require_well_formed(spec)
    if result.is_selection_zero:
        return RadicalSum.zero()
    tj1, tj2 = spec.j1.twice, spec.j2.twice
    tm1, tm2 = spec.m1.twice, spec.m2.twice
    tJ, tM = spec.J.twice, spec.M.twice

    g1 = (tj1 + tj2 - tJ) // 2         # j1 + j2 - J
    g2 = (tJ + tj1 - tj2) // 2         # J + j1 - j2
    g3 = (tJ + tj2 - tj1) // 2         # J + j2 - j1
    gs = (tj1 + tj2 + tJ) // 2 + 1     # j1 + j2 + J + 1
    a_p = (tj1 + tm1) // 2             # j1 + m1
    a_m = (tj1 - tm1) // 2             # j1 - m1
    b_p = (tj2 + tm2) // 2             # j2 + m2
    b_m = (tj2 - tm2) // 2             # j2 - m2
    c_p = (tJ + tM) // 2               # J + M
    c_m = (tJ - tM) // 2               # J - M
    d1 = (tJ - tj2 + tm1) // 2         # J - j2 + m1
    d2 = (tJ - tj1 - tm2) // 2         # J - j1 - m2

    z_lo = max(0, -d1, -d2)
    z_hi = min(g1, a_m, b_p)
    if z_lo > z_hi:
        return RadicalSum.zero()

    # alternating sum, updated incrementally by small-integer ratios
    c1, c2, c3 = z_lo, g1 - z_lo, a_m - z_lo
    c4, c5, c6 = b_p - z_lo, d1 + z_lo, d2 + z_lo
    term = Fraction(
        -1 if z_lo & 1 else 1,
        factorial(c1) * factorial(c2) * factorial(c3)
        * factorial(c4) * factorial(c5) * factorial(c6),
    )
    total = term
    for _ in range(z_lo, z_hi):
        c1 += 1
        c5 += 1
        c6 += 1
        term *= Fraction(-(c2 * c3 * c4), c1 * c5 * c6)
        c2 -= 1
        c3 -= 1
        c4 -= 1
        total += term
    if not total:
        return RadicalSum.zero()

    prefactor = Fraction(
        (tJ + 1)
        * factorial(g1) * factorial(g2) * factorial(g3)
        * factorial(a_p) * factorial(a_m)
        * factorial(b_p) * factorial(b_m)
        * factorial(c_p) * factorial(c_m),
        factorial(gs),
    )
    coeff, kernel = canonical_sqrt(prefactor, prime_bound=gs + 1)
    return RadicalSum({kernel: coeff * total})


def cg_to_wigner3j(
    spec: CouplingSpec, value: RadicalSum
) -> tuple[ThreeJSpec, RadicalSum]:
    """Convert a CG coefficient to the corresponding Wigner 3j symbol.

    3j(j1 j2 J; m1 m2 -M) = (-1)^(M+j1-j2) / sqrt(2J+1) * C.  The phase
    exponent is an integer whenever the coefficient is nonzero.
    """
    threej = ThreeJSpec(spec.j1, spec.j2, spec.J, spec.m1, spec.m2, -spec.M)
    if value.is_zero:
        return threej, RadicalSum.zero()
    phase_twice = spec.M.twice + spec.j1.twice - spec.j2.twice
    if phase_twice % 2:
        raise MalformedCouplingError(
            f"{spec}: M + j1 - j2 is not an integer for a nonzero coefficient"
        )
    sign = -1 if (phase_twice // 2) & 1 else 1
    converted = value * sign / RadicalSum.sqrt(spec.J.twice + 1)
    return threej, converted


def wigner3j(spec: ThreeJSpec) -> RadicalSum:
    """Wigner 3j symbol with standard selection rules.

    Computed from the Racah route through the CG conversion so that the 3j
    symmetry suite stays an independent check on the other formulas.
    """
    for name, tj, tm in (
        ("j1", spec.j1.twice, spec.m1.twice),
        ("j2", spec.j2.twice, spec.m2.twice),
        ("j3", spec.j3.twice, spec.m3.twice),
    ):
        if tj < 0:
            raise MalformedCouplingError(f"{spec}: {name} is negative")
        if (tj + tm) % 2:
            raise MalformedCouplingError(f"{spec}: parity of m inconsistent in column {name}")
        if abs(tm) > tj:
            raise MalformedCouplingError(f"{spec}: |m| exceeds {name}")
    if spec.m1.twice + spec.m2.twice + spec.m3.twice != 0:
        return RadicalSum.zero()
    coupling = CouplingSpec(spec.j1, spec.j2, spec.m1, spec.m2, spec.j3, -spec.m3)
    if validate(coupling).is_selection_zero:
        return RadicalSum.zero()
    value = cg_racah(coupling)
    return cg_to_wigner3j(coupling, value)[1]
