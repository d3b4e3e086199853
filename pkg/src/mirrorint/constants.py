"""The arithmetic constants governing maximal integral roots of the maps:
the harmonic denominator theta(L), the capped valuation products xi(N) and
omega(N) with their indicator functions, and the conjectured maximal-root
sequences t_N = xi(N) * N!^k and u_N = omega(N) * N!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .harmonic import harmonic, is_wolstenholme
from .padic import is_prime, primes_upto, require_prime, vp_rational

TARGET_H = "H"
TARGET_H1 = "H1"

BRANCH_CAP = "cap"
BRANCH_VALUATION = "valuation"


class DegenerateCase(ValueError):
    """A parameter choice for which the quantity degenerates rather than
    taking a value (e.g. the shifted map at N = 1 is identically 1)."""


@dataclass(frozen=True)
class PrimeFactor:
    p: int
    exponent: int
    indicator: int
    branch: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e": self.exponent,
            "indicator": self.indicator,
            "branch": self.branch,
        }


@dataclass(frozen=True)
class Breakdown:
    """Per-prime factorisation of one capped valuation product.

    ``exponent = min(2 + indicator, v_p(target))`` for every listed prime,
    except in the hard-coded special case (see ``xi``).
    """

    N: int
    target: str
    factors: tuple[PrimeFactor, ...]
    product: Fraction
    special_case: bool = False

    def exponent_of(self, p: int) -> int:
        for f in self.factors:
            if f.p == p:
                return f.exponent
        return 0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "product": str(self.product),
            "factors": [f.to_json() for f in self.factors],
            "special_case": self.special_case,
        }


def xi_indicator(p: int, N: int) -> int:
    """1 iff p is a Wolstenholme prime or p divides N; requires p <= N.

    For p in {2, 3} the Wolstenholme branch is false by convention: the
    defining condition v_p(H_{p-1}) >= 3 lives in a p >= 5 context and is
    vacuously false there anyway (H_1 = 1, H_2 = 3/2).
    """
    require_prime(p)
    if N < 1:
        raise ValueError("N must be a positive integer")
    if p > N:
        raise ValueError("indicator is defined for primes p <= N only")
    if N % p == 0:
        return 1
    return 1 if p >= 5 and is_wolstenholme(p) else 0


def omega_indicator(p: int, N: int) -> int:
    """1 iff p is a Wolstenholme prime or N = +-1 mod p.

    The condition is total in N (the valuation product consults it only for
    p <= N, but N = +-1 mod p is meaningful for any prime).
    """
    require_prime(p)
    if N < 2:
        raise ValueError("N must be at least 2")
    if N % p in (1, p - 1):
        return 1
    return 1 if p >= 5 and is_wolstenholme(p) else 0


def _breakdown(N: int, target: str, indicator) -> Breakdown:
    shifted = target == TARGET_H1
    h = harmonic(N) - (1 if shifted else 0)
    factors = []
    product = Fraction(1)
    for p in primes_upto(N):
        ind = indicator(p, N)
        v = vp_rational(h, p)
        cap = 2 + ind
        e = min(cap, v)
        branch = BRANCH_CAP if cap <= v else BRANCH_VALUATION
        factors.append(PrimeFactor(p, e, ind, branch))
        product *= Fraction(p) ** e
    return Breakdown(N=N, target=target, factors=tuple(factors), product=product)


# xi(7) differs from the generic product by dropping the factor 3; the value
# is pinned and the breakdown records the literal exponents of 1/140.
_XI_7 = Fraction(1, 140)
_XI_7_EXPONENTS = {2: -2, 3: 0, 5: -1, 7: -1}


def xi(N: int) -> Breakdown:
    """The product over primes p <= N of p^min(2 + xi_indicator, v_p(H_N)),
    with the hard-coded special values xi(1) = 1 and xi(7) = 1/140."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    if N == 1:
        return Breakdown(N=1, target=TARGET_H, factors=(), product=Fraction(1))
    if N == 7:
        factors = tuple(
            PrimeFactor(p, e, xi_indicator(p, 7), BRANCH_VALUATION)
            for p, e in sorted(_XI_7_EXPONENTS.items())
        )
        return Breakdown(
            N=7, target=TARGET_H, factors=factors, product=_XI_7, special_case=True
        )
    return _breakdown(N, TARGET_H, xi_indicator)


def omega(N: int) -> Breakdown:
    """The product over primes p <= N of p^min(2 + omega_indicator,
    v_p(H_N - 1)); defined for N >= 2."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return _breakdown(N, TARGET_H1, omega_indicator)


def _simplified(N: int, target: str) -> Fraction:
    shifted = target == TARGET_H1
    h = harmonic(N) - (1 if shifted else 0)
    product = Fraction(1)
    for p in primes_upto(N):
        product *= Fraction(p) ** min(2, vp_rational(h, p))
    return product


def xi_simplified(N: int) -> tuple[Fraction, bool]:
    """The indicator-free product with exponents capped at 2, plus a flag
    telling whether it agrees with the full xi(N).

    A disagreement would exhibit a prime with v_p(H_N) >= 3 and indicator 1;
    no such pair is known.
    """
    if N in (1, 7):
        raise ValueError("the simplified product is defined for N outside {1, 7}")
    value = _simplified(N, TARGET_H)
    return value, value == xi(N).product


def omega_simplified(N: int) -> tuple[Fraction, bool]:
    """Capped-at-2 analogue of omega(N), plus agreement flag."""
    if N < 2:
        raise ValueError("N must be at least 2")
    value = _simplified(N, TARGET_H1)
    return value, value == omega(N).product


def theta(L: int) -> int:
    """Denominator of H_L in lowest terms.

    Cross-checked on every call against the valuation product
    prod_{p <= L} p^(-min(0, v_p(H_L))).
    """
    if L < 1:
        raise ValueError("L must be a positive integer")
    h = harmonic(L)
    den = h.denominator
    product = 1
    for p in primes_upto(L):
        v = vp_rational(h, p)
        if v < 0:
            product *= p ** (-v)
    if product != den:
        raise ArithmeticError("valuation product disagrees with the denominator")
    return den


def t_conjectured(N: int, k: int = 1) -> tuple[Fraction, bool]:
    """xi(N) * N!^k and whether it is a positive integer.

    Integrality is verified, not assumed; a False flag is a reportable
    finding, never an exception.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    value = xi(N).product * Fraction(math.factorial(N)) ** k
    return value, value.denominator == 1 and value > 0


def u_conjectured(N: int) -> tuple[Fraction, bool]:
    """omega(N) * N! and whether it is a positive integer.

    N = 1 is degenerate: the shifted map is identically 1 there, every root
    is integral, and no finite maximal root exists.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if N == 1:
        raise DegenerateCase(
            "degenerate for N = 1: the series is identically 1 and every root "
            "of it is integral"
        )
    value = omega(N).product * math.factorial(N)
    return value, value.denominator == 1 and value > 0
