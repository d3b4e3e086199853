"""Harmonic numbers H_n (and H_n^(a)), their p-adic valuations, Wolstenholme
primes, and congruences relating p*H_J to H_{J/p}.

Two evaluation routes are provided on purpose: exact rationals (the oracle)
and a modular route that tracks H_n in Z_p with just enough precision to
read off valuations, so large indices never require exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .padic import INFINITE, is_prime, require_prime, vp_int, vp_rational

_HARMONIC: list[Fraction] = [Fraction(0)]

CONGRUENCE_KINDS = ("J_mod_p", "W1", "W2", "W3", "congH", "congH2")


def harmonic(n: int) -> Fraction:
    """Exact H_n = 1 + 1/2 + ... + 1/n (H_0 = 0). Values are cached."""
    if n < 0:
        raise ValueError("n must be non-negative")
    h = _HARMONIC
    while len(h) <= n:
        h.append(h[-1] + Fraction(1, len(h)))
    return h[n]


def harmonic_power(n: int, alpha: int) -> Fraction:
    """Exact H_n^(alpha) = sum_{i=1..n} 1/i^alpha."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if alpha == 1:
        return harmonic(n)
    return sum((Fraction(1, i**alpha) for i in range(1, n + 1)), Fraction(0))


def vp_harmonic(N: int, p: int, shifted: bool = False) -> int:
    """v_p(H_N), or v_p(H_N - 1) when shifted.

    N = 1 with shifted is rejected: H_1 - 1 = 0 has infinite valuation and
    sits outside every statement this toolkit checks.
    """
    require_prime(p)
    if N < 1:
        raise ValueError("N must be a positive integer")
    if shifted and N == 1:
        raise ValueError("H_1 - 1 = 0; shifted valuation requires N >= 2")
    x = harmonic(N) - (1 if shifted else 0)
    return vp_rational(x, p)


class ModularHarmonicSum:
    """Tracks H_n in Z_p precisely enough to decide valuations below a cap.

    For each w >= 0, ``sums[w]`` accumulates, modulo p^(cap+1+w), the sum of
    inverses of the p-free parts u over all indices u * p^w <= n. Then
    H_n = sum_w p^(-w) * sums[w]; combining the levels at the common scale
    p^W (W = floor(log_p n)) leaves exactly enough precision to read off
    v_p(H_n), or v_p(H_n - 1), whenever it is below ``cap`` -- and to report
    "at least cap" otherwise. New levels appear as n grows, so the state can
    be advanced indefinitely and resumed from a snapshot.
    """

    __slots__ = ("p", "cap", "n", "sums")

    def __init__(self, p: int, cap: int = 4):
        require_prime(p)
        if cap < 1:
            raise ValueError("cap must be positive")
        self.p = p
        self.cap = cap
        self.n = 0
        self.sums: list[int] = []

    @classmethod
    def restore(cls, p: int, cap: int, n: int, sums: list[int]) -> "ModularHarmonicSum":
        state = cls(p, cap)
        expected_levels = 0
        q = 1
        while q <= n:
            expected_levels += 1
            q *= p
        if n < 0 or len(sums) != expected_levels:
            raise ValueError("inconsistent modular harmonic snapshot")
        for w, t in enumerate(sums):
            if not 0 <= t < p ** (cap + 1 + w):
                raise ValueError("modular harmonic partial sum out of range")
        state.n = n
        state.sums = list(sums)
        return state

    def advance(self) -> None:
        self.n += 1
        f = self.n
        w = 0
        while f % self.p == 0:
            f //= self.p
            w += 1
        if w == len(self.sums):
            self.sums.append(0)
        mod = self.p ** (self.cap + 1 + w)
        self.sums[w] = (self.sums[w] + pow(f % mod, -1, mod)) % mod

    def advance_to(self, n: int) -> None:
        while self.n < n:
            self.advance()

    def _combined(self) -> tuple[int, int, int]:
        # (scaled residue, scale exponent W, modulus p^(W+cap+1))
        scale = len(self.sums) - 1
        mod = self.p ** (scale + self.cap + 1)
        x = 0
        for w, t in enumerate(self.sums):
            x += self.p ** (scale - w) * t
        return x % mod, scale, mod

    def valuation(self, shifted: bool = False) -> tuple[int, bool]:
        """(v, capped): v = v_p(H_n) (or of H_n - 1), exact when v < cap;
        (cap, True) means the valuation is at least cap."""
        if self.n < 1:
            raise ValueError("no terms accumulated yet")
        x, scale, mod = self._combined()
        if shifted:
            x = (x - self.p**scale) % mod
        limit = scale + self.cap
        if x == 0:
            return self.cap, True
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
            if v >= limit:
                return self.cap, True
        return v - scale, False

    def residue(self, exponent: int, shifted: bool = False) -> int:
        """H_n mod p**exponent (as an element of Z_p).

        Only valid when the value is p-integral; exponent <= cap + 1.
        """
        if exponent < 1 or exponent > self.cap + 1:
            raise ValueError("exponent must be in 1..cap+1")
        x, scale, _ = self._combined()
        if shifted:
            x -= self.p**scale
        if x % self.p**scale:
            raise ValueError("value is not p-integral at this index")
        return (x // self.p**scale) % self.p**exponent


def _half_pair_unit_sum(p: int, mod: int) -> int:
    """sum_{e=1..(p-1)/2} inverse(e*(p-e)) mod ``mod``, by batch inversion."""
    half = (p - 1) // 2
    prefix = [1] * (half + 1)
    acc = 1
    for e in range(1, half + 1):
        acc = acc * (e * (p - e) % mod) % mod
        prefix[e] = acc
    inv = pow(acc, -1, mod)
    total = 0
    for e in range(half, 0, -1):
        total = (total + prefix[e - 1] * inv) % mod
        inv = inv * (e * (p - e) % mod) % mod
    return total


def wolstenholme_valuation(p: int, cap: int = 3) -> int:
    """min(v_p(H_{p-1}), cap) for a prime p >= 5, computed modularly.

    Pairing 1/e with 1/(p-e) gives H_{p-1} = p * T with T in Z_p, so the
    valuation is read off T modulo p^(cap-1); H_{p-1} itself is never built.
    """
    require_prime(p)
    if p < 5:
        raise ValueError("defined for primes p >= 5")
    if cap < 2:
        raise ValueError("cap must be at least 2")
    t = _half_pair_unit_sum(p, p ** (cap - 1))
    if t == 0:
        return cap
    return min(1 + vp_int(t, p), cap)


@lru_cache(maxsize=None)
def is_wolstenholme(p: int) -> bool:
    """True iff v_p(H_{p-1}) >= 3. Only 16843 and 2124679 are known."""
    return wolstenholme_valuation(p, cap=3) >= 3


@dataclass(frozen=True)
class HarmonicCongruence:
    """Outcome of one congruence check, with the achieved valuation."""

    kind: str
    p: int
    params: dict = field(compare=False)
    achieved: int | float
    required: int
    holds: bool
    predicted: bool | None = None
    prediction_matches: bool | None = None


def check_harmonic_congruence(
    kind: str,
    p: int,
    *,
    J: int | None = None,
    r: int | None = None,
    N: int | None = None,
) -> HarmonicCongruence:
    """Evaluate one of the p*H_J vs H_{J/p} congruence statements exactly.

    Kinds:
      J_mod_p  v_p(p*H_J - H_{floor(J/p)}) >= 1, any J >= 1
      W1       v_p(H_{rp-1} - H_{rp-p}) >= 2, p >= 5
      W2       p | J: >= 3 for p >= 5, >= 2 for p = 3
      W3       p^2 | J, p >= 5: >= 5
      congH    p >= 5: v_p(p*H_{pN} - H_N) >= 4 iff Wolstenholme or p | N
      congH2   p >= 5: v_p(p*(H_{pN} - H_p) - (H_N - 1)) >= 4 iff
               Wolstenholme or N = +-1 mod p

    For congH/congH2 the report also carries the iff-criterion's prediction
    and whether it matches the computed outcome.
    """
    require_prime(p)
    predicted: bool | None = None
    if kind == "J_mod_p":
        if J is None or J < 1:
            raise ValueError("J_mod_p requires J >= 1")
        value = p * harmonic(J) - harmonic(J // p)
        required = 1
        params = {"J": J}
    elif kind == "W1":
        if p < 5:
            raise ValueError("W1 requires p >= 5")
        if r is None or r < 1:
            raise ValueError("W1 requires r >= 1")
        value = harmonic(r * p - 1) - harmonic(r * p - p)
        required = 2
        params = {"r": r}
    elif kind == "W2":
        if p < 3:
            raise ValueError("W2 requires p >= 3")
        if J is None or J < 1 or J % p:
            raise ValueError("W2 requires J divisible by p")
        value = p * harmonic(J) - harmonic(J // p)
        required = 3 if p >= 5 else 2
        params = {"J": J}
    elif kind == "W3":
        if p < 5:
            raise ValueError("W3 requires p >= 5")
        if J is None or J < 1 or J % p**2:
            raise ValueError("W3 requires J divisible by p^2")
        value = p * harmonic(J) - harmonic(J // p)
        required = 5
        params = {"J": J}
    elif kind == "congH":
        if p < 5:
            raise ValueError("congH requires p >= 5")
        if N is None or N < 1:
            raise ValueError("congH requires N >= 1")
        value = p * harmonic(p * N) - harmonic(N)
        required = 4
        predicted = is_wolstenholme(p) or N % p == 0
        params = {"N": N}
    elif kind == "congH2":
        if p < 5:
            raise ValueError("congH2 requires p >= 5")
        if N is None or N < 1:
            raise ValueError("congH2 requires N >= 1")
        value = p * (harmonic(p * N) - harmonic(p)) - (harmonic(N) - 1)
        required = 4
        predicted = is_wolstenholme(p) or N % p in (1, p - 1)
        params = {"N": N}
    else:
        raise ValueError(f"unknown congruence kind {kind!r}")

    achieved = INFINITE if value == 0 else vp_rational(value, p)
    holds = achieved >= required
    matches = None if predicted is None else (holds == predicted)
    return HarmonicCongruence(
        kind=kind,
        p=p,
        params=params,
        achieved=achieved,
        required=required,
        holds=holds,
        predicted=predicted,
        prediction_matches=matches,
    )
