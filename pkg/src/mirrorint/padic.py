"""Exact p-adic valuations and the integer coefficient family ((Nm)!/m!^N)^k.

The valuation of zero is represented by ``math.inf``: a distinguished value
that compares greater than every integer, so membership tests of the form
``v_p(x) >= c`` accept x = 0 without special-casing.
"""

from __future__ import annotations

import math
from fractions import Fraction

INFINITE = math.inf

# Deterministic Miller-Rabin witness set, exact for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_B_CACHE: dict[tuple[int, int], list[int]] = {}


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for every input below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> list[int]:
    """All primes <= n, by a plain sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if sieve[i]]


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")


def vp_int(n: int, p: int) -> int | float:
    """Valuation of an integer; INFINITE for n = 0. Assumes p prime."""
    if n == 0:
        return INFINITE
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x: Fraction | int, p: int) -> int | float:
    """v_p(x) for an exact rational; INFINITE for x = 0."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITE
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def vp_factorial(n: int, p: int) -> int:
    """v_p(n!) = sum_{l>=1} floor(n / p^l)."""
    require_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def _validate_b_params(N: int, k: int, m: int) -> None:
    if N < 1:
        raise ValueError("N must be a positive integer")
    if k < 1:
        raise ValueError("k must be a positive integer")
    if m < 0:
        raise ValueError("m must be non-negative")


def big_B(N: int, k: int, m: int) -> int:
    """The integer ((Nm)! / m!^N)^k; equals 1 for m = 0."""
    _validate_b_params(N, k, m)
    if m == 0:
        return 1
    base, rem = divmod(math.factorial(N * m), math.factorial(m) ** N)
    if rem:
        raise ArithmeticError("multinomial coefficient is not an integer")
    return base**k


def big_B_sequence(N: int, k: int, m_max: int) -> list[int]:
    """Values ((Nm)!/m!^N)^k for m = 0..m_max, built by the exact ratio
    B(m)/B(m-1) so repeated factorials are never reconstructed.

    The returned list is a shared cache row; callers must not mutate it.
    """
    _validate_b_params(N, k, max(m_max, 0))
    row = _B_CACHE.setdefault((N, k), [1])
    while len(row) <= m_max:
        m = len(row)
        ratio_num = 1
        for i in range(N * (m - 1) + 1, N * m + 1):
            ratio_num *= i
        value, rem = divmod(row[-1] * ratio_num**k, m ** (N * k))
        if rem:
            raise ArithmeticError("coefficient ratio did not divide exactly")
        row.append(value)
    return row


def vp_big_B(N: int, k: int, m: int, p: int) -> int:
    """v_p of ((Nm)!/m!^N)^k via the Legendre double sum, never touching the
    factorials themselves."""
    require_prime(p)
    _validate_b_params(N, k, m)
    total = 0
    q = p
    while q <= N * m:
        total += (N * m) // q - N * (m // q)
        q *= p
    return k * total


def factorial_unit_mod(n: int, p: int, exponent: int) -> int:
    """The p-free part of n! reduced modulo p**exponent.

    n! = p^{v_p(n!)} * u with p not dividing u; returns u mod p^exponent.
    """
    require_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    if exponent < 1:
        raise ValueError("exponent must be positive")
    mod = p**exponent
    unit = 1
    while n > 0:
        for i in range(1, n + 1):
            if i % p:
                unit = unit * i % mod
        n //= p
    return unit
