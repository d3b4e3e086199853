"""Truncated formal power series over exact rationals, the hypergeometric
series F, G, G_L, G-tilde built from the coefficients ((Nm)!/m!^N)^k, their
canonical coordinates exp(G/F), and certification of maximal integral roots.

Every series carries an explicit truncation order M: coefficients 0..M are
exact and nothing is claimed beyond. Arithmetic propagates the tightest
order still fully determined by the operands, so a "pass" is always a
certificate to a stated order while any violation found is unconditional.
No floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .harmonic import harmonic
from .padic import big_B_sequence, require_prime, vp_int, vp_rational

Coeff = Union[int, Fraction]

KIND_QN = "qN"
KIND_QLN = "qLN"
KIND_QTILDE = "qtilde"
CANONICAL_KINDS = (KIND_QN, KIND_QLN, KIND_QTILDE)

STATUS_CERTIFIED = "certified"
STATUS_VIOLATION = "violation"


class PSeries:
    """A power series known exactly up to (and including) its order."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[Coeff], order: int | None = None):
        c = [Fraction(x) for x in coefficients]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            c = c[: order + 1] + [Fraction(0)] * (order + 1 - len(c))
        elif not c:
            raise ValueError("an empty coefficient list needs an explicit order")
        self._c = tuple(c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i <= self.order:
            raise IndexError(f"coefficient {i} is beyond the truncation order")
        return self._c[i]

    def truncate(self, order: int) -> "PSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PSeries(self._c[: order + 1])

    def shift_up(self, n: int = 1) -> "PSeries":
        """Multiply by z^n (knowledge extends to order + n)."""
        if n < 0:
            raise ValueError("n must be non-negative")
        return PSeries((Fraction(0),) * n + self._c)

    def shift_down(self, n: int = 1) -> "PSeries":
        """Divide by z^n; the lowest n coefficients must vanish."""
        if any(self._c[i] for i in range(min(n, len(self._c)))):
            raise ValueError("series is not divisible by z^n")
        if n > self.order:
            raise ValueError("shift exceeds the truncation order")
        return PSeries(self._c[n:])

    def is_constant_one(self) -> bool:
        return self._c[0] == 1 and not any(self._c[1:])

    def _coerce(self, other) -> "PSeries | None":
        if isinstance(other, PSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PSeries([other], order=self.order)
        return None

    def __eq__(self, other) -> bool:
        # Equality is coefficientwise up to the common truncation order.
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        m = min(self.order, rhs.order)
        return self._c[: m + 1] == rhs._c[: m + 1]

    __hash__ = None

    def __neg__(self) -> "PSeries":
        return PSeries([-x for x in self._c])

    def __add__(self, other) -> "PSeries":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        m = min(self.order, rhs.order)
        return PSeries([self._c[i] + rhs._c[i] for i in range(m + 1)])

    __radd__ = __add__

    def __sub__(self, other) -> "PSeries":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self.__add__(-rhs)

    def __rsub__(self, other) -> "PSeries":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs.__add__(-self)

    def __mul__(self, other) -> "PSeries":
        if isinstance(other, (int, Fraction)):
            return PSeries([x * other for x in self._c])
        if not isinstance(other, PSeries):
            return NotImplemented
        m = min(self.order, other.order)
        a, b = self._c, other._c
        out = []
        for n in range(m + 1):
            out.append(sum(a[i] * b[n - i] for i in range(n + 1)))
        return PSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PSeries":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return PSeries([x / other for x in self._c])
        if not isinstance(other, PSeries):
            return NotImplemented
        if other._c[0] == 0:
            raise ValueError("division requires a nonzero constant term")
        m = min(self.order, other.order)
        a, b = self._c, other._c
        q: list[Fraction] = []
        for n in range(m + 1):
            acc = a[n] - sum(q[i] * b[n - i] for i in range(n))
            q.append(acc / b[0])
        return PSeries(q)

    def __repr__(self) -> str:
        head = ", ".join(str(x) for x in self._c[:6])
        tail = ", ..." if self.order >= 6 else ""
        return f"PSeries([{head}{tail}], order={self.order})"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [str(x) for x in self._c],
        }


def ps_derivative(s: PSeries) -> PSeries:
    if s.order == 0:
        return PSeries([0])
    return PSeries([i * s.coefficients[i] for i in range(1, s.order + 1)])


def ps_exp(s: PSeries) -> PSeries:
    """exp of a series with zero constant term."""
    if s[0] != 0:
        raise ValueError("ps_exp requires a zero constant term")
    m = s.order
    c = s.coefficients
    out = [Fraction(1)]
    for n in range(1, m + 1):
        out.append(sum(j * c[j] * out[n - j] for j in range(1, n + 1)) / n)
    return PSeries(out)


def ps_log(s: PSeries) -> PSeries:
    """log of a series with constant term 1."""
    if s[0] != 1:
        raise ValueError("ps_log requires constant term 1")
    m = s.order
    if m == 0:
        return PSeries([0])
    quotient = ps_derivative(s) / s.truncate(m - 1)
    out = [Fraction(0)]
    for n in range(1, m + 1):
        out.append(quotient[n - 1] / n)
    return PSeries(out)


def ps_pow(s: PSeries, exponent: Coeff) -> PSeries:
    """s**exponent for any exact rational exponent, via exp(exponent*log s);
    requires constant term 1."""
    if s[0] != 1:
        raise ValueError("ps_pow requires constant term 1")
    return ps_exp(ps_log(s) * Fraction(exponent))


def ps_substitute_power(s: PSeries, m: int) -> PSeries:
    """s(z^m). Knowing s to order M determines the result to order
    (M+1)*m - 1: intermediate indices are exactly zero."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    new_order = (s.order + 1) * m - 1
    out = [Fraction(0)] * (new_order + 1)
    for i, x in enumerate(s.coefficients):
        out[i * m] = x
    return PSeries(out)


def ps_revert(s: PSeries) -> PSeries:
    """Compositional inverse of s = z + O(z^2) with unit linear coefficient,
    by Lagrange inversion: [q^n] inverse = (1/n) [z^(n-1)] (z/s)^n."""
    if s[0] != 0 or s.order < 1 or s[1] != 1:
        raise ValueError("ps_revert requires s = z + O(z^2) with linear coefficient 1")
    m = s.order
    w = PSeries([1], order=m - 1) if m == 1 else (
        PSeries([1], order=m - 1) / PSeries(s.coefficients[1:])
    )
    out = [Fraction(0), Fraction(1)]
    power = w
    for n in range(2, m + 1):
        power = power * w
        out.append(power[n - 1] / n)
    return PSeries(out)


def integrality_check(s: PSeries) -> int | None:
    """Index of the first non-integral coefficient, or None when every
    coefficient up to the order is an integer."""
    for i, x in enumerate(s.coefficients):
        if x.denominator != 1:
            return i
    return None


def p_integral_violation(s: PSeries, p: int) -> int | None:
    """Index of the first coefficient with v_p < 0, or None."""
    for i, x in enumerate(s.coefficients):
        if x.denominator % p == 0:
            return i
    return None


def _validate_build(N: int, k: int, order: int) -> None:
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive integers")
    if order < 0:
        raise ValueError("order must be non-negative")


def build_F(N: int, k: int, order: int) -> PSeries:
    """sum_m ((Nm)!/m!^N)^k z^m."""
    _validate_build(N, k, order)
    return PSeries(big_B_sequence(N, k, order)[: order + 1])


def build_G(N: int, k: int, order: int) -> PSeries:
    """sum_{m>=1} kN (H_{Nm} - H_m) ((Nm)!/m!^N)^k z^m."""
    _validate_build(N, k, order)
    b = big_B_sequence(N, k, order)
    out = [Fraction(0)]
    for m in range(1, order + 1):
        out.append(k * N * (harmonic(N * m) - harmonic(m)) * b[m])
    return PSeries(out, order=order)


def build_GL(L: int, N: int, k: int, order: int) -> PSeries:
    """sum_{m>=1} H_{Lm} ((Nm)!/m!^N)^k z^m."""
    if L < 1:
        raise ValueError("L must be a positive integer")
    _validate_build(N, k, order)
    b = big_B_sequence(N, k, order)
    out = [Fraction(0)]
    for m in range(1, order + 1):
        out.append(harmonic(L * m) * b[m])
    return PSeries(out, order=order)


def build_Gtilde(N: int, k: int, order: int) -> PSeries:
    """sum_{m>=1} (H_{Nm} - H_m) ((Nm)!/m!^N)^k z^m."""
    _validate_build(N, k, order)
    b = big_B_sequence(N, k, order)
    out = [Fraction(0)]
    for m in range(1, order + 1):
        out.append((harmonic(N * m) - harmonic(m)) * b[m])
    return PSeries(out, order=order)


def canonical_q(
    kind: str, N: int, k: int = 1, L: int | None = None, order: int = 25
) -> PSeries:
    """Canonical coordinates as series with constant term 1.

    qLN     exp(G_L / F), requires L
    qN      z^{-1} q(z) = exp(G / F)
    qtilde  (z^{-1} q(z))^{1/kN} = exp(G-tilde / F)
    """
    if kind == KIND_QLN:
        if L is None:
            raise ValueError("qLN requires L")
        g = build_GL(L, N, k, order)
    elif kind == KIND_QN:
        g = build_G(N, k, order)
    elif kind == KIND_QTILDE:
        g = build_Gtilde(N, k, order)
    else:
        raise ValueError(f"kind must be one of {CANONICAL_KINDS}")
    return ps_exp(g / build_F(N, k, order))


@dataclass(frozen=True)
class RootPrime:
    p: int
    exponent: int
    witness: int | None

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.exponent, "witness": self.witness}


@dataclass(frozen=True)
class RootCertificate:
    """Maximal integral root search outcome, valid to the stated order.

    For each prime, s^(1/p^e) is p-integral to the order while the witness
    index carries a coefficient of s^(1/p^(e+1)) with negative valuation; the
    integrality half is a truncation certificate, each witness is an
    unconditional fact.
    """

    order: int
    primes: tuple[RootPrime, ...]
    V: int
    status: str
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "primes": [f.to_json() for f in self.primes],
            "V": str(self.V),
            "status": self.status,
            "degenerate": self.degenerate,
        }


def _factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division; adequate at desk scale."""
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def max_root(s: PSeries) -> RootCertificate:
    """Largest V (to the truncation order) with s^(1/V) integral.

    Only primes dividing the first nonzero non-constant coefficient c can
    divide V, with exponent at most v_p(c): the root series starts
    1 + (c/V) z^i + ..., so anything beyond fails already at index i.
    """
    if s[0] != 1:
        raise ValueError("max_root requires constant term 1")
    bad = integrality_check(s)
    if bad is not None:
        raise ValueError(f"series has a non-integral coefficient at index {bad}")
    first = next((i for i in range(1, s.order + 1) if s[i] != 0), None)
    if first is None:
        return RootCertificate(
            order=s.order, primes=(), V=1, status=STATUS_CERTIFIED, degenerate=True
        )
    c = abs(int(s[first]))
    primes = []
    V = 1
    for p, vmax in sorted(_factorize(c).items()):
        e = 0
        witness = None
        while e < vmax:
            candidate = ps_pow(s, Fraction(1, p ** (e + 1)))
            witness = p_integral_violation(candidate, p)
            if witness is not None:
                break
            e += 1
        if witness is None:
            # Bound reached cleanly; one extra power must fail at `first`.
            witness = p_integral_violation(ps_pow(s, Fraction(1, p ** (e + 1))), p)
        primes.append(RootPrime(p, e, witness))
        V *= p**e
    return RootCertificate(
        order=s.order, primes=tuple(primes), V=V, status=STATUS_CERTIFIED
    )


def dwork_criterion(
    f: PSeries, g: PSeries, tau: int, p: int
) -> tuple[bool, int | None]:
    """Whether f(z) g(z^p) - p f(z^p) g(z) lies in p*tau*z*Z_p[[z]] up to the
    common order; on failure also the first violating index.

    With f in 1 + z Z[[z]] and g in z Q[[z]] this holds exactly when
    exp(g / (tau f)) has p-integral coefficients.
    """
    require_prime(p)
    if tau < 1:
        raise ValueError("tau must be a positive integer")
    if f[0] != 1:
        raise ValueError("f must have constant term 1")
    bad = integrality_check(f)
    if bad is not None:
        raise ValueError(f"f must have integral coefficients (index {bad})")
    if g[0] != 0:
        raise ValueError("g must have zero constant term")
    diff = f * ps_substitute_power(g, p) - p * ps_substitute_power(f, p) * g
    need = 1 + vp_int(tau, p)
    for i in range(1, diff.order + 1):
        x = diff[i]
        if x != 0 and vp_rational(x, p) < need:
            return False, i
    return True, None


def verify_truemap_identity(N: int, k: int, order: int) -> bool:
    """Coefficientwise check that z^{-1} q(z) equals
    (q_{L=N} / q_{L=1})^{kN} up to the truncation order."""
    _validate_build(N, k, order)
    lhs = canonical_q(KIND_QN, N, k, order=order)
    q_nn = canonical_q(KIND_QLN, N, k, L=N, order=order)
    q_1n = canonical_q(KIND_QLN, N, k, L=1, order=order)
    rhs = ps_pow(q_nn, k * N) * ps_pow(q_1n, -k * N)
    return lhs == rhs
