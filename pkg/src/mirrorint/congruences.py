"""Coefficient-level congruences behind the integral-root theorems: the
convolution sums C and C-tilde, Dwork's decomposition of their harmonic part
into S-sums and Y-terms, per-lemma membership checks with explicit valuation
margins, and the optimality witnesses showing the root constants are sharp.

Membership checks never return a bare boolean: they carry the achieved and
required valuations, because sharpness arguments are precisely about the
margin (e.g. failure at exactly one extra power of p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .constants import omega, xi
from .harmonic import ModularHarmonicSum, harmonic, is_wolstenholme
from .padic import (
    INFINITE,
    big_B,
    big_B_sequence,
    factorial_unit_mod,
    require_prime,
    vp_big_B,
    vp_factorial,
    vp_int,
    vp_rational,
)

WHICH_XI = "Xi"
WHICH_OMEGA = "Omega"


@dataclass(frozen=True)
class Membership:
    """v_p membership report: value in p^required * Z_p, with margin."""

    achieved: int | float
    required: int

    @property
    def margin(self) -> int | float:
        return self.achieved - self.required

    @property
    def holds(self) -> bool:
        return self.achieved >= self.required


def _validate_core(N: int, k: int, p: int, a: int, K: int) -> None:
    require_prime(p)
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive integers")
    if not 0 <= a < p:
        raise ValueError("a must satisfy 0 <= a < p")
    if K < 0:
        raise ValueError("K must be non-negative")


def _b(row: list[int], n: int) -> int:
    # Convention: the coefficient vanishes at negative indices.
    return row[n] if n >= 0 else 0


def coeff_C(N: int, k: int, p: int, a: int, K: int) -> Fraction:
    """sum_{j=0..K} B(a+jp) B(K-j) (H_{N(K-j)} - p H_{N(a+jp)}).

    This is exactly the (a+Kp)-th coefficient of F(z) G_L(z^p) - p F(z^p)
    G_L(z) with L = N.
    """
    _validate_core(N, k, p, a, K)
    b = big_B_sequence(N, k, a + K * p)
    total = Fraction(0)
    for j in range(K + 1):
        total += (
            b[a + j * p]
            * b[K - j]
            * (harmonic(N * (K - j)) - p * harmonic(N * (a + j * p)))
        )
    return total


def coeff_C_tilde(N: int, k: int, p: int, a: int, K: int) -> Fraction:
    """Shifted analogue of coeff_C, with harmonic differences H_{Nm} - H_m;
    the (a+Kp)-th coefficient of F(z) Gt(z^p) - p F(z^p) Gt(z)."""
    _validate_core(N, k, p, a, K)
    b = big_B_sequence(N, k, a + K * p)
    total = Fraction(0)
    for j in range(K + 1):
        low = K - j
        high = a + j * p
        total += (
            b[high]
            * b[low]
            * (
                (harmonic(N * low) - harmonic(low))
                - p * (harmonic(N * high) - harmonic(high))
            )
        )
    return total


def _constant_vp(which: str, N: int, p: int) -> int:
    if which == WHICH_XI:
        return xi(N).exponent_of(p)
    if which == WHICH_OMEGA:
        return omega(N).exponent_of(p)
    raise ValueError(f"which must be {WHICH_XI!r} or {WHICH_OMEGA!r}")


def check_theorem_congruence(
    N: int, k: int, p: int, a: int, K: int, which: str = WHICH_XI
) -> Membership:
    """Membership of C(a+Kp) in p * xi(N) * N!^k * Z_p (or of the shifted sum
    in p * omega(N) * N!^k * Z_p)."""
    if which == WHICH_OMEGA and N < 2:
        raise ValueError("the shifted variant requires N >= 2")
    value = coeff_C(N, k, p, a, K) if which == WHICH_XI else coeff_C_tilde(N, k, p, a, K)
    required = 1 + _constant_vp(which, N, p) + k * vp_factorial(N, p)
    achieved = INFINITE if value == 0 else vp_rational(value, p)
    return Membership(achieved=achieved, required=required)


def S_sum(N: int, k: int, p: int, a: int, K: int, s: int, m: int) -> int:
    """sum_{j = m p^s .. (m+1) p^s - 1} of
    B(a+jp) B(K-j) - B(j) B(a+(K-j)p), coefficients vanishing at negative
    indices."""
    _validate_core(N, k, p, a, K)
    if s < 0 or m < 0:
        raise ValueError("s and m must be non-negative")
    lo = m * p**s
    if lo > K:
        return 0
    b = big_B_sequence(N, k, a + K * p)
    total = 0
    for j in range(lo, min((m + 1) * p**s, K + 1)):
        total += b[a + j * p] * _b(b, K - j) - _b(b, j) * _b(b, a + (K - j) * p)
    return total


def check_dwork_S(N: int, k: int, p: int, a: int, K: int, s: int, m: int) -> Membership:
    """Membership of the S-sum in p^(s+1) B(m) Z_p."""
    value = S_sum(N, k, p, a, K, s, m)
    required = s + 1 + vp_big_B(N, k, m, p)
    achieved = INFINITE if value == 0 else vp_int(value, p)
    return Membership(achieved=achieved, required=required)


def Y_term(N: int, k: int, p: int, a: int, K: int, s: int, m: int) -> Fraction:
    """(H_{N m p^s} - H_{N floor(m/p) p^(s+1)}) * S(a, K, s, p, m)."""
    value = S_sum(N, k, p, a, K, s, m)
    if value == 0:
        return Fraction(0)
    return (harmonic(N * m * p**s) - harmonic(N * (m // p) * p ** (s + 1))) * value


def check_Y(N: int, k: int, p: int, a: int, K: int, s: int, m: int) -> Membership:
    """Membership of the Y-term in p * xi(N) * N!^k * Z_p."""
    value = Y_term(N, k, p, a, K, s, m)
    required = 1 + _constant_vp(WHICH_XI, N, p) + k * vp_factorial(N, p)
    achieved = INFINITE if value == 0 else vp_rational(value, p)
    return Membership(achieved=achieved, required=required)


@dataclass(frozen=True)
class DecompositionCheck:
    """Both evaluations of the harmonic convolution sum, at depth r and r+1."""

    r: int
    lhs: Fraction
    rhs: Fraction
    rhs_next: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs == self.rhs_next


def check_decomposition(
    N: int, k: int, p: int, a: int, K: int, r: int | None = None
) -> DecompositionCheck:
    """Identity between sum_j H_{Nj} (B(a+jp)B(K-j) - B(j)B(a+(K-j)p)) and
    the double sum of Y-terms over s <= r, m < p^(r+1-s), for any r with
    K < p^r; verified at r and again at r + 1."""
    _validate_core(N, k, p, a, K)
    r_min = 0
    while K >= p**r_min:
        r_min += 1
    if r is None:
        r = r_min
    elif K >= p**r:
        raise ValueError(f"r must satisfy K < p^r (minimal r is {r_min})")

    b = big_B_sequence(N, k, a + K * p)
    lhs = Fraction(0)
    for j in range(K + 1):
        lhs += harmonic(N * j) * (
            b[a + j * p] * _b(b, K - j) - _b(b, j) * _b(b, a + (K - j) * p)
        )

    def rhs_at(depth: int) -> Fraction:
        total = Fraction(0)
        for s in range(depth + 1):
            for m in range(p ** (depth + 1 - s)):
                if m * p**s > K:
                    break
                total += Y_term(N, k, p, a, K, s, m)
        return total

    return DecompositionCheck(r=r, lhs=lhs, rhs=rhs_at(r), rhs_next=rhs_at(r + 1))


def check_lemma12(
    N: int, k: int, p: int, a: int, j: int, K: int | None = None
) -> Membership:
    """Membership of B(a+pj) (H_{Nj + floor(Na/p)} - H_{Nj}) in
    p * xi(N) * N!^k * Z_p; the (a=1, j=0) variant instead checks
    B(1) B(K) H_{floor(N/p)} and requires K >= 1."""
    _validate_core(N, k, p, a, max(K or 0, 0))
    if j < 0:
        raise ValueError("j must be non-negative")
    required = 1 + _constant_vp(WHICH_XI, N, p) + k * vp_factorial(N, p)
    if a == 1 and j == 0:
        if K is None or K < 1:
            raise ValueError("the a=1, j=0 variant requires K >= 1")
        value = Fraction(big_B(N, k, 1) * big_B(N, k, K) * harmonic(N // p))
    else:
        value = Fraction(big_B(N, k, a + p * j)) * (
            harmonic(N * j + (N * a) // p) - harmonic(N * j)
        )
    achieved = INFINITE if value == 0 else vp_rational(value, p)
    return Membership(achieved=achieved, required=required)


def check_lemma11(
    N: int, k: int, p: int, m: int, s: int, which: str = WHICH_XI
) -> Membership:
    """Membership of B(m) (H_{N m p^s} - H_{N floor(m/p) p^(s+1)}) in
    p^(-s) * xi(N) * N!^k * Z_p; the shifted variant subtracts the plain
    harmonic differences and uses omega(N)."""
    require_prime(p)
    if N < 1 or k < 1 or m < 0 or s < 0:
        raise ValueError("invalid parameters")
    if which == WHICH_OMEGA and N < 2:
        raise ValueError("the shifted variant requires N >= 2")
    hi = N * m * p**s
    lo = N * (m // p) * p ** (s + 1)
    if which == WHICH_XI:
        diff = harmonic(hi) - harmonic(lo)
    else:
        diff = (harmonic(hi) - harmonic(m * p**s)) - (
            harmonic(lo) - harmonic((m // p) * p ** (s + 1))
        )
    value = Fraction(big_B(N, k, m)) * diff
    required = -s + _constant_vp(which, N, p) + k * vp_factorial(N, p)
    achieved = INFINITE if value == 0 else vp_rational(value, p)
    return Membership(achieved=achieved, required=required)


def optimality_witness(N: int, p: int, shifted: bool = False) -> tuple[int, int]:
    """The witness a showing primes p > N cannot divide the maximal root:
    a is minimal with a*N >= p (a = 1 when N = 1), and
    v_p(B_N(a) * H_{Na}) = 0 (shifted: with H_{Na} - H_a). Returns (a, v)."""
    require_prime(p)
    if N < 1:
        raise ValueError("N must be a positive integer")
    if p <= N:
        raise ValueError("the witness construction requires p > N")
    if shifted and N < 2:
        raise ValueError("the shifted witness requires N >= 2")
    a = 1 if N == 1 else -(-p // N)
    value = big_B(N, 1, a) * (harmonic(N * a) - (harmonic(a) if shifted else 0))
    return a, vp_rational(value, p)


@dataclass(frozen=True)
class RootSharpnessProbe:
    """Outcome of the conditional sharpness probe at a pair with
    v_p(H_N) = 3: the coefficient C(p) = B(1) H_N - p B(p) H_{Np} must miss
    p^4 N! Z_p, pinning the exponent of p in the maximal root."""

    p: int
    N: int
    harmonic_valuation: int
    achieved: int
    required: int

    @property
    def margin(self) -> int:
        return self.achieved - self.required

    @property
    def outside(self) -> bool:
        return self.achieved < self.required


def vp3_probe(p: int, N: int) -> RootSharpnessProbe:
    """Sharpness probe at user-supplied (p, N) with v_p(H_N) = 3, p <= N,
    p not Wolstenholme, p not dividing N (k = 1 throughout).

    Large N is fine: everything is evaluated p-adically to five digits; the
    harmonic residues come from the modular accumulator and the coefficient
    B(p) = (Np)!/p!^N enters only through its p-free part.
    """
    require_prime(p)
    if p < 7:
        raise ValueError("the probe applies to primes p >= 7")
    if p > N:
        raise ValueError("requires p <= N")
    if N % p == 0:
        raise ValueError("requires p not dividing N")
    if is_wolstenholme(p):
        raise ValueError("requires a non-Wolstenholme prime")

    acc = ModularHarmonicSum(p, cap=4)
    acc.advance_to(N)
    v_h, capped = acc.valuation()
    if capped:
        raise ValueError(
            f"v_{p}(H_{N}) is at least 4; beyond the probe's precondition "
            "(and a conjecture-level event in itself)"
        )
    if v_h != 3:
        raise ValueError(f"requires v_p(H_N) = 3, found {v_h}")
    mod5 = p**5
    h_n = acc.residue(5)
    acc.advance_to(N * p)
    h_np = acc.residue(4)

    vfact = vp_factorial(N, p)
    v_bp = vp_factorial(N * p, p) - N * vp_factorial(p, p)
    if v_bp != vfact:
        raise ArithmeticError("scale invariance of v_p(B(p)) failed")
    unit_b1 = factorial_unit_mod(N, p, 5)
    unit_bp = (
        factorial_unit_mod(N * p, p, 5)
        * pow(factorial_unit_mod(p, p, 5), -N, mod5)
    ) % mod5

    inner = (unit_b1 * h_n - unit_bp * (p * h_np)) % mod5
    v_inner = 5 if inner == 0 else vp_int(inner, p)
    return RootSharpnessProbe(
        p=p,
        N=N,
        harmonic_valuation=v_h,
        achieved=vfact + v_inner,
        required=4 + vfact,
    )


# ---------------------------------------------------------------------------
# Sweep iterators: one dict per parameter tuple, for JSONL reporting. All
# grids are table-driven and bounded by their arguments.


def _margin_json(m: int | float) -> int | str:
    return "inf" if m == INFINITE else int(m)


def _row(check: str, params: dict, holds: bool, margin) -> dict:
    return {"check": check, "params": params, "holds": holds, "margin": margin}


def iter_theorem_congruence(
    primes: list[int], n_max: int, k_max: int, sum_max: int, which: str = WHICH_XI
):
    n_lo = 2 if which == WHICH_OMEGA else 1
    for p in primes:
        for N in range(n_lo, n_max + 1):
            for k in range(1, k_max + 1):
                for a in range(p):
                    for K in range((sum_max - a) // p + 1):
                        rep = check_theorem_congruence(N, k, p, a, K, which)
                        yield _row(
                            "theorem-congruence",
                            {"which": which, "p": p, "N": N, "k": k, "a": a, "K": K},
                            rep.holds,
                            _margin_json(rep.margin),
                        )


def _dwork_grid(primes, n_max, k_max, K_max, s_max):
    for p in primes:
        for N in range(1, n_max + 1):
            for k in range(1, k_max + 1):
                for a in range(p):
                    for K in range(K_max + 1):
                        for s in range(s_max + 1):
                            for m in range(K // p**s + 2):
                                yield p, N, k, a, K, s, m


def iter_dwork_S(primes: list[int], n_max: int, k_max: int, K_max: int, s_max: int):
    for p, N, k, a, K, s, m in _dwork_grid(primes, n_max, k_max, K_max, s_max):
        rep = check_dwork_S(N, k, p, a, K, s, m)
        yield _row(
            "dworkS",
            {"p": p, "N": N, "k": k, "a": a, "K": K, "s": s, "m": m},
            rep.holds,
            _margin_json(rep.margin),
        )


def iter_Y(primes: list[int], n_max: int, k_max: int, K_max: int, s_max: int):
    for p, N, k, a, K, s, m in _dwork_grid(primes, n_max, k_max, K_max, s_max):
        rep = check_Y(N, k, p, a, K, s, m)
        yield _row(
            "yms",
            {"p": p, "N": N, "k": k, "a": a, "K": K, "s": s, "m": m},
            rep.holds,
            _margin_json(rep.margin),
        )


def iter_decomposition(primes: list[int], n_max: int, k_max: int, K_values: list[int]):
    for p in primes:
        for N in range(1, n_max + 1):
            for k in range(1, k_max + 1):
                for a in range(p):
                    for K in K_values:
                        rep = check_decomposition(N, k, p, a, K)
                        yield _row(
                            "decomposition",
                            {"p": p, "N": N, "k": k, "a": a, "K": K, "r": rep.r},
                            rep.equal,
                            None,
                        )


def iter_lemma11(
    primes: list[int], n_max: int, k_max: int, m_max: int, s_max: int, which: str
):
    n_lo = 2 if which == WHICH_OMEGA else 1
    for p in primes:
        for N in range(n_lo, n_max + 1):
            for k in range(1, k_max + 1):
                for m in range(m_max + 1):
                    for s in range(s_max + 1):
                        rep = check_lemma11(N, k, p, m, s, which)
                        yield _row(
                            "lemma11",
                            {
                                "which": which,
                                "p": p,
                                "N": N,
                                "k": k,
                                "m": m,
                                "s": s,
                            },
                            rep.holds,
                            _margin_json(rep.margin),
                        )


def iter_lemma12(
    primes: list[int], n_max: int, k_max: int, j_max: int, K_max: int
):
    for p in primes:
        for N in range(1, n_max + 1):
            for k in range(1, k_max + 1):
                for a in range(p):
                    if a == 1:
                        for K in range(1, K_max + 1):
                            rep = check_lemma12(N, k, p, a, 0, K)
                            yield _row(
                                "lemma12",
                                {"p": p, "N": N, "k": k, "a": a, "j": 0, "K": K},
                                rep.holds,
                                _margin_json(rep.margin),
                            )
                        j_range = range(1, j_max + 1)
                    else:
                        j_range = range(j_max + 1)
                    for j in j_range:
                        rep = check_lemma12(N, k, p, a, j)
                        yield _row(
                            "lemma12",
                            {"p": p, "N": N, "k": k, "a": a, "j": j},
                            rep.holds,
                            _margin_json(rep.margin),
                        )


def iter_j_congruence(p_max: int, J_max: int):
    from .harmonic import check_harmonic_congruence
    from .padic import primes_upto

    for p in primes_upto(p_max):
        for J in range(1, J_max + 1):
            rep = check_harmonic_congruence("J_mod_p", p, J=J)
            yield _row(
                "j-mod-p",
                {"p": p, "J": J},
                rep.holds,
                _margin_json(rep.achieved - rep.required),
            )


def iter_optimality_witnesses(n_max: int, p_max: int, shifted: bool):
    from .padic import primes_upto

    n_lo = 2 if shifted else 1
    for N in range(n_lo, n_max + 1):
        for p in primes_upto(p_max):
            if p <= N:
                continue
            a, v = optimality_witness(N, p, shifted)
            yield _row(
                "witness",
                {"which": "u" if shifted else "t", "N": N, "p": p, "a": a},
                v == 0,
                v,
            )


def iter_wolstenholme(p_min: int, p_max: int):
    from .harmonic import wolstenholme_valuation
    from .padic import primes_upto

    for p in primes_upto(p_max):
        if p < max(5, p_min):
            continue
        v = wolstenholme_valuation(p, cap=3)
        yield _row("wolstenholme", {"p": p, "v_capped": v}, v >= 2, v - 2)
