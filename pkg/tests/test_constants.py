import json
import math
from fractions import Fraction as F

import pytest

from mirrorint.constants import (
    DegenerateCase,
    omega,
    omega_indicator,
    omega_simplified,
    t_conjectured,
    theta,
    u_conjectured,
    xi,
    xi_indicator,
    xi_simplified,
)
from mirrorint.harmonic import harmonic, vp_harmonic
from mirrorint.padic import primes_upto, vp_rational


class TestTheta:
    def test_examples(self):
        assert theta(7) == 140
        assert theta(1) == 1
        assert theta(2) == 2

    def test_matches_product_form(self):
        # theta is internally asserted against the valuation product; here we
        # recompute the product independently.
        for L in range(1, 201):
            h = harmonic(L)
            product = 1
            for p in primes_upto(L):
                v = vp_rational(h, p)
                if v < 0:
                    product *= p ** (-v)
            assert theta(L) == product == h.denominator


class TestIndicators:
    def test_xi_examples(self):
        assert xi_indicator(5, 20) == 1  # divisibility branch
        assert xi_indicator(11, 848) == 0  # 848 = 77*11 + 1
        assert xi_indicator(16843, 16843) == 1

    def test_xi_wolstenholme_convention(self):
        # For p in {2, 3} only the divisibility branch can fire.
        assert xi_indicator(2, 5_000) == 1  # 2 | 5000
        assert xi_indicator(3, 5_000) == 0
        assert xi_indicator(2, 999) == 0

    def test_xi_range_enforced(self):
        with pytest.raises(ValueError):
            xi_indicator(7, 5)
        with pytest.raises(ValueError):
            xi_indicator(4, 10)

    def test_omega_examples(self):
        assert omega_indicator(5, 4) == 1  # 4 = -1 mod 5
        assert omega_indicator(5, 22) == 0
        assert omega_indicator(3, 7) == 1  # 7 = 1 mod 3


class TestXi:
    def test_special_cases(self):
        b7 = xi(7)
        assert b7.product == F(1, 140) and b7.special_case
        assert b7.exponent_of(3) == 0  # the generic formula would give 1
        b1 = xi(1)
        assert b1.product == 1 and b1.factors == ()

    def test_n20_exponent(self):
        b = xi(20)
        assert b.exponent_of(5) == 1  # v_5(H_20) = 1 wins over the cap 3
        assert not b.special_case

    def test_breakdown_invariants(self):
        for N in list(range(2, 201)):
            if N == 7:
                continue
            b = xi(N)
            h = harmonic(N)
            product = F(1)
            for f in b.factors:
                v = vp_rational(h, f.p)
                assert f.exponent == min(2 + f.indicator, v)
                assert f.exponent <= 2 + f.indicator
                assert f.exponent <= v
                assert f.indicator == xi_indicator(f.p, N)
                product *= F(f.p) ** f.exponent
            assert product == b.product
            assert {f.p for f in b.factors} == set(primes_upto(N))

    def test_sharpness_vs_denominator(self):
        # xi(N) * theta(N) is an integer: every negative exponent in xi is
        # matched by the harmonic denominator.
        for N in range(1, 201):
            assert (xi(N).product * theta(N)).denominator == 1

    def test_json_schema(self):
        doc = xi(7).to_json()
        assert doc["N"] == 7 and doc["product"] == "1/140" and doc["special_case"]
        assert all(set(f) == {"p", "e", "indicator", "branch"} for f in doc["factors"])
        json.dumps(doc)  # serializable


class TestOmega:
    def test_examples(self):
        assert omega(2).product == F(1, 2)
        assert omega(3).product == F(1, 6)
        assert omega(21).exponent_of(5) == 1

    def test_n1_rejected(self):
        with pytest.raises(ValueError):
            omega(1)

    def test_breakdown_invariants(self):
        for N in range(2, 201):
            b = omega(N)
            h = harmonic(N) - 1
            product = F(1)
            for f in b.factors:
                v = vp_rational(h, f.p)
                assert f.exponent == min(2 + f.indicator, v)
                product *= F(f.p) ** f.exponent
            assert product == b.product


class TestSimplifiedForms:
    def test_domain(self):
        with pytest.raises(ValueError):
            xi_simplified(7)
        with pytest.raises(ValueError):
            xi_simplified(1)
        with pytest.raises(ValueError):
            omega_simplified(1)

    def test_agreement_up_to_1000(self):
        # A disagreement would exhibit v_p >= 3 together with indicator 1;
        # no such pair exists in this range.
        for N in range(2, 1001):
            if N != 7:
                value, agrees = xi_simplified(N)
                assert agrees, N
            value, agrees = omega_simplified(N)
            assert agrees, N


class TestConjecturedSequences:
    def test_t_examples(self):
        assert t_conjectured(7, 1) == (F(36), True)
        assert t_conjectured(1, 1) == (F(1), True)
        assert t_conjectured(2, 1) == (F(1), True)

    def test_u_examples(self):
        assert u_conjectured(2) == (F(1), True)
        assert u_conjectured(3) == (F(1), True)
        value, integral = u_conjectured(21)
        assert integral
        assert vp_rational(value, 5) == vp_rational(F(math.factorial(21)), 5) + 1

    def test_u1_degenerate(self):
        with pytest.raises(DegenerateCase):
            u_conjectured(1)

    def test_integrality_up_to_200(self):
        for N in range(1, 201):
            value, integral = t_conjectured(N, 1)
            assert integral, N
            value2, integral2 = t_conjectured(N, 2)
            assert integral2, N
            if N >= 2:
                value, integral = u_conjectured(N)
                assert integral, N

    def test_first_strict_improvements(self):
        # N = 20 is the least N != 7 where xi has a positive exponent, and
        # N = 21 the least where omega does.
        assert all(
            all(f.exponent <= 0 for f in xi(N).factors)
            for N in range(2, 20)
            if N != 7
        )
        assert any(f.exponent > 0 for f in xi(20).factors)
        assert all(
            all(f.exponent <= 0 for f in omega(N).factors) for N in range(2, 21)
        )
        assert any(f.exponent > 0 for f in omega(21).factors)
