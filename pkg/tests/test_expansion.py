import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrl import core, expansion
from mrl.errors import CapabilityError, DomainError, StabilityError
from mrl.models import make_model
from mrl.quadrature import integrate_adaptive

# frozen from scripts/freeze_oracles.py (mpmath, 40 digits)
PHI_1_2_0 = 0.5456413607650470421
CHEN_M6 = 0.40345969795604617953
LINEAR_0_1_M50 = 0.019992009580853567311

CHEN = make_model("chen", **{"lambda": 1.0, "beta": 0.5})


def rel(a, b):
    return abs(a - b) / abs(b)


class TestCoefficients:
    def test_all_zero(self):
        assert expansion.coeffs_recurrence([0.0] * 4, 6).b == (1, 0, 0, 0, 0, 0, 0)

    def test_one_step(self):
        assert expansion.coeffs_recurrence([6.0], 3).b[3] == -1.0

    def test_fifth_derivative_only(self):
        s = Fraction(7, 3)
        b = expansion.coeffs_recurrence([0, 0, 0, s], 6).b
        assert b[6] == -s / 720

    def test_initial_values(self):
        for derivs in ([], [1.0], [3.0, -2.0, 5.0]):
            b = expansion.coeffs_recurrence(derivs, len(derivs) + 2).b
            assert b[:3] == (1, 0, 0)

    def test_insufficient(self):
        with pytest.raises(CapabilityError):
            expansion.coeffs_recurrence([1.0], 5)

    def test_multinomial_hand_values(self):
        r2, r5 = Fraction(3, 2), Fraction(-5, 7)
        d = [r2, Fraction(0), Fraction(0), r5]
        assert [expansion.coeffs_multinomial(d, k) for k in range(3)] == [1, 0, 0]
        assert expansion.coeffs_multinomial(d, 3) == -r2 / 6
        assert expansion.coeffs_multinomial(d, 6) == r2 * r2 / 72 - r5 / 720

    def test_multinomial_cap(self):
        with pytest.raises(DomainError):
            expansion.coeffs_multinomial([1.0] * 20, 13)
        assert expansion.coeffs_multinomial([Fraction(1)] * 20, 13, max_k=13) == (
            expansion.coeffs_recurrence([Fraction(1)] * 20, 13).b[13]
        )

    def test_exact_fractions_agree(self):
        rng = random.Random(7)
        for _ in range(20):
            d = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(11)]
            b = expansion.coeffs_recurrence(d, 12).b
            assert all(b[k] == expansion.coeffs_multinomial(d, k) for k in range(13))

    @settings(max_examples=100)
    @given(st.lists(st.floats(-5.0, 5.0), min_size=11, max_size=11))
    def test_recurrence_matches_enumeration(self, derivs):
        b = expansion.coeffs_recurrence(derivs, 12).b
        for k in range(13):
            m = expansion.coeffs_multinomial(derivs, k)
            assert abs(b[k] - m) <= max(1e-13, 1e-11 * abs(m))


class TestPhi:
    def test_lemma_examples(self):
        seq = expansion.phi_lemma(0.0, 1.0, 1)
        assert rel(seq.phi[0], math.sqrt(math.pi / 2.0)) <= 1e-15
        assert rel(seq.phi[1], 1.0) <= 1e-15
        ref = integrate_adaptive(lambda x: math.exp(-x - x * x), 0.0, 12.0, rel_tol=1e-13).value
        v = expansion.phi_lemma(1.0, 2.0, 0).phi[0]
        assert rel(v, ref) <= 1e-10
        assert rel(v, PHI_1_2_0) <= 1e-14

    def test_lemma_refuses_large_lambda(self):
        with pytest.raises(StabilityError):
            expansion.phi_lemma(10.0, 1.0, 3)

    def test_lemma_negative_a(self):
        for k in range(6):
            v, _ = expansion.lemma_integral(-2.0, 0.5, k)
            ref = integrate_adaptive(lambda x: x**k * math.exp(2.0 * x - 0.5 * x * x), 0.0, 20.0, rel_tol=1e-13)
            assert rel(v, ref.value) <= 1e-11

    def test_quadrature_examples(self):
        assert rel(expansion.phi_quadrature(0.0, 1.0, 0).value, math.sqrt(math.pi / 2.0)) <= 1e-10
        assert rel(expansion.phi_quadrature(1.0, 1.0, 3).value, expansion.phi_lemma(1.0, 1.0, 3).phi[3]) <= 1e-9
        rec = expansion.phi_recurrence(5.0, 0.1, 1).phi[1]
        assert rel(expansion.phi_quadrature(5.0, 0.1, 1).value, rec) <= 1e-9

    def test_recurrence_falls_back(self):
        # r^2/r' = 1e4: the forward recurrence cancels from k = 1 on
        seq = expansion.phi_recurrence(100.0, 1.0, 6)
        assert seq.method[0] == expansion.RECURRENCE
        assert expansion.QUADRATURE in seq.method
        for k, v in enumerate(seq.phi):
            assert rel(v, expansion.phi_quadrature(100.0, 1.0, k).value) <= 1e-9

    def test_sequence_tags(self):
        small = expansion.phi_sequence(1.0, 1.0, 4)
        assert set(small.method) == {expansion.LEMMA}
        big = expansion.phi_sequence(20.0, 1.0, 4)
        assert expansion.LEMMA not in big.method
        assert big.lam == 200.0

    def test_bad_r_prime(self):
        for fn in (expansion.phi_lemma, expansion.phi_recurrence, expansion.phi_sequence):
            with pytest.raises(DomainError):
                fn(1.0, 0.0, 2)


class TestExpansion:
    def test_linear_n1_exact(self):
        m = make_model("linear", alpha=1.0, beta=1.0)
        z = 3.0
        want = math.exp(z * z / 2.0) * (1.0 - 0.5 * math.erfc(-z / math.sqrt(2.0))) * math.sqrt(2.0 * math.pi)
        assert rel(expansion.mrl_expansion(m, 2.0, 1), want) <= 1e-12

    @pytest.mark.parametrize("t", [0.0, 0.5, 2.0, 7.0])
    def test_linear_independent_of_order(self, t):
        m = make_model("linear", alpha=0.5, beta=0.5)
        base = expansion.mrl_expansion(m, t, 1)
        for n in (2, 3, 6, 10):
            assert rel(expansion.mrl_expansion(m, t, n), base) <= 1e-10
        assert rel(base, expansion.linear_exact_mrl(0.5, 0.5, t)) <= 1e-10
        assert rel(base, core.mrl_quadrature(m, t, rel_tol=1e-12).value) <= 1e-10

    def test_chen_order_six(self):
        # oracle deviation at t=6, n=6 is 1.643e-5
        assert rel(expansion.mrl_expansion(CHEN, 6.0, 6), CHEN_M6) <= 2e-5

    def test_requires_increasing_hazard(self):
        with pytest.raises(DomainError, match="locally increasing"):
            expansion.mrl_expansion(CHEN, 0.1, 3)

    def test_requires_derivatives(self):
        with pytest.raises(CapabilityError):
            expansion.mrl_expansion(make_model("gamma", mu=2.0, B=1.0), 1.0, 3)

    def test_series_mode(self):
        res = expansion.mrl_expansion_series(make_model("linear", alpha=1.0, beta=1.0), 1.0)
        assert res.converged and res.terms_used == 6
        with pytest.raises(DomainError):
            expansion.mrl_expansion_series(make_model("linear", alpha=0.0, beta=1.0), 0.5)

    def test_series_mode_chen(self):
        res = expansion.mrl_expansion_series(CHEN, 10.0, rel_tol=1e-8, max_order=12)
        assert len(res.partial_sums) == res.terms_used
        assert rel(res.value, core.mrl_quadrature(CHEN, 10.0, rel_tol=1e-12).value) <= 1e-4


class TestLinearExact:
    def test_examples(self):
        assert rel(expansion.linear_exact_mrl(0.0, 1.0, 0.0), math.sqrt(math.pi / 2.0)) <= 1e-15
        m = make_model("linear", alpha=1.0, beta=2.0)
        assert rel(expansion.linear_exact_mrl(1.0, 2.0, 3.0), core.mrl_quadrature(m, 3.0).value) <= 1e-10

    def test_far_tail(self):
        v = expansion.linear_exact_mrl(0.0, 1.0, 50.0)
        assert rel(v, LINEAR_0_1_M50) <= 1e-13
        assert abs(v * 50.0 - 1.0) < 0.01

    def test_bad_beta(self):
        with pytest.raises(DomainError):
            expansion.linear_exact_mrl(1.0, 0.0, 1.0)


class TestHypotheses:
    GRID = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0]

    def test_linear_trivial(self):
        rep = expansion.check_hypotheses(make_model("linear", alpha=1.0, beta=1.0), 5, 2.0 / 3.0, self.GRID)
        assert rep.verdict == "consistent_with_decay"
        assert all(v == 0.0 for row in rep.ratios_eps for v in row)

    def test_chen_within_range(self):
        rep = expansion.check_hypotheses(CHEN, 5, 0.6, self.GRID)
        assert rep.verdict == "consistent_with_decay"
        assert len(rep.ratios_eps[0]) == 3 and len(rep.ratios_growth[0]) == 2

    def test_chen_epsilon_too_large(self):
        assert expansion.check_hypotheses(CHEN, 5, 2.0, self.GRID).verdict == "violated"

    def test_input_errors(self):
        with pytest.raises(DomainError):
            expansion.check_hypotheses(CHEN, 2, 0.5, self.GRID)
        with pytest.raises(DomainError):
            expansion.check_hypotheses(CHEN, 5, 0.5, [3.0, 2.0])
        with pytest.raises(CapabilityError):
            expansion.check_hypotheses(make_model("gamma", mu=2.0, B=1.0), 4, 0.5, self.GRID)
