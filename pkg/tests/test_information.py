import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hom_fingerprint.codes import gv_rate, map_coherent_to_twophoton_distance
from hom_fingerprint.errors import DomainError, NoCrossoverError
from hom_fingerprint.information import (AVERAGE, CLASSICAL_BOUND_IS_TIGHT,
                                         classical_bound, coherent_information,
                                         crossover_length, information_at, log2_binomial,
                                         operating_point, two_photon_information)
from hom_fingerprint.interference import (misid_probability_coherent,
                                          misid_probability_twophoton)


class TestClassicalBound:
    def test_examples(self):
        assert classical_bound(10**6, 1e-6) == pytest.approx(846.62316, abs=1e-5)
        assert classical_bound(2 * math.log(2), 1e-18) == pytest.approx(0.0, abs=1e-8)
        assert not CLASSICAL_BOUND_IS_TIGHT

    def test_domain(self):
        with pytest.raises(DomainError):
            classical_bound(100, 0.25)
        with pytest.raises(DomainError):
            classical_bound(0, 0.1)

    @given(st.integers(1, 10**12), st.floats(1e-12, 0.2))
    def test_monotone(self, n, p):
        assert classical_bound(n + 1, p) > classical_bound(n, p)
        assert classical_bound(n, p * 1.1) < classical_bound(n, p)


class TestTwoPhotonInformation:
    def test_examples(self):
        assert two_photon_information(1, 2) == pytest.approx(math.log2(3), rel=1e-14)
        # Reduced closed form; see the decisions ledger for the (1, 1) case.
        assert two_photon_information(1, 1) == pytest.approx(1.0, rel=1e-14)

    def test_against_big_integers(self):
        for n2, m in ((100, 10**4), (7, 3), (250, 40)):
            exact = math.log2(math.comb(n2 + m * n2, n2))
            assert two_photon_information(n2, m) == pytest.approx(exact, rel=1e-9)

    def test_reduction_identity(self):
        # (n2+1)/(m n2) C(n2 + m n2, n2 + 1) = C(n2 + m n2, n2).
        for n2, m in ((3, 5), (10, 2), (1, 7)):
            lhs = math.comb(n2 + m * n2, n2 + 1) * (n2 + 1)
            assert lhs == math.comb(n2 + m * n2, n2) * m * n2

    @given(st.integers(1, 10**6), st.integers(1, 10**6))
    def test_monotone(self, n2, m):
        base = two_photon_information(n2, m)
        assert two_photon_information(n2 + 1, m) > base
        assert two_photon_information(n2, m + 1) > base

    def test_log_gamma_binomial_small(self):
        for n in range(0, 60):
            for k in range(0, n + 1):
                exact = math.log2(math.comb(n, k))
                assert log2_binomial(n, k) == pytest.approx(exact, rel=1e-9, abs=1e-12)


class TestCoherentInformation:
    def test_examples(self):
        assert coherent_information(1.0, 1) == pytest.approx(2.0, rel=1e-15)
        assert coherent_information(0.0, 5) == 0.0
        for m in (1, 7, 1000, 3_596_192):
            assert coherent_information(float(m), m) == pytest.approx(2 * m, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            coherent_information(-1.0, 4)

    @given(st.floats(1e-6, 1e4), st.integers(1, 10**6))
    def test_positive(self, nbar, m):
        assert coherent_information(nbar, m) > 0.0

    def test_concave_in_nbar(self):
        x = np.linspace(0.1, 50, 300)
        y = np.array([coherent_information(v, 10) for v in x])
        assert np.all(np.diff(y, 2) < 0)


class TestOperatingPoint:
    def test_figure_parameters(self):
        op = operating_point(10**6, 1e-6, 0.2)
        assert op.nbar == pytest.approx(math.log(1e6) / 0.4, rel=1e-14)
        assert op.Delta_min == pytest.approx(0.2081781, abs=1e-7)
        base = (1 + (1 - 2 * op.Delta_min) ** 2) / 2
        assert base == pytest.approx(0.67032, abs=1e-5)
        assert op.n2 == math.ceil(math.log(1e6) / -math.log(base))
        assert op.m == int(math.floor(10**6 / gv_rate(0.2) + 0.5)) == 3_596_192

    def test_targets_met(self):
        for n, p, d in ((10**6, 1e-6, 0.2), (10**3, 1e-2, 0.1), (10**9, 1e-9, 0.25)):
            op = operating_point(n, p, d)
            assert misid_probability_coherent(op.nbar, d) <= p * (1 + 1e-12)
            assert misid_probability_twophoton(op.n2, op.Delta_min) <= p

    def test_budgets_vanish_near_certain_error(self):
        op = operating_point(1000, 1 - 1e-12, 0.2)
        assert op.nbar < 1e-10
        assert op.n2 <= 1

    def test_average_convention_doubles_target(self):
        cond = operating_point(10**6, 1e-6, 0.2)
        avg = operating_point(10**6, 1e-6, 0.2, convention=AVERAGE)
        assert avg.nbar == pytest.approx(-math.log(2e-6) / 0.4)
        assert avg.nbar < cond.nbar
        with pytest.raises(DomainError):
            operating_point(10**6, 1e-6, 0.2, convention="other")


class TestCrossover:
    def test_figure_crossover(self):
        c = crossover_length(1e-6, 0.2)
        assert 10**5.5 <= c.n_twophoton <= 10**6.5
        assert c.n_coherent < c.n_twophoton
        row = information_at(c.n_twophoton, 1e-6, 0.2)
        assert row.i_s < row.i_class

    def test_ratio_at_large_n(self):
        assert 0.8 <= information_at(10**10, 1e-6, 0.2).ratio <= 1.25

    def test_logarithmic_growth(self):
        vals = [information_at(10**k, 1e-6, 0.2) for k in (7, 8, 9, 10)]
        for metric in ("i_s", "i_coh"):
            inc = np.diff([getattr(v, metric) for v in vals])
            # Equal increments per decade up to slowly varying corrections.
            assert np.all(inc > 0)
            assert inc.max() / inc.min() < 1.2

    def test_no_crossover(self):
        # An exacting target with a tiny distance never lets the classical bound win.
        with pytest.raises(NoCrossoverError, match="no crossover found"):
            crossover_length(1e-12, 1e-4)


def test_distance_map_used_consistently():
    op = operating_point(1000, 1e-3, 0.15)
    assert op.Delta_min == map_coherent_to_twophoton_distance(0.15)
