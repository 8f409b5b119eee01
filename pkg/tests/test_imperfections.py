import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hom_fingerprint.errors import DomainError
from hom_fingerprint.imperfections import (HypothesisPair, ModelValidityWarning,
                                           SourceParams, coincidence_fraction,
                                           effective_visibility, emission_bracket,
                                           hypothesis_pair, two_click_probability)
from hom_fingerprint.interference import coincidence_probability

FIG5 = dict(dark_ratio=0.01, w=0.98)

params = st.builds(SourceParams, st.floats(0.0, 0.3), st.floats(0.0, 0.3),
                   st.floats(0.0, 0.1), st.floats(0.0, 1.0))


@pytest.fixture(autouse=True)
def quiet_validity():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModelValidityWarning)
        yield


class TestSourceParams:
    def test_domain(self):
        for bad in (dict(eta_nbar=-0.1), dict(eta_nbar=0.1, g2=-1),
                    dict(eta_nbar=0.1, dark_ratio=-0.1), dict(eta_nbar=0.1, w=1.2),
                    dict(eta_nbar=1.0, g2=1.0)):
            with pytest.raises(DomainError):
                SourceParams(**bad)

    def test_validity_warning(self):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            SourceParams(0.2, g2=1.0)
            SourceParams(0.05, dark_ratio=0.2)
            SourceParams(0.05, g2=1.0, dark_ratio=0.05)
        assert [type(r.message) for r in rec] == [ModelValidityWarning] * 2
        assert SourceParams(0.2, g2=1.0).validity_issues

    def test_emission_probabilities(self):
        p = SourceParams(0.1, g2=1.0, dark_ratio=0.02)
        assert p.p_one == 0.1
        assert p.p_two == pytest.approx(0.005)
        assert p.p_dark == pytest.approx(0.002)

    def test_json_round_trip(self):
        p = SourceParams(0.05, 1.0, 0.01, 0.98)
        assert SourceParams.from_json(p.to_json()) == p
        assert set(p.to_dict()) == {"eta_nbar", "g2", "dark_ratio", "w"}


class TestRates:
    def test_two_click(self):
        assert two_click_probability(SourceParams(0.1, 1.0, 0.01)) == pytest.approx(0.020402)
        assert two_click_probability(SourceParams(0.1)) == pytest.approx(0.01)
        assert two_click_probability(SourceParams(0.0)) == 0.0

    def test_effective_visibility(self):
        assert effective_visibility(SourceParams(0.01, g2=1.0), 1.0) == 0.5
        assert effective_visibility(SourceParams(0.01), 0.3) == pytest.approx(0.09)
        assert effective_visibility(SourceParams(0.05, **FIG5), 0.8) == pytest.approx(
            0.6272 / 1.0402, rel=1e-14)
        assert effective_visibility(SourceParams(0.05, **FIG5), 0.8) == pytest.approx(
            0.602961, abs=1e-6)
        with pytest.raises(DomainError):
            effective_visibility(SourceParams(0.01), 1.5)

    def test_coincidence_fraction(self):
        assert coincidence_fraction(SourceParams(0.01), 1.0) == 0.0
        assert coincidence_fraction(SourceParams(0.01, g2=1.0), 1.0) == 0.25
        assert coincidence_fraction(SourceParams(0.05, **FIG5), 0.8) == pytest.approx(
            0.198520, abs=1e-6)

    @given(st.floats(-1, 1))
    def test_ideal_limit(self, v):
        assert coincidence_fraction(SourceParams(0.01), v) == pytest.approx(
            coincidence_probability(v), abs=1e-15)

    @given(params, st.floats(-1, 1), st.floats(0, 0.1))
    def test_monotonicity(self, p, v, step):
        q = coincidence_fraction(p, v)
        assert 0.0 <= q <= 0.5
        more_g2 = SourceParams(p.eta_nbar, p.g2 + step, p.dark_ratio, p.w)
        more_dark = SourceParams(p.eta_nbar, p.g2, p.dark_ratio + step, p.w)
        less_w = SourceParams(p.eta_nbar, p.g2, p.dark_ratio, max(0.0, p.w - step))
        assert coincidence_fraction(more_g2, v) >= q - 1e-15
        assert coincidence_fraction(more_dark, v) >= q - 1e-15
        assert coincidence_fraction(less_w, v) >= q - 1e-15
        smaller_v = v * (1 - step)
        assert coincidence_fraction(p, smaller_v) >= q - 1e-15


class TestHypothesisPair:
    def test_ideal(self):
        hp = hypothesis_pair(SourceParams(0.01), 0.1)
        assert hp.q_d == pytest.approx(0.18)
        assert hp.q_e == 0.0

    def test_indistinguishable_at_zero_distance(self):
        hp = hypothesis_pair(SourceParams(0.05, **FIG5), 0.0)
        assert hp.q_d == hp.q_e

    def test_fig5_parameters(self):
        hp = hypothesis_pair(SourceParams(0.05, **FIG5), 0.1)
        assert hp.q_d == pytest.approx(0.198520, abs=1e-6)
        # Closed form (1 - 0.98/1.0402)/2; see the decisions ledger.
        assert hp.q_e == pytest.approx((1 - 0.98 / 1.0402) / 2, rel=1e-14)
        assert hp.q_e == pytest.approx(0.0289367, abs=1e-7)

    @given(params, st.floats(0.0, 0.5))
    def test_ordering(self, p, D):
        hp = hypothesis_pair(p, D)
        assert 0.0 <= hp.q_e <= hp.q_d <= 0.5
        assert 0.0 <= hp.p2 <= 1.0
        assert hp.p2 == pytest.approx(p.eta_nbar ** 2 * emission_bracket(p))

    def test_validation(self):
        with pytest.raises(DomainError):
            HypothesisPair(0.2, -0.1)
        with pytest.raises(DomainError):
            hypothesis_pair(SourceParams(0.01), 0.6)
