import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glauberlab.rates import (
    LocalRule,
    check_attractive,
    check_reversible_form,
    elementary_expansion,
    make_chafee_infante,
    make_constant,
    make_dmfl,
    make_dmfl_field,
    parse_rule_spec,
    reaction_profile,
)

random_rules = st.integers(0, 2).flatmap(
    lambda K: st.lists(
        st.floats(0.05, 5.0, allow_nan=False), min_size=1 << (2 * K + 1), max_size=1 << (2 * K + 1)
    ).map(lambda tab: LocalRule(K, tab))
)


class TestConstruction:
    def test_dmfl_gamma_zero_is_constant(self):
        rule = make_dmfl(0.0)
        assert all(rule.rate(w) == 1.0 for w in rule.windows())

    def test_dmfl_window_values(self):
        rule = make_dmfl(0.5)
        assert rule.rate((1, 1, 1)) == pytest.approx(0.25)
        assert rule.rate((1, -1, 1)) == pytest.approx(2.25)

    def test_dmfl_rejects_gamma_one(self):
        with pytest.raises(ValueError):
            make_dmfl(1.0)

    def test_field_mu_zero_matches_plain(self):
        assert np.array_equal(make_dmfl_field(0.3, 0.0).table, make_dmfl(0.3).table)

    def test_field_window_value(self):
        assert make_dmfl_field(0.0, 1.0).rate((1, 1, 1)) == pytest.approx(0.5)

    def test_field_bound_is_strict(self):
        with pytest.raises(ValueError):
            make_dmfl_field(0.0, 2.0)

    def test_chafee_infante_indicators(self):
        rule = make_chafee_infante(9.0, 1.0, 3.0)
        assert rule.rate((1, 1, 1)) == 1.0
        assert rule.rate((1, -1, 1)) == 9.0
        assert rule.rate((1, 1, -1)) == 3.0

    def test_chafee_infante_all_ones_is_constant(self):
        rule = make_chafee_infante(1.0, 1.0, 1.0)
        assert all(rule.rate(w) == 1.0 for w in rule.windows())

    def test_chafee_infante_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            make_chafee_infante(1.0, 0.0, 1.0)

    def test_extrema_recomputed(self):
        rule = make_dmfl(0.5)
        assert rule.lambda_max == pytest.approx(2.25)
        assert rule.c0 == pytest.approx(0.25)

    def test_incomplete_table_rejected(self):
        with pytest.raises(ValueError):
            LocalRule.from_table(1, {(1, 1, 1): 1.0})

    def test_nonpositive_rate_rejected(self):
        with pytest.raises(ValueError):
            LocalRule(0, [1.0, 0.0])

    def test_file_roundtrip(self, tmp_path):
        rule = make_dmfl(0.3)
        path = tmp_path / "rule.txt"
        rule.to_file(path)
        loaded = LocalRule.from_file(path)
        assert loaded.radius == 1
        assert np.array_equal(loaded.table, rule.table)

    def test_parse_specs(self):
        assert parse_rule_spec("dmfl:0.3").rate((1, 1, 1)) == make_dmfl(0.3).rate((1, 1, 1))
        assert parse_rule_spec("const:2").rate((1,)) == 2.0
        assert parse_rule_spec("chafee-infante:9:1:3").rate((1, -1, 1)) == 9.0
        assert parse_rule_spec("dmfl-field:0.1:0.5").rate((1, 1, 1)) == pytest.approx(
            make_dmfl_field(0.1, 0.5).rate((1, 1, 1))
        )
        with pytest.raises(ValueError):
            parse_rule_spec("nope:1")


class TestAttractive:
    def test_dmfl_always_attractive(self):
        for g in (0.0, 0.3, 0.6, 0.9):
            assert check_attractive(make_dmfl(g))

    def test_chafee_infante_ordered_parameters(self):
        assert check_attractive(make_chafee_infante(9.0, 1.0, 3.0))

    def test_chafee_infante_violating_order(self):
        assert not check_attractive(make_chafee_infante(1.0, 3.0, 2.0))

    def test_constant_attractive(self):
        assert check_attractive(make_constant(2.0))


class TestExpansion:
    def test_constant_rule_single_term(self):
        exp = elementary_expansion(make_constant(1.0))
        nz = exp.nonzero()
        assert set(nz) == {frozenset({0})}
        assert nz[frozenset({0})] == pytest.approx(-2.0)

    def test_dmfl_terms(self):
        g = 0.35
        nz = elementary_expansion(make_dmfl(g)).nonzero()
        expected = {
            frozenset({0}): -2.0,
            frozenset({1}): 2 * g,
            frozenset({-1}): 2 * g,
            frozenset({-1, 0, 1}): -2 * g * g,
        }
        assert set(nz) == set(expected)
        for key, val in expected.items():
            assert nz[key] == pytest.approx(val)

    @given(random_rules)
    @settings(max_examples=40, deadline=None)
    def test_reconstruction_exact(self, rule):
        exp = elementary_expansion(rule)
        K = rule.radius
        for w in rule.windows():
            assert exp.evaluate(w) == pytest.approx(-2.0 * w[K] * rule.rate(w), abs=1e-10)


class TestReactionProfile:
    def test_dmfl_formula(self):
        g = 0.3
        prof = reaction_profile(make_dmfl(g))
        coef = np.zeros(4)
        coef[: prof.R.coef.size] = prof.R.coef
        expected = np.array([0.0, -2 * (1 - 2 * g), 0.0, -2 * g * g])
        assert np.allclose(coef, expected, atol=1e-12)

    def test_field_formula(self):
        g, mu = 0.3, 0.4
        prof = reaction_profile(make_dmfl_field(g, mu))
        coef = np.zeros(4)
        coef[: prof.R.coef.size] = prof.R.coef
        expected = np.array([mu, -2 * (1 - 2 * g), 0.0, -2 * g * g])
        assert np.allclose(coef, expected, atol=1e-12)

    def test_chafee_infante_formula(self):
        a0, a1, a2 = 9.0, 1.0, 3.0
        prof = reaction_profile(make_chafee_infante(a0, a1, a2))
        coef = np.zeros(4)
        coef[: prof.R.coef.size] = prof.R.coef
        expected = np.array([0.0, 0.5 * (a0 - 3 * a1 - 2 * a2), 0.0, -0.5 * (a0 + a1 - 2 * a2)])
        assert np.allclose(coef, expected, atol=1e-12)

    def test_symmetric_cubic_case(self):
        # a1=1, a2=3, a0=9 gives the pure cubic -2 rho^3
        prof = reaction_profile(make_chafee_infante(9.0, 1.0, 3.0))
        coef = np.zeros(4)
        coef[: prof.R.coef.size] = prof.R.coef
        assert np.allclose(coef, [0.0, 0.0, 0.0, -2.0], atol=1e-12)

    def test_kappa_values(self):
        assert reaction_profile(make_dmfl(0.0)).kappa == pytest.approx(2.0)
        assert reaction_profile(make_dmfl(0.25)).kappa == pytest.approx(1.0)
        assert reaction_profile(make_dmfl(0.6)).kappa is None

    def test_decomposition_identity(self):
        for rule in (make_dmfl(0.3), make_dmfl_field(0.2, 0.5), make_chafee_infante(9, 1, 3)):
            prof = reaction_profile(rule)
            rho = np.linspace(-1, 1, 17)
            assert np.allclose(prof.R(rho), -prof.alpha * rho - prof.G(rho), atol=1e-12)
            assert np.allclose(prof.V.deriv()(rho), -prof.R(rho), atol=1e-12)
            assert prof.V(0.0) == pytest.approx(0.0)
            if prof.V.degree() >= 2:
                assert np.allclose(prof.V.deriv(2)(rho), prof.alpha + prof.G.deriv()(rho), atol=1e-12)

    @given(random_rules)
    @settings(max_examples=30, deadline=None)
    def test_endpoint_expectations_match_direct(self, rule):
        # under the degenerate product measures the expectation is a single window
        prof = reaction_profile(rule)
        K = rule.radius
        plus = tuple([1] * (2 * K + 1))
        minus = tuple([-1] * (2 * K + 1))
        assert prof.R(1.0) == pytest.approx(-2.0 * rule.rate(plus), rel=1e-9)
        assert prof.R(-1.0) == pytest.approx(2.0 * rule.rate(minus), rel=1e-9)

    def test_reflection_symmetry_invariance(self):
        for rule in (make_dmfl(0.3), make_chafee_infante(9, 1, 3)):
            mirrored = LocalRule.from_function(
                rule.radius, lambda w: rule.rate(tuple(reversed(w)))
            )
            a = reaction_profile(rule)
            b = reaction_profile(mirrored)
            assert np.allclose(a.R.coef, b.R.coef, atol=1e-12)
            assert (a.kappa is None) == (b.kappa is None)
            if a.kappa is not None:
                assert a.kappa == pytest.approx(b.kappa)


class TestReversibleForm:
    def test_constant_rule(self):
        cert = check_reversible_form(make_constant(1.0))
        assert cert is not None
        assert cert.a2 == pytest.approx(0.0)
        assert cert.bernoulli_p == pytest.approx(0.5)

    def test_center_affine_rule(self):
        rule = LocalRule.from_function(1, lambda w: 1.0 + 0.5 * w[1])
        cert = check_reversible_form(rule)
        assert cert is not None
        assert cert.a1 == pytest.approx(1.0)
        assert cert.a2 == pytest.approx(0.5)

    def test_factorized_rule_with_neighbors(self):
        def fn(w):
            h = 2.0 if w[0] == w[2] else 0.7
            return (1.0 + 0.3 * w[1]) * h

        cert = check_reversible_form(LocalRule.from_function(1, fn))
        assert cert is not None
        # Bernoulli parameter from single-site detailed balance
        assert cert.bernoulli_p == pytest.approx(0.7 / 2.0)

    def test_dmfl_not_of_the_form(self):
        assert check_reversible_form(make_dmfl(0.3)) is None
