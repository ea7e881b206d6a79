"""Property suites over random tables.

These stand in for desk-checking the rule columns that cannot be
regenerated from published numbers alone: every rule must at least be
dominance-consistent, normalization must cancel positive column scaling,
and the structural identities (Hurwicz endpoints, net-flow zero sum,
regret/maximin coincidence) must hold everywhere, not just on fixtures.
"""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from policyrank import (RULE_ORDER, RuleParams, WeightVector, hurwicz,
                        maximax, maximin, minimax_regret, promethee2,
                        run_rule, saw, topsis)

from conftest import make_table

SCALE_MAX = 10.0


def random_table(rng, m=5, n=4, low=0.5, high=9.5):
    return make_table(rng.uniform(low, high, size=(m, n)), scale_max=SCALE_MAX)


def dominating_pair_table(rng, m=5, n=4):
    """Random table where row 0 dominates row 1 componentwise."""
    scores = rng.uniform(0.5, 8.0, size=(m, n))
    bump = rng.uniform(0.0, 1.5, size=n)
    bump[rng.integers(0, n)] += 0.1  # at least one strict improvement
    scores[0] = np.minimum(scores[1] + bump, SCALE_MAX - 0.01)
    return make_table(scores, scale_max=SCALE_MAX)


class TestDominanceConsistency:
    def test_all_nine_rules_on_1000_tables(self):
        rng = np.random.default_rng(20240521)
        params = RuleParams()
        for _ in range(1000):
            table = dominating_pair_table(rng)
            weights = WeightVector(tuple(rng.uniform(0.1, 1.0, size=table.n)))
            for rule_id in RULE_ORDER:
                result = run_rule(rule_id, table, weights, params)
                assert result.ranks.ranks[0] >= result.ranks.ranks[1], (
                    f"{rule_id} ranked a dominated row above its dominator")

    def test_raw_value_monotonicity_where_declared_higher(self):
        rng = np.random.default_rng(99)
        params = RuleParams()
        for _ in range(200):
            table = dominating_pair_table(rng)
            weights = WeightVector(tuple(rng.uniform(0.1, 1.0, size=table.n)))
            for rule_id in RULE_ORDER:
                result = run_rule(rule_id, table, weights, params)
                if result.params["orientation"] == "higher":
                    assert result.raw_values[0] >= result.raw_values[1] - 1e-12
                else:
                    assert result.raw_values[0] <= result.raw_values[1] + 1e-12


class TestColumnScalingInvariance:
    def test_topsis_and_saw_ignore_positive_column_scaling(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            m, n = 6, 4
            scores = rng.uniform(0.5, 9.0, size=(m, n))
            factor = rng.uniform(0.2, 3.0)
            j = rng.integers(0, n)
            scaled = scores.copy()
            scaled[:, j] *= factor
            base = make_table(scores, scale_max=50.0)
            rescaled = make_table(scaled, scale_max=50.0)
            w = WeightVector(tuple(rng.uniform(0.1, 1.0, size=n)))
            assert np.allclose(topsis(base, w).raw_values, topsis(rescaled, w).raw_values)
            assert np.allclose(saw(base, w).raw_values, saw(rescaled, w).raw_values)
            assert np.allclose(saw(base, w, "minmax").raw_values,
                               saw(rescaled, w, "minmax").raw_values)


class TestHurwiczEndpoints:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_endpoint_reductions(self, seed):
        rng = np.random.default_rng(seed)
        table = random_table(rng)
        assert hurwicz(table, 0.0).ranks == maximin(table).ranks
        assert hurwicz(table, 1.0).ranks == maximax(table).ranks


class TestPrometheeFlows:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_net_flows_sum_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        table = random_table(rng, m=int(rng.integers(2, 9)), n=int(rng.integers(1, 6)))
        weights = WeightVector(tuple(rng.uniform(0.1, 1.0, size=table.n)))
        flows = promethee2(table, weights).raw_values
        assert abs(sum(flows)) < 1e-9


class TestRegretMaximinCoincidence:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_equal_column_maxima_forces_identity(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(2, 9)), int(rng.integers(1, 6))
        scores = rng.uniform(0.0, 8.0, size=(m, n))
        # pin one cell per column to a shared maximum
        for j in range(n):
            scores[rng.integers(0, m), j] = 9.0
        table = make_table(scores, scale_max=SCALE_MAX)
        assert minimax_regret(table).ranks == maximin(table).ranks


class TestWeightPermutationNeutrality:
    def test_permuting_columns_and_weights_together(self):
        rng = np.random.default_rng(11)
        params = RuleParams()
        for _ in range(50):
            m, n = 5, 4
            scores = rng.uniform(0.5, 9.0, size=(m, n))
            weights = rng.uniform(0.1, 1.0, size=n)
            perm = rng.permutation(n)
            base = make_table(scores, scale_max=SCALE_MAX)
            permuted = make_table(scores[:, perm], scale_max=SCALE_MAX)
            w_base = WeightVector(tuple(weights))
            w_perm = WeightVector(tuple(weights[perm]))
            for rule_id in RULE_ORDER:
                r1 = run_rule(rule_id, base, w_base, params)
                r2 = run_rule(rule_id, permuted, w_perm, params)
                assert r1.ranks == r2.ranks, rule_id


class TestDeterminism:
    def test_rules_are_pure_functions(self, ia_table):
        params = RuleParams()
        w = WeightVector.equal(ia_table.n)
        for rule_id in RULE_ORDER:
            first = run_rule(rule_id, ia_table, w, params)
            second = run_rule(rule_id, ia_table, w, params)
            assert first == second
