import math

import numpy as np
import pytest

from policyrank import (DegenerateColumnError, PolicyRankError, RuleParams,
                        WeightVector, hurwicz, lengths_rule, maximax, maximin,
                        median_rule, minimax_regret, promethee2, run_all_rules,
                        saw, subset_columns, topsis)

from conftest import make_table

# Ranking of the 11 policies scored in both exercises, TOPSIS on the
# informed-assessment table, as published.
COMMON_POLICY_TOPSIS_ORDER = [5, 7, 2, 6, 3, 14, 9, 17, 4, 20, 13]


def ranks_of(result, table):
    return {aid: r for aid, r in zip(table.alternative_ids, result.ranks.ranks)}


class TestMaximin:
    def test_row_0_raw_value(self, ia_table):
        result = maximin(ia_table)
        assert result.raw_values[ia_table.alternative_index(0)] == 0.0

    def test_row_5_raw_value(self, ia_table):
        result = maximin(ia_table)
        assert result.raw_values[ia_table.alternative_index(5)] == 3.0

    def test_constant_row(self):
        result = maximin(make_table([[3.0, 3.0, 3.0]]))
        assert result.raw_values == (3.0,)


class TestMaximax:
    def test_published_ranks(self, ia_table):
        result = maximax(ia_table)
        ranks = ranks_of(result, ia_table)
        assert ranks[20] == 1.0
        assert ranks[0] == 2.0

    def test_single_alternative(self):
        result = maximax(make_table([[1.0, 2.0]]))
        assert result.ranks.ranks == (1.0,)


class TestMinimaxRegret:
    def test_matches_maximin_on_ia_table(self, ia_table):
        # every column of the fixture tops out at 5.0, which forces the identity
        assert minimax_regret(ia_table).ranks == maximin(ia_table).ranks

    def test_hand_oracle_2x2(self):
        table = make_table([[1.0, 4.0], [3.0, 3.0]])
        result = minimax_regret(table)
        # column maxima (3, 4); regrets row0 = (2, 0), row1 = (0, 1)
        assert result.raw_values == (2.0, 1.0)
        assert result.ranks.ranks == (1.0, 2.0)

    def test_single_row_no_regret(self):
        result = minimax_regret(make_table([[2.0, 5.0, 1.0]]))
        assert result.raw_values == (0.0,)
        assert result.ranks.ranks == (1.0,)


class TestMedianRule:
    def test_published_tie_for_last(self, ia_table):
        ranks = ranks_of(median_rule(ia_table), ia_table)
        assert ranks[0] == 1.5
        assert ranks[11] == 1.5

    def test_row_5_median(self, ia_table):
        result = median_rule(ia_table)
        assert result.raw_values[ia_table.alternative_index(5)] == 4.5

    def test_constant_row(self):
        assert median_rule(make_table([[2.0, 2.0, 2.0]])).raw_values == (2.0,)

    def test_even_count_uses_middle_mean(self):
        assert median_rule(make_table([[1.0, 2.0, 3.0, 10.0]])).raw_values == (2.5,)


class TestLengthsRule:
    def test_zero_row(self):
        table = make_table([[0.0, 0.0], [1.0, 1.0]], scale_min=0.0, scale_max=5.0)
        assert lengths_rule(table).raw_values[0] == 0.0

    def test_full_scale_row(self):
        table = make_table([[5.0, 5.0, 5.0], [1.0, 1.0, 1.0]], scale_max=5.0)
        assert lengths_rule(table).raw_values[0] == pytest.approx(math.sqrt(3))

    def test_ia_row_0_hand_oracle(self, ia_table):
        # independent oracle: plain-python sum of squared scaled entries
        row = [2.5, 1.5, 3.5, 1.0, 0.0, 0.0, 1.0, 1.0, 2.0]
        expected = math.sqrt(sum((v / 5.0) ** 2 for v in row))
        result = lengths_rule(ia_table)
        assert result.raw_values[ia_table.alternative_index(0)] == pytest.approx(expected)


class TestSaw:
    def test_divide_by_max_oracle(self):
        table = make_table([[1.0, 2.0], [2.0, 4.0]])
        result = saw(table, WeightVector.equal(2))
        assert result.raw_values == pytest.approx((0.5, 1.0))

    def test_one_column_preserves_order(self):
        table = make_table([[2.0], [5.0], [3.0]])
        result = saw(table, WeightVector.equal(1))
        assert result.ranks.ranks == (1.0, 3.0, 2.0)

    def test_column_scaling_cancels(self):
        base = make_table([[1.0, 2.0], [2.0, 4.0], [3.0, 1.0]])
        scaled = make_table([[1.0, 6.0], [2.0, 12.0], [3.0, 3.0]], scale_max=30.0)
        w = WeightVector.equal(2)
        assert saw(base, w).raw_values == pytest.approx(saw(scaled, w).raw_values)

    def test_zero_benefit_column_is_degenerate(self):
        table = make_table([[0.0, 1.0], [0.0, 2.0]])
        with pytest.raises(DegenerateColumnError, match="c1"):
            saw(table, WeightVector.equal(2))

    def test_cost_direction_prefers_small(self):
        table = make_table([[1.0], [2.0]], directions=["cost"], scale_min=0.5)
        result = saw(table, WeightVector.equal(1))
        assert result.ranks.ranks == (2.0, 1.0)


class TestHurwicz:
    def test_alpha_one_is_maximax(self, ia_table):
        assert hurwicz(ia_table, alpha=1.0).ranks == maximax(ia_table).ranks

    def test_alpha_zero_is_maximin(self, ia_table):
        assert hurwicz(ia_table, alpha=0.0).ranks == maximin(ia_table).ranks

    def test_row_0_midpoint(self, ia_table):
        result = hurwicz(ia_table, alpha=0.5)
        assert result.raw_values[ia_table.alternative_index(0)] == pytest.approx(1.75)

    def test_alpha_out_of_range(self, ia_table):
        with pytest.raises(ValueError):
            hurwicz(ia_table, alpha=1.5)


class TestPromethee:
    def test_dominated_pair_flows(self):
        table = make_table([[1.0, 1.0], [2.0, 2.0]])
        result = promethee2(table, WeightVector.equal(2))
        assert result.raw_values == pytest.approx((-1.0, 1.0))

    def test_symmetric_wins_cancel(self):
        table = make_table([[1.0, 2.0], [2.0, 1.0]])
        result = promethee2(table, WeightVector.equal(2))
        assert result.raw_values == pytest.approx((0.0, 0.0))

    def test_duplicated_alternative_ties(self):
        table = make_table([[1.0, 3.0], [1.0, 3.0], [2.0, 0.0]])
        result = promethee2(table, WeightVector.equal(2))
        assert result.raw_values[0] == pytest.approx(result.raw_values[1])
        assert result.ranks.ranks[0] == result.ranks.ranks[1]

    def test_single_alternative_rejected(self):
        with pytest.raises(PolicyRankError):
            promethee2(make_table([[1.0, 2.0]]), WeightVector.equal(2))


class TestTopsis:
    def test_two_point_oracle(self):
        table = make_table([[1.0], [2.0]])
        result = topsis(table, WeightVector.equal(1))
        assert result.raw_values == pytest.approx((0.0, 1.0))

    def test_published_ordering_on_common_policies(self, ia_table):
        result = topsis(ia_table, WeightVector.equal(9))
        order = result.ranks.descending_order(list(ia_table.alternative_ids))
        restricted = [a for a in order if a in set(COMMON_POLICY_TOPSIS_ORDER)]
        assert restricted == COMMON_POLICY_TOPSIS_ORDER
        assert restricted[:4] == [5, 7, 2, 6]

    def test_identical_rows_tie(self):
        table = make_table([[2.0, 3.0], [2.0, 3.0], [1.0, 1.0]])
        result = topsis(table, WeightVector.equal(2))
        assert result.raw_values[0] == pytest.approx(result.raw_values[1])

    def test_all_zero_column_is_degenerate(self):
        table = make_table([[0.0, 1.0], [0.0, 2.0]])
        with pytest.raises(DegenerateColumnError, match="c1"):
            topsis(table, WeightVector.equal(2))

    def test_all_identical_rows_pin_half(self):
        table = make_table([[2.0, 2.0], [2.0, 2.0]])
        result = topsis(table, WeightVector.equal(2))
        assert result.raw_values == pytest.approx((0.5, 0.5))

    def test_cost_direction_flips_ideal(self):
        table = make_table([[1.0], [2.0]], directions=["cost"])
        result = topsis(table, WeightVector.equal(1))
        assert result.raw_values == pytest.approx((1.0, 0.0))


class TestRunAllRules:
    def test_published_columns_match(self, ia_table, ia_etable):
        etable = run_all_rules(ia_table)
        for rule in ("maximin", "maximax", "minimax_regret", "median", "topsis"):
            assert np.array_equal(etable.column(rule), ia_etable.column(rule)), rule

    def test_minimax_regret_equals_maximin_column(self, ia_table):
        etable = run_all_rules(ia_table)
        assert np.array_equal(etable.column("maximin"), etable.column("minimax_regret"))

    def test_single_alternative_all_ranks_one(self):
        etable = run_all_rules(make_table([[2.0, 3.0]], scale_min=1.0))
        assert np.array_equal(etable.columns, np.ones((1, 9)))

    def test_rule_errors_are_annotated(self):
        table = make_table([[0.0, 1.0], [0.0, 2.0]])
        with pytest.raises(DegenerateColumnError, match=r"\[saw\]"):
            run_all_rules(table)

    def test_rule_subset_in_canonical_order(self, ia_table):
        etable = run_all_rules(ia_table, rules=["topsis", "maximin"])
        assert etable.rules == ("maximin", "topsis")

    def test_params_recorded(self, ia_table):
        etable = run_all_rules(ia_table, params=RuleParams(hurwicz_alpha=0.25))
        assert etable.params["hurwicz_alpha"] == 0.25
        assert etable.params["topsis_normalization"] == "vector"

    def test_weight_length_checked(self, ia_table):
        with pytest.raises(ValueError, match="weight vector length"):
            run_all_rules(ia_table, weights=WeightVector.equal(3))

    def test_subset_then_rank(self, ia_table):
        sub = subset_columns(ia_table, ["Q1"])
        etable = run_all_rules(sub, rules=["topsis"])
        from policyrank import rank_with_ties
        expected = rank_with_ties(ia_table.column("Q1")).ranks
        assert np.array_equal(etable.column("topsis"), np.asarray(expected))
