"""policyrank: multi-criteria policy ranking and deliberation engine."""

from .aggregate import (AggregationResult, RankComparison, aggregate_table,
                        averaged_rank_median, borda, compare_rankings,
                        median_of_ranks)
from .errors import (DegenerateColumnError, FormatError, PartialRunError,
                     PolicyRankError, ProviderError, TableValidationError,
                     UnknownCriterionError)
from .model import (AcsTable, Alternative, Criterion, RankVector,
                    ValidationReport, Violation, WeightVector, rank_with_ties,
                    subset_columns, validate_table)
from .rules import (RULE_ORDER, EvaluationTable, RuleParams, RuleResult,
                    hurwicz, lengths_rule, maximax, maximin, median_rule,
                    minimax_regret, promethee2, run_all_rules, run_rule, saw,
                    topsis)

__version__ = "0.1.0"

__all__ = [
    "AcsTable",
    "AggregationResult",
    "Alternative",
    "Criterion",
    "DegenerateColumnError",
    "EvaluationTable",
    "FormatError",
    "PartialRunError",
    "PolicyRankError",
    "ProviderError",
    "RankComparison",
    "RankVector",
    "RuleParams",
    "RuleResult",
    "RULE_ORDER",
    "TableValidationError",
    "UnknownCriterionError",
    "ValidationReport",
    "Violation",
    "WeightVector",
    "aggregate_table",
    "averaged_rank_median",
    "borda",
    "compare_rankings",
    "hurwicz",
    "lengths_rule",
    "maximax",
    "maximin",
    "median_of_ranks",
    "median_rule",
    "minimax_regret",
    "promethee2",
    "rank_with_ties",
    "run_all_rules",
    "run_rule",
    "saw",
    "subset_columns",
    "topsis",
    "validate_table",
]
