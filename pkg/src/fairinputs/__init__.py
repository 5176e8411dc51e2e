"""Exact auditing of fair accuracy, fair privacy and need-to-know over categorical datasets."""

from .classifier import (
    OptimalClassifier,
    RandomizedLinearClassifier,
    StochasticPrediction,
    optimal_predict,
    prediction_accuracy,
)
from .dataset import Dataset, DatasetError, IngestConfig, MaskedVector, load_csv, project, remove_constant_features
from .power import (
    LabelDistribution,
    PowerCache,
    PowerTable,
    conditional_distribution,
    group_by_projection,
    power_table,
    predictive_power,
)
from .properties import (
    CostVector,
    FeatureAssignment,
    PropertyVerdict,
    check_condition7,
    check_fair_accuracy,
    check_fair_privacy,
    check_need_to_know,
    clause1_unequal_power,
    clause2_ntk_violation,
)
from .verifier import VerificationReport, VerifierOptions, brute_force_verify, verify_tradeoff

__version__ = "0.1.0"
