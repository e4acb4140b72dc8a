"""Cause-effect direction between two categorical variables.

The direction in which the conditional pmf looks like a uniform channel (all
rows rearrangements of one pmf) is preferred; closeness is judged with
likelihood-ratio tests in both directions.
"""
from .core import (
    CategoricalDistribution,
    ChannelMatrix,
    ContingencyTable,
    Kind,
    Permutation,
    UcmEstimate,
    conditional_entropy,
    is_uniform_channel,
    reverse_channel,
    uc_channel,
)
from .estimation import (
    EstimationConfig,
    cuc_run_traces,
    estimate_arbitrary,
    estimate_cuc,
    estimate_marginal,
    estimate_uc,
    estimate_uc_known,
    oracle_uc,
)
from .inference import Decision, DecisionConfig, Verdict, decide
from .synthetic import UcmSpec, random_ucm, sample
from .testing import TestResult, chi2_sf, independence_test, lrt_ucm

__version__ = "0.1.0"
