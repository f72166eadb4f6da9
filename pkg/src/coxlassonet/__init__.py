"""Feature selection for right-censored survival data.

A residual feed-forward network scores each sample's hazard; an l1 penalty
on the linear skip layer, tied to the first hidden layer by a hierarchical
proximal operator, is swept along a geometric path so features drop out one
by one. The departure order is the importance ranking. Linear Cox baselines,
simulation designs with known truth, and a benchmarking harness round out
the package.
"""

__version__ = "0.1.0"

from .baselines import (
    CoxFit,
    LassoCoxPath,
    fit_cox_classical,
    fit_cox_lasso_path,
    rank_by_pvalue,
)
from .estimators import CoxPHModel, LassoCoxSelector, LassoNetCoxSelector
from .exceptions import CoxLassoNetError
from .metrics import (
    BenchmarkTable,
    ReplicationRecord,
    make_default_methods,
    min_size,
    prob_k_all,
    prob_k_i,
    run_benchmark,
)
from .network import Architecture, NetworkParams, forward, forward_batch, init_params
from .path import (
    PathConfig,
    PathPoint,
    PathResult,
    rank_features,
    select_m_by_validation,
    select_top_k,
    train_dense,
    train_path,
)
from .prox import ProxInput, ProxOutput, hier_prox_batch, hier_prox_oracle, hier_prox_single
from .simulate import (
    GeneratedData,
    SimScenario,
    apply_censoring,
    gen_covariates,
    gen_event_times,
    generate,
    psi_model1,
    psi_model2,
    psi_model2_squared,
)
from .survival import (
    Standardization,
    SurvivalDataset,
    SurvivalSample,
    build_dataset,
    dataset_from_arrays,
    neg_log_partial_likelihood,
    nlpl_gradient,
    standardize,
)

__all__ = [
    "Architecture",
    "BenchmarkTable",
    "CoxFit",
    "CoxLassoNetError",
    "CoxPHModel",
    "GeneratedData",
    "LassoCoxPath",
    "LassoCoxSelector",
    "LassoNetCoxSelector",
    "NetworkParams",
    "PathConfig",
    "PathPoint",
    "PathResult",
    "ProxInput",
    "ProxOutput",
    "ReplicationRecord",
    "SimScenario",
    "Standardization",
    "SurvivalDataset",
    "SurvivalSample",
    "apply_censoring",
    "build_dataset",
    "dataset_from_arrays",
    "fit_cox_classical",
    "fit_cox_lasso_path",
    "forward",
    "forward_batch",
    "gen_covariates",
    "gen_event_times",
    "generate",
    "hier_prox_batch",
    "hier_prox_oracle",
    "hier_prox_single",
    "init_params",
    "make_default_methods",
    "min_size",
    "neg_log_partial_likelihood",
    "nlpl_gradient",
    "prob_k_all",
    "prob_k_i",
    "psi_model1",
    "psi_model2",
    "psi_model2_squared",
    "rank_by_pvalue",
    "rank_features",
    "run_benchmark",
    "select_m_by_validation",
    "select_top_k",
    "standardize",
    "train_dense",
    "train_path",
]
