"""Scikit-learn style wrappers around the functional core.

The selectors implement ``fit(X, y)`` / ``transform`` / ``get_support`` so
they drop into sklearn pipelines; ``y`` carries the survival target as a
``(time, status)`` pair, an ``(n, 2)`` array, or a structured array with
``time``/``status`` fields.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin

from .baselines import fit_cox_classical, fit_cox_lasso_path, rank_by_pvalue
from .network import Architecture
from .path import PathConfig, train_path
from .survival import dataset_from_arrays, standardize
from .validation import check_covariate_matrix, unpack_survival_target


def _build_dataset(X, y):
    X = check_covariate_matrix(X)
    time, status = unpack_survival_target(y)
    return dataset_from_arrays(time, status, X)


class _BasePathSelector(SelectorMixin, BaseEstimator):
    """Shared fit plumbing: standardize, run a path, keep the ranking."""

    def __init__(self, top_k=3, epochs_per_lambda=10, learning_rate=1e-3,
                 path_multiplier=0.02, lambda_init="auto", dense_epochs=100,
                 standardize=True, random_state=0):
        self.top_k = top_k
        self.epochs_per_lambda = epochs_per_lambda
        self.learning_rate = learning_rate
        self.path_multiplier = path_multiplier
        self.lambda_init = lambda_init
        self.dense_epochs = dense_epochs
        self.standardize = standardize
        self.random_state = random_state

    def _path_config(self, p: int) -> PathConfig:
        raise NotImplementedError

    def _run_path(self, dataset, config):
        raise NotImplementedError

    def fit(self, X, y):
        dataset = _build_dataset(X, y)
        self.n_features_in_ = dataset.p
        if self.standardize:
            dataset, self.standardization_ = standardize(dataset)
        else:
            self.standardization_ = None
        result = self._run_path(dataset, self._path_config(dataset.p))
        self.path_result_ = result
        self.ranking_ = np.asarray(result.ranking)
        self.drop_lambda_ = np.asarray(result.drop_lambda)
        return self

    def _get_support_mask(self):
        if not hasattr(self, "ranking_"):
            raise AttributeError("call fit before querying support")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[self.ranking_[: self.top_k] - 1] = True
        return mask


class LassoNetCoxSelector(_BasePathSelector):
    """Neural feature selector for right-censored data.

    Trains the residual network along the hierarchical sparsity path and
    ranks features by how long they survive on the path. ``transform``
    keeps the ``top_k`` highest-ranked columns.
    """

    def __init__(self, top_k=3, hidden_dims=(30, 30, 30), dropout=0.2,
                 epochs_per_lambda=10, learning_rate=1e-3, path_multiplier=0.02,
                 M=10.0, lambda_init="auto", dense_epochs=100,
                 standardize=True, random_state=0):
        super().__init__(top_k=top_k, epochs_per_lambda=epochs_per_lambda,
                         learning_rate=learning_rate, path_multiplier=path_multiplier,
                         lambda_init=lambda_init, dense_epochs=dense_epochs,
                         standardize=standardize, random_state=random_state)
        self.hidden_dims = hidden_dims
        self.dropout = dropout
        self.M = M

    def _path_config(self, p):
        return PathConfig(
            architecture=Architecture(
                input_dim=p,
                hidden_dims=tuple(self.hidden_dims),
                dropout_rate=self.dropout,
            ),
            epochs_per_lambda=self.epochs_per_lambda,
            learning_rate=self.learning_rate,
            path_multiplier=self.path_multiplier,
            M=self.M,
            lambda_init=self.lambda_init,
            dense_epochs=self.dense_epochs,
            seed=self.random_state,
        )

    def _run_path(self, dataset, config):
        return train_path(dataset, config)


class LassoCoxSelector(_BasePathSelector):
    """Linear l1 Cox selector running the same lambda ladder."""

    def _path_config(self, p):
        return PathConfig(
            architecture=Architecture(input_dim=p, hidden_dims=(1,), dropout_rate=0.0),
            epochs_per_lambda=self.epochs_per_lambda,
            learning_rate=self.learning_rate,
            path_multiplier=self.path_multiplier,
            lambda_init=self.lambda_init,
            dense_epochs=self.dense_epochs,
            seed=self.random_state,
        )

    def _run_path(self, dataset, config):
        return fit_cox_lasso_path(dataset, config)


class CoxPHModel(BaseEstimator):
    """Classical linear Cox fit with Wald p-values and a p-value ranking."""

    def __init__(self, standardize=True, max_iter=100, tol=1e-8):
        self.standardize = standardize
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        dataset = _build_dataset(X, y)
        self.n_features_in_ = dataset.p
        if self.standardize:
            dataset, self.standardization_ = standardize(dataset)
        else:
            self.standardization_ = None
        fit = fit_cox_classical(dataset, max_iter=self.max_iter, tol=self.tol)
        self.fit_result_ = fit
        self.coef_ = fit.beta
        self.std_err_ = fit.std_err
        self.p_values_ = fit.p_values
        self.converged_ = fit.converged
        self.n_iter_ = fit.iterations
        self.ranking_ = np.asarray(rank_by_pvalue(fit))
        return self

    def predict(self, X):
        """Linear risk score; higher means higher hazard."""
        if not hasattr(self, "coef_"):
            raise AttributeError("call fit before predict")
        X = check_covariate_matrix(X)
        if self.standardization_ is not None:
            X = self.standardization_.apply(X)
        return X @ self.coef_
