"""Sparsity path training: dense warm start, then a geometric penalty ladder.

Each ladder step multiplies lambda by (1 + path_multiplier) and runs a fixed
number of full-batch epochs; every epoch takes one gradient step on the
negative log partial likelihood for all parameters, then applies the
hierarchical prox to (theta, first-layer weights) with step alpha * lambda.
Features leave the model as their skip weight hits zero; the order of
departure is the importance ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    KOutOfRangeError,
    NonFiniteLossError,
    NoTerminationError,
)
from .network import (
    Architecture,
    NetworkParams,
    backprop,
    forward_batch,
    init_params,
)
from .prox import hier_prox_batch
from .survival import (
    SurvivalDataset,
    dataset_from_arrays,
    neg_log_partial_likelihood,
    nlpl_gradient,
)

MAX_PATH_STEPS = 10_000


@dataclass(frozen=True)
class PathConfig:
    """Hyperparameters of the path run; defaults follow the benchmark setup."""

    architecture: Architecture
    epochs_per_lambda: int = 10
    learning_rate: float = 1e-3
    path_multiplier: float = 0.02
    M: float = 10.0
    lambda_init: float | str = "auto"
    dense_epochs: int = 100
    seed: int = 0

    def to_dict(self) -> dict:
        arch = self.architecture
        return {
            "architecture": {
                "input_dim": arch.input_dim,
                "hidden_dims": list(arch.hidden_dims),
                "dropout_rate": arch.dropout_rate,
            },
            "epochs_per_lambda": self.epochs_per_lambda,
            "learning_rate": self.learning_rate,
            "path_multiplier": self.path_multiplier,
            "M": self.M if np.isfinite(self.M) else "inf",
            "lambda_init": self.lambda_init,
            "dense_epochs": self.dense_epochs,
            "seed": self.seed,
        }

    def __post_init__(self):
        if self.epochs_per_lambda < 1:
            raise ValueError("epochs_per_lambda must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.path_multiplier <= 0:
            raise ValueError("path_multiplier must be positive")
        if self.M < 0 or np.isnan(self.M):
            raise ValueError("M must be >= 0 (may be +inf)")
        if self.dense_epochs < 0:
            raise ValueError("dense_epochs must be >= 0")
        if isinstance(self.lambda_init, str):
            if self.lambda_init != "auto":
                raise ValueError("lambda_init must be a positive number or 'auto'")
        elif self.lambda_init <= 0:
            raise ValueError("lambda_init must be a positive number or 'auto'")


@dataclass(frozen=True)
class PathPoint:
    """State recorded after the epochs of one lambda value."""

    lam: float
    active_count: int
    theta_snapshot: np.ndarray
    train_loss: float


@dataclass(frozen=True)
class PathResult:
    points: tuple[PathPoint, ...]
    drop_lambda: np.ndarray
    ranking: tuple[int, ...]  # 1-based feature labels, most important first
    config: PathConfig
    lambda_start: float

    @property
    def p(self) -> int:
        return len(self.drop_lambda)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "lambda_start": self.lambda_start,
            "points": [
                {
                    "lambda": pt.lam,
                    "active_count": pt.active_count,
                    "theta": pt.theta_snapshot.tolist(),
                    "train_loss": pt.train_loss,
                }
                for pt in self.points
            ],
            "drop_lambda": self.drop_lambda.tolist(),
            "ranking": list(self.ranking),
        }


def _mask_seed(seed: int, step: int, epoch: int) -> int:
    """Deterministic per-(run, ladder step, epoch) dropout stream."""
    ss = np.random.SeedSequence([seed % (2**63), step, epoch])
    return int(ss.generate_state(1, np.uint64)[0])


def _check_arch(data: SurvivalDataset, config: PathConfig) -> None:
    if config.architecture.input_dim != data.p:
        raise DimensionMismatchError(
            f"architecture input_dim {config.architecture.input_dim} "
            f"!= dataset p {data.p}"
        )


def _epoch(params: NetworkParams, data: SurvivalDataset, config: PathConfig,
           mask_seed: int) -> float:
    """One full-batch gradient step on every parameter; returns the loss seen."""
    X = data.covariates
    q = config.architecture.dropout_rate
    scores = forward_batch(params, X, "train", q, mask_seed)
    if not np.all(np.isfinite(scores)):
        raise NonFiniteLossError(
            "network scores are not finite; reduce the learning rate"
        )
    loss = neg_log_partial_likelihood(scores, data)
    if not math.isfinite(loss):
        raise NonFiniteLossError(
            f"training loss {loss} is not finite; reduce the learning rate"
        )
    lg = nlpl_gradient(scores, data)
    grads = backprop(params, X, lg, "train", q, mask_seed)
    a = config.learning_rate
    params.theta -= a * grads.theta
    for w, gw in zip(params.weights, grads.weights):
        w -= a * gw
    for b, gb in zip(params.biases, grads.biases):
        b -= a * gb
    return loss


def train_dense(data: SurvivalDataset, config: PathConfig) -> NetworkParams:
    """Unpenalized full-batch pretraining from the seeded initialization."""
    _check_arch(data, config)
    params = init_params(config.architecture, config.seed)
    if config.M == 0.0:
        # M = 0 makes the feasible set W0 = 0 regardless of theta, i.e. a
        # purely linear model; starting dense training inside it keeps the
        # whole run coordinate-identical to the proximal-gradient lasso
        params.weights[0][:] = 0.0
    for epoch in range(config.dense_epochs):
        _epoch(params, data, config, _mask_seed(config.seed, 0, epoch))
    return params


def _auto_lambda(g_theta: np.ndarray, learning_rate: float) -> float:
    """Path origin: one percent of the skip-gradient zeroing scale."""
    top = float(np.max(np.abs(g_theta)))
    return max(0.01 * top / learning_rate, 1e-12)


def eval_loss(params: NetworkParams, data: SurvivalDataset) -> float:
    """Deterministic (dropout-free) loss of the current model on a dataset."""
    scores = forward_batch(params, data.covariates, "eval")
    return neg_log_partial_likelihood(scores, data)


def train_path(data: SurvivalDataset, config: PathConfig,
               point_callback=None) -> PathResult:
    """Run the full ladder until every feature's skip weight is zero.

    ``point_callback(params, point)``, when given, is invoked after each
    recorded point (used e.g. for validation scoring of the hierarchy
    coefficient). Raises ``NoTerminationError`` after ``MAX_PATH_STEPS``
    ladder steps, which signals a pathologically small starting lambda or
    multiplier.
    """
    _check_arch(data, config)
    params = train_dense(data, config)

    if config.lambda_init == "auto":
        scores = forward_batch(params, data.covariates, "eval")
        g_theta = data.covariates.T @ nlpl_gradient(scores, data)
        lam = _auto_lambda(g_theta, config.learning_rate)
    else:
        lam = float(config.lambda_init)
    lambda_start = lam

    alpha = config.learning_rate
    points: list[PathPoint] = []
    step = 0
    while True:
        step += 1
        if step > MAX_PATH_STEPS:
            raise NoTerminationError(
                f"path did not empty the model within {MAX_PATH_STEPS} lambda steps"
            )
        lam = lam * (1.0 + config.path_multiplier)
        for epoch in range(config.epochs_per_lambda):
            _epoch(params, data, config, _mask_seed(config.seed, step, epoch))
            params.theta, params.weights[0] = hier_prox_batch(
                params.theta, params.weights[0], alpha * lam, config.M
            )
        k = int(np.count_nonzero(params.theta))
        point = PathPoint(
            lam=lam,
            active_count=k,
            theta_snapshot=params.theta.copy(),
            train_loss=eval_loss(params, data),
        )
        points.append(point)
        if point_callback is not None:
            point_callback(params, point)
        if k == 0:
            break

    lambdas = np.array([pt.lam for pt in points])
    thetas = np.vstack([pt.theta_snapshot for pt in points])
    drop_lambda, ranking = drop_order_ranking(lambdas, thetas)
    return PathResult(
        points=tuple(points),
        drop_lambda=drop_lambda,
        ranking=ranking,
        config=config,
        lambda_start=lambda_start,
    )


def drop_order_ranking(lambdas: np.ndarray,
                       snapshots: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Departure lambdas and the importance ranking they induce.

    ``snapshots`` is (T, p), one coefficient vector per recorded lambda; the
    final row must be all zero. A feature's departure is the first recorded
    lambda from which its coefficient stays zero (revivals reset it). Later
    departure ranks higher; ties break by coefficient magnitude just before
    the shared departure, then by feature index.
    """
    T, p = snapshots.shape
    active = snapshots != 0.0
    if active[-1].any():
        raise ValueError("last snapshot must be all zero")
    # last index where active; -1 when never active
    rev_last = np.where(active.any(axis=0), T - 1 - np.argmax(active[::-1], axis=0), -1)
    drop_idx = rev_last + 1
    drop_lambda = lambdas[drop_idx]
    tie_mag = np.where(
        drop_idx >= 1,
        np.abs(snapshots[np.maximum(drop_idx - 1, 0), np.arange(p)]),
        0.0,
    )
    order = sorted(range(p), key=lambda i: (-drop_lambda[i], -tie_mag[i], i))
    return drop_lambda, tuple(i + 1 for i in order)


def rank_features(result: PathResult) -> tuple[int, ...]:
    """Importance ranking recorded in the result (1-based labels)."""
    return result.ranking


def select_top_k(ranking, k: int) -> set[int]:
    """First k entries of a ranking as a feature set."""
    ranking = list(ranking)
    if not 1 <= k <= len(ranking):
        raise KOutOfRangeError(f"k must lie in 1..{len(ranking)}, got {k}")
    return set(ranking[:k])


def _split_train_validation(data: SurvivalDataset, seed: int,
                            val_fraction: float = 0.2):
    # stream tag 65536 keeps the split independent of the dropout streams
    rng = np.random.default_rng(np.random.SeedSequence([seed % (2**63), 65536]))
    n = data.n
    perm = rng.permutation(n)
    n_val = max(1, int(round(val_fraction * n)))
    val_idx, train_idx = perm[:n_val], perm[n_val:]

    def subset(idx):
        return dataset_from_arrays(
            np.asarray(data.times)[idx],
            np.asarray(data.status)[idx],
            np.asarray(data.covariates)[idx],
        )

    return subset(train_idx), subset(val_idx)


def select_m_by_validation(data: SurvivalDataset, config: PathConfig,
                           grid=(0.1, 1.0, 10.0, 100.0),
                           val_fraction: float = 0.2) -> float:
    """Pick the hierarchy coefficient by held-out partial likelihood.

    Runs one path per grid value on an 80/20 split (seeded by the config) and
    scores each by the best validation loss reached along its path; the first
    grid value attaining the lowest score wins.
    """
    train, val = _split_train_validation(data, config.seed, val_fraction)
    best_m, best_score = None, np.inf
    for m in grid:
        cfg = replace(config, M=float(m))
        scores: list[float] = []
        train_path(train, cfg,
                   point_callback=lambda params, pt: scores.append(eval_loss(params, val)))
        score = min(scores)
        if score < best_score:
            best_m, best_score = float(m), score
    return best_m
