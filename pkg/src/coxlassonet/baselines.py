"""Linear Cox comparators: Newton maximum partial likelihood and an l1 path.

The classical fit runs Newton-Raphson with step halving on the Breslow
negative log partial likelihood and reports Wald statistics from the inverse
observed information. The lasso comparator runs proximal gradient descent
(gradient step, then soft threshold) along the same geometric lambda ladder
as the network trainer, so ranking differences between the two isolate the
model class rather than the schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .exceptions import (
    NonFiniteLossError,
    NoTerminationError,
    SingularHessianError,
)
from .path import MAX_PATH_STEPS, PathConfig, _auto_lambda, drop_order_ranking
from .prox import soft_threshold
from .survival import SurvivalDataset, neg_log_partial_likelihood, nlpl_gradient


@dataclass(frozen=True)
class CoxFit:
    beta: np.ndarray
    std_err: np.ndarray
    p_values: np.ndarray
    converged: bool
    iterations: int
    final_loss: float

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            "std_err": self.std_err.tolist(),
            "p_values": self.p_values.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "final_loss": self.final_loss,
        }


@dataclass(frozen=True)
class LassoCoxPath:
    lambdas: np.ndarray
    beta_snapshots: np.ndarray  # (T, p)
    drop_lambda: np.ndarray
    ranking: tuple[int, ...]
    lambda_start: float

    def to_dict(self) -> dict:
        return {
            "lambda_start": self.lambda_start,
            "lambdas": self.lambdas.tolist(),
            "beta_snapshots": self.beta_snapshots.tolist(),
            "drop_lambda": self.drop_lambda.tolist(),
            "ranking": list(self.ranking),
        }


def _loss_grad_hess(beta: np.ndarray, data: SurvivalDataset,
                    want_hess: bool = True):
    """Breslow loss, gradient, and observed information in beta.

    Everything comes from cumulative sums of exp(score), x*exp(score) and
    x x' * exp(score) along the time-descending sort, read at tie-block ends.
    """
    X = np.asarray(data.covariates)
    scores = X @ beta
    order = data.sort_index
    s = scores[order]
    d = data._status_sorted
    Xs = X[order]

    smax = s.max()
    w = np.exp(s - smax)
    wX = Xs * w[:, None]
    risk0 = np.cumsum(w)[data._block_last]
    risk1 = np.cumsum(wX, axis=0)[data._block_last]

    events = d == 1
    log_risk = np.log(risk0) + smax
    loss = float(np.sum(log_risk[events] - s[events]))
    xbar = risk1[events] / risk0[events, None]
    grad = -(Xs[events] - xbar).sum(axis=0)

    if not want_hess:
        return loss, grad, None
    wXX = np.einsum("ij,ik->ijk", Xs, wX)
    risk2 = np.cumsum(wXX, axis=0)[data._block_last]
    h_terms = risk2[events] / risk0[events, None, None]
    h_terms -= np.einsum("ij,ik->ijk", xbar, xbar)
    return loss, grad, h_terms.sum(axis=0)


def fit_cox_classical(data: SurvivalDataset, max_iter: int = 100,
                      tol: float = 1e-8, max_halvings: int = 30) -> CoxFit:
    """Newton-Raphson maximum partial likelihood with Wald p-values.

    Halves the step while the loss would increase; gives up on a step after
    ``max_halvings`` and returns a partial fit with ``converged=False``.
    A monotone likelihood (no finite maximizer) shows up the same way.
    """
    p = data.p
    beta = np.zeros(p)
    loss, grad, hess = _loss_grad_hess(beta, data)
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        try:
            direction = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError as exc:
            raise SingularHessianError(
                "observed information is singular; check for collinear or "
                "constant covariate columns"
            ) from exc
        step = 1.0
        for _ in range(max_halvings + 1):
            candidate = beta - step * direction
            new_loss = neg_log_partial_likelihood(data.covariates @ candidate, data)
            if np.isfinite(new_loss) and new_loss <= loss + 1e-12 * max(1.0, abs(loss)):
                break
            step *= 0.5
        else:
            break  # no acceptable step: give up, converged stays False
        moved = step * np.max(np.abs(direction))
        beta = candidate
        loss, grad, hess = _loss_grad_hess(beta, data)
        if moved < tol:
            converged = True
            break

    try:
        cov = np.linalg.inv(hess)
    except np.linalg.LinAlgError as exc:
        raise SingularHessianError("observed information is singular") from exc
    diag = np.clip(np.diag(cov), 0.0, None)
    std_err = np.sqrt(diag)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std_err > 0, np.abs(beta) / std_err, np.inf)
    p_values = 2.0 * norm.sf(z)
    return CoxFit(
        beta=beta,
        std_err=std_err,
        p_values=p_values,
        converged=converged,
        iterations=iterations,
        final_loss=loss,
    )


def rank_by_pvalue(fit: CoxFit) -> tuple[int, ...]:
    """Features by ascending p-value; ties by |beta| descending, then index."""
    p_values = np.asarray(fit.p_values, dtype=float)
    absb = np.abs(fit.beta)
    order = sorted(range(len(p_values)), key=lambda i: (p_values[i], -absb[i], i))
    return tuple(i + 1 for i in order)


def fit_cox_lasso_path(data: SurvivalDataset, config: PathConfig) -> LassoCoxPath:
    """Proximal-gradient l1 Cox along the shared geometric lambda ladder.

    Mirrors the network trainer's discipline: ``dense_epochs`` plain gradient
    steps from zero as the warm start, then per lambda ``epochs_per_lambda``
    rounds of gradient step plus soft threshold at alpha * lambda. Ends when
    every coefficient is zero.
    """
    X = np.asarray(data.covariates)
    alpha = config.learning_rate
    beta = np.zeros(data.p)

    def grad_at(b):
        scores = X @ b
        if not np.all(np.isfinite(scores)):
            raise NonFiniteLossError(
                "lasso path scores are not finite; reduce the learning rate"
            )
        loss = neg_log_partial_likelihood(scores, data)
        if not np.isfinite(loss):
            raise NonFiniteLossError(
                f"lasso path loss {loss} is not finite; reduce the learning rate"
            )
        return X.T @ nlpl_gradient(scores, data)

    for _ in range(config.dense_epochs):
        beta = beta - alpha * grad_at(beta)

    if config.lambda_init == "auto":
        lam = _auto_lambda(grad_at(beta), alpha)
    else:
        lam = float(config.lambda_init)
    lambda_start = lam

    lambdas: list[float] = []
    snapshots: list[np.ndarray] = []
    step = 0
    while True:
        step += 1
        if step > MAX_PATH_STEPS:
            raise NoTerminationError(
                f"lasso path did not empty within {MAX_PATH_STEPS} lambda steps"
            )
        lam = lam * (1.0 + config.path_multiplier)
        for _ in range(config.epochs_per_lambda):
            beta = soft_threshold(beta - alpha * grad_at(beta), alpha * lam)
        lambdas.append(lam)
        snapshots.append(beta.copy())
        if not np.any(beta):
            break

    lambdas_arr = np.array(lambdas)
    snaps = np.vstack(snapshots)
    drop_lambda, ranking = drop_order_ranking(lambdas_arr, snaps)
    return LassoCoxPath(
        lambdas=lambdas_arr,
        beta_snapshots=snaps,
        drop_lambda=drop_lambda,
        ranking=ranking,
        lambda_start=lambda_start,
    )
