"""Hierarchical proximal operator coupling a skip weight to its first-layer column.

For one feature with gradient-stepped skip weight b and first-layer column w,
the operator returns the exact global minimizer of

    0.5*(t - b)^2 + 0.5*||u - w||^2 + lambda_step*|t|
    subject to  ||u||_inf <= M * |t|.

For fixed |t| the optimal u clips w to [-M|t|, M|t|] componentwise, which
reduces the problem to a convex piecewise quadratic in |t|. Its minimum lies
at a segment's stationary point, at a clipping knot |w_(j)|/M, or at zero, so
evaluating the objective at those candidates and keeping the best is exact.
M = 0 forces the column to zero (plain soft-thresholding of t); M = +inf
leaves the column untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError


def soft_threshold(x, t):
    """Componentwise soft threshold sign(x) * max(|x| - t, 0)."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


@dataclass(frozen=True)
class ProxInput:
    b: float
    w: np.ndarray
    lambda_step: float
    M: float

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        object.__setattr__(self, "w", w)
        if not np.isfinite(self.b) or not np.all(np.isfinite(w)):
            raise ValueError("b and w must be finite")
        if self.lambda_step < 0 or not np.isfinite(self.lambda_step):
            raise ValueError("lambda_step must be finite and >= 0")
        if self.M < 0 or np.isnan(self.M):
            raise ValueError("M must be >= 0 (may be +inf)")


@dataclass(frozen=True)
class ProxOutput:
    theta: float
    w: np.ndarray

    def objective(self, inp: ProxInput) -> float:
        return prox_objective(self.theta, self.w, inp)


def prox_objective(theta: float, w: np.ndarray, inp: ProxInput) -> float:
    """Value of the prox problem's objective at a candidate point."""
    return float(
        0.5 * (theta - inp.b) ** 2
        + 0.5 * np.sum((np.asarray(w) - inp.w) ** 2)
        + inp.lambda_step * abs(theta)
    )


def hier_prox_batch(theta, W0, lambda_step: float, M: float):
    """Apply the operator to every feature column independently.

    theta: (p,) skip weights after the gradient step.
    W0: (d1, p) first-layer weights; column i belongs to feature i.
    Returns the updated (theta, W0) pair; output always satisfies
    ``|W0[j, i]| <= M * |theta[i]|``.
    """
    theta = np.asarray(theta, dtype=float)
    W0 = np.asarray(W0, dtype=float)
    if W0.ndim != 2 or theta.ndim != 1 or W0.shape[1] != theta.shape[0]:
        raise DimensionMismatchError(
            f"W0 must be (d1, p) with p = len(theta); got {W0.shape} vs {theta.shape}"
        )
    if lambda_step < 0:
        raise ValueError("lambda_step must be >= 0")

    if np.isinf(M):
        return soft_threshold(theta, lambda_step), W0.copy()
    if M == 0.0:
        return soft_threshold(theta, lambda_step), np.zeros_like(W0)

    d1, p = W0.shape
    absb = np.abs(theta)
    aw = -np.sort(-np.abs(W0), axis=0)  # magnitudes, descending per column
    cums = np.vstack([np.zeros(p), np.cumsum(aw, axis=0)])  # (d1+1, p)

    m = np.arange(d1 + 1)[:, None]
    stationary = (absb[None, :] - lambda_step + M * cums) / (1.0 + M * M * m)
    candidates = np.vstack([
        np.maximum(stationary, 0.0),
        aw / M,  # clipping knots
        np.zeros((1, p)),
    ])

    # exact objective in tau = |theta| with u clipped optimally
    deficit = np.maximum(aw[None, :, :] - M * candidates[:, None, :], 0.0)
    obj = (
        0.5 * (candidates - absb[None, :]) ** 2
        + lambda_step * candidates
        + 0.5 * np.sum(deficit * deficit, axis=1)
    )
    tau = candidates[np.argmin(obj, axis=0), np.arange(p)]

    sign = np.where(theta >= 0.0, 1.0, -1.0)
    theta_out = sign * tau
    bound = M * tau
    W0_out = np.clip(W0, -bound[None, :], bound[None, :])
    return theta_out, W0_out


def hier_prox_single(inp: ProxInput) -> ProxOutput:
    """Exact minimizer for a single feature; see the module docstring."""
    theta, W0 = hier_prox_batch(
        np.array([inp.b]), inp.w[:, None], inp.lambda_step, inp.M
    )
    return ProxOutput(theta=float(theta[0]), w=W0[:, 0])


def hier_prox_oracle(inp: ProxInput, grid_step: float) -> ProxOutput:
    """Brute-force reference: scan theta over a dense grid, clip w optimally.

    Independent of the closed form above; intended for tests. The grid covers
    [-R, R] with R = |b| + M * sum|w| (plus margin), which contains every
    minimizer of the objective.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    w_in = inp.w
    if np.isinf(inp.M):
        radius = abs(inp.b) + 1.0
    else:
        radius = abs(inp.b) + inp.M * float(np.sum(np.abs(w_in))) + 1.0
    grid = np.arange(-radius, radius + grid_step, grid_step)
    # the objective is kinked at zero, so scan that point exactly
    grid = np.append(grid, 0.0)

    best_obj = np.inf
    best = ProxOutput(theta=0.0, w=np.zeros_like(w_in))
    for chunk in np.array_split(grid, max(1, len(grid) // 4096)):
        taus = np.abs(chunk)
        if np.isinf(inp.M):
            u = np.broadcast_to(w_in, (len(chunk), len(w_in)))
        else:
            bound = inp.M * taus
            u = np.clip(w_in[None, :], -bound[:, None], bound[:, None])
        obj = (
            0.5 * (chunk - inp.b) ** 2
            + inp.lambda_step * taus
            + 0.5 * np.sum((u - w_in[None, :]) ** 2, axis=1)
        )
        i = int(np.argmin(obj))
        if obj[i] < best_obj:
            best_obj = float(obj[i])
            best = ProxOutput(theta=float(chunk[i]), w=u[i].copy())
    return best
