"""Residual feed-forward scorer: theta' x plus a shift-activated MLP.

The nonlinear part is ``W_L r(... r(W_1 r(W_0 x - v_1) - v_2) ...)`` with
ReLU applied coordinatewise to shifted pre-activations; the first affine map
carries no bias of its own. The linear skip path ``theta' x`` is added on
top, so zeroing ``theta`` and the first-layer column of a feature removes it
from the model entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, NonFiniteValueError


@dataclass(frozen=True)
class Architecture:
    """Network shape: input width, hidden widths, dropout probability."""

    input_dim: int
    hidden_dims: tuple[int, ...] = (30, 30, 30)
    dropout_rate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(int(d) for d in self.hidden_dims))
        if self.input_dim < 1:
            raise DimensionMismatchError("input_dim must be positive")
        if len(self.hidden_dims) < 1 or any(d < 1 for d in self.hidden_dims):
            raise DimensionMismatchError("hidden widths must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise NonFiniteValueError("dropout_rate must lie in [0, 1)")

    @property
    def depth(self) -> int:
        return len(self.hidden_dims)

    @property
    def widths(self) -> tuple[int, ...]:
        """Layer widths from input to the scalar output."""
        return (self.input_dim, *self.hidden_dims, 1)


@dataclass
class NetworkParams:
    """theta: (p,) skip weights; weights[l]: (d_{l+1}, d_l); biases[l]: shift of hidden layer l+1."""

    theta: np.ndarray
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            theta=self.theta.copy(),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass
class ParamGrads:
    """Gradient arrays mirroring :class:`NetworkParams`."""

    theta: np.ndarray
    weights: list[np.ndarray]
    biases: list[np.ndarray]


def init_params(arch: Architecture, seed: int) -> NetworkParams:
    """Deterministic init: fan-scaled uniform hidden weights, zero theta and shifts."""
    rng = np.random.default_rng(seed)
    widths = arch.widths
    weights = []
    for d_in, d_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (d_in + d_out))
        weights.append(rng.uniform(-limit, limit, size=(d_out, d_in)))
    biases = [np.zeros(d) for d in arch.hidden_dims]
    return NetworkParams(theta=np.zeros(arch.input_dim), weights=weights, biases=biases)


def _check_batch(params: NetworkParams, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatchError(f"X must be 2-dimensional, got shape {X.shape}")
    if X.shape[1] != len(params.theta):
        raise DimensionMismatchError(
            f"X has {X.shape[1]} columns but theta has length {len(params.theta)}"
        )
    return X


def _forward_cache(params: NetworkParams, X: np.ndarray, mode: str,
                   dropout_rate: float, mask_seed: int):
    """Run the net, keeping layer inputs, shifted pre-activations, and masks."""
    if mode not in ("train", "eval"):
        raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
    use_dropout = mode == "train" and dropout_rate > 0.0
    rng = np.random.default_rng(mask_seed) if use_dropout else None
    keep = 1.0 - dropout_rate

    n_hidden = len(params.biases)
    inputs, shifted, masks = [], [], []
    A = X
    for l in range(n_hidden):
        inputs.append(A)
        U = A @ params.weights[l].T - params.biases[l]
        shifted.append(U)
        H = np.maximum(U, 0.0)
        if use_dropout:
            M = rng.random(H.shape) < keep
            masks.append(M)
            A = H * (M / keep)
        else:
            masks.append(None)
            A = H
    inputs.append(A)
    g_out = A @ params.weights[n_hidden].T
    scores = X @ params.theta + g_out[:, 0]
    return scores, inputs, shifted, masks


def forward_batch(params: NetworkParams, X, mode: str = "eval",
                  dropout_rate: float = 0.0, mask_seed: int = 0) -> np.ndarray:
    """Scores for each row of X; dropout only in train mode, survivors scaled by 1/keep."""
    X = _check_batch(params, X)
    scores, _, _, _ = _forward_cache(params, X, mode, dropout_rate, mask_seed)
    return scores


def forward(params: NetworkParams, x, mode: str = "eval",
            dropout_rate: float = 0.0, mask_seed: int = 0) -> float:
    """Score of a single covariate vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionMismatchError(f"x must be a vector, got shape {x.shape}")
    return float(forward_batch(params, x[None, :], mode, dropout_rate, mask_seed)[0])


def backprop(params: NetworkParams, X, loss_grad, mode: str = "eval",
             dropout_rate: float = 0.0, mask_seed: int = 0) -> ParamGrads:
    """Exact gradients of sum_i loss_grad[i] * score_i for every parameter.

    Re-runs the forward pass with the same mask seed, so a (mode, seed) pair
    reproduces the dropout pattern of the matching forward call. The ReLU
    subgradient at exactly zero is taken as zero.
    """
    X = _check_batch(params, X)
    loss_grad = np.asarray(loss_grad, dtype=float)
    if loss_grad.shape != (X.shape[0],):
        raise DimensionMismatchError(
            f"loss_grad must have shape ({X.shape[0]},), got {loss_grad.shape}"
        )
    _, inputs, shifted, masks = _forward_cache(params, X, mode, dropout_rate, mask_seed)
    keep = 1.0 - dropout_rate
    n_hidden = len(params.biases)

    g_weights: list[np.ndarray | None] = [None] * (n_hidden + 1)
    g_biases: list[np.ndarray | None] = [None] * n_hidden
    g_weights[n_hidden] = loss_grad[None, :] @ inputs[n_hidden]
    delta = loss_grad[:, None] @ params.weights[n_hidden]  # (n, d_L)
    for l in range(n_hidden - 1, -1, -1):
        if masks[l] is not None:
            delta = delta * (masks[l] / keep)
        delta = delta * (shifted[l] > 0.0)
        g_biases[l] = -delta.sum(axis=0)
        g_weights[l] = delta.T @ inputs[l]
        if l > 0:
            delta = delta @ params.weights[l]

    return ParamGrads(theta=X.T @ loss_grad, weights=g_weights, biases=g_biases)


def serialize_params(arch: Architecture, params: NetworkParams) -> dict:
    """JSON-ready checkpoint: architecture plus flattened parameter arrays."""
    return {
        "input_dim": arch.input_dim,
        "hidden_dims": list(arch.hidden_dims),
        "dropout_rate": arch.dropout_rate,
        "theta": params.theta.tolist(),
        "weights": [w.ravel().tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
    }


def deserialize_params(doc: dict) -> tuple[Architecture, NetworkParams]:
    arch = Architecture(
        input_dim=int(doc["input_dim"]),
        hidden_dims=tuple(doc["hidden_dims"]),
        dropout_rate=float(doc["dropout_rate"]),
    )
    widths = arch.widths
    weights = []
    for flat, d_in, d_out in zip(doc["weights"], widths[:-1], widths[1:]):
        weights.append(np.asarray(flat, dtype=float).reshape(d_out, d_in))
    params = NetworkParams(
        theta=np.asarray(doc["theta"], dtype=float),
        weights=weights,
        biases=[np.asarray(b, dtype=float) for b in doc["biases"]],
    )
    if len(params.theta) != arch.input_dim:
        raise DimensionMismatchError("theta length inconsistent with architecture")
    return arch, params
