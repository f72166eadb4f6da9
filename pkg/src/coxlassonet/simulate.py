"""Synthetic right-censored survival data with a known true feature set.

Covariates are multivariate Gaussian with correlation rho^|i-j| (drawn by the
exact AR(1) recursion), event times come from inverse-transform sampling of
the proportional-hazards survival function with unit baseline hazard, and
censoring times are uniform on (0, c). Covariate, event, and censoring draws
use three independent seeded streams, so T and C are independent given x.
All randomness goes through numpy's PCG64 Generator seeded via SeedSequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    InvalidCError,
    InvalidConfigError,
    InvalidRhoError,
)
from .survival import SurvivalDataset, dataset_from_arrays

MODEL1 = "model1"
MODEL2 = "model2"
MODEL2_SQUARED = "model2_squared"
MODELS = (MODEL1, MODEL2, MODEL2_SQUARED)

MODEL1_BETA = np.array([0.8, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.6, 0.0])
TRUE_FEATURES = frozenset({1, 4, 9})


@dataclass(frozen=True)
class SimScenario:
    """One simulation cell: design, size, correlation, censoring bound, seed."""

    model: str
    n: int
    p: int = 10
    rho: float = 0.0
    c: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.n < 2:
            raise InvalidConfigError("n must be at least 2")
        if self.p < 1:
            raise InvalidConfigError("p must be positive")
        if not 0.0 <= self.rho < 1.0:
            raise InvalidRhoError(f"rho must lie in [0, 1), got {self.rho}")
        if not self.c > 0:
            raise InvalidCError(f"c must be positive, got {self.c}")

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "p": self.p,
            "rho": self.rho,
            "c": self.c,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class GeneratedData:
    dataset: SurvivalDataset
    true_features: frozenset[int]
    true_event_times: np.ndarray
    censor_rate: float


def _child_seeds(seed: int, count: int) -> list[int]:
    ss = np.random.SeedSequence(seed % (2**63))
    return [int(c.generate_state(1, np.uint64)[0]) for c in ss.spawn(count)]


def gen_covariates(n: int, p: int, rho: float, seed: int) -> np.ndarray:
    """Rows i.i.d. N(0, Sigma) with Sigma_ij = rho^|i-j|, via the AR(1) recursion."""
    if not 0.0 <= rho < 1.0:
        raise InvalidRhoError(f"rho must lie in [0, 1), got {rho}")
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, p))
    if rho == 0.0:
        return Z
    X = np.empty_like(Z)
    X[:, 0] = Z[:, 0]
    scale = np.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + scale * Z[:, j]
    return X


def _check_p10(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 10:
        raise DimensionMismatchError(f"{name} expects 10 covariates, got {x.shape[-1]}")
    return x


def psi_model1(x) -> np.ndarray | float:
    """Linear effect 0.8*x1 + 1.0*x4 + 0.6*x9 (works on vectors or row batches)."""
    x = _check_p10(x, "psi_model1")
    out = x @ MODEL1_BETA
    return float(out) if out.ndim == 0 else out


def psi_model2(x) -> np.ndarray | float:
    """Nonlinear effect x1 + max(x4, 1) + x4*x9."""
    x = _check_p10(x, "psi_model2")
    out = x[..., 0] + np.maximum(x[..., 3], 1.0) + x[..., 3] * x[..., 8]
    return float(out) if out.ndim == 0 else out


def psi_model2_squared(x) -> np.ndarray | float:
    """Variant with a squared linear term: x1^2 + max(x4, 1) + x4*x9."""
    x = _check_p10(x, "psi_model2_squared")
    out = x[..., 0] ** 2 + np.maximum(x[..., 3], 1.0) + x[..., 3] * x[..., 8]
    return float(out) if out.ndim == 0 else out


PSI_BY_MODEL = {
    MODEL1: psi_model1,
    MODEL2: psi_model2,
    MODEL2_SQUARED: psi_model2_squared,
}


def gen_event_times(psi_values, seed: int) -> np.ndarray:
    """T = -log(U) * exp(-psi) with U uniform on (0, 1): unit-baseline inverse transform."""
    psi = np.asarray(psi_values, dtype=float)
    rng = np.random.default_rng(seed)
    u = rng.random(psi.shape)
    # rng.random lives in [0, 1); nudge exact zeros so T stays finite/positive
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    return -np.log(u) * np.exp(-psi)


def apply_censoring(T, c: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform(0, c) censoring: returns observed times and event indicators."""
    if not c > 0:
        raise InvalidCError(f"c must be positive, got {c}")
    T = np.asarray(T, dtype=float)
    rng = np.random.default_rng(seed)
    C = rng.uniform(0.0, c, size=T.shape)
    Y = np.minimum(T, C)
    delta = (T <= C).astype(np.int64)
    return Y, delta


def generate(scenario: SimScenario) -> GeneratedData:
    """Draw one dataset for the scenario; deterministic in the scenario seed."""
    seeds = _child_seeds(scenario.seed, 3)
    X = gen_covariates(scenario.n, scenario.p, scenario.rho, seeds[0])
    psi = PSI_BY_MODEL[scenario.model](X)
    T = gen_event_times(psi, seeds[1])
    Y, delta = apply_censoring(T, scenario.c, seeds[2])
    dataset = dataset_from_arrays(Y, delta, X)
    return GeneratedData(
        dataset=dataset,
        true_features=TRUE_FEATURES,
        true_event_times=T,
        censor_rate=float(1.0 - delta.mean()),
    )
