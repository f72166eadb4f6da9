"""Right-censored survival data and the Cox negative log partial likelihood.

The dataset keeps a single time-descending sort of the samples. Along that
order the risk set of any observed time is a prefix that ends at the last
member of the tie block, so the likelihood, its gradient, and the baseline
Cox derivatives are all one cumulative-sum pass after sorting. Tied event
times share one risk-set denominator (Breslow convention).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    ConstantColumnError,
    DimensionMismatchError,
    EmptyOrSingletonError,
    LengthMismatchError,
    NoEventsError,
    NonFiniteValueError,
)
from .validation import check_finite_array


@dataclass(frozen=True)
class SurvivalSample:
    """One observation: follow-up time, event indicator, covariate vector."""

    time: float
    status: int
    covariates: np.ndarray

    def __post_init__(self):
        if not np.isfinite(self.time) or self.time < 0:
            raise NonFiniteValueError(f"time must be finite and >= 0, got {self.time}")
        if self.status not in (0, 1):
            raise NonFiniteValueError(f"status must be 0 or 1, got {self.status}")
        cov = check_finite_array(self.covariates, "covariates", ndim=1)
        object.__setattr__(self, "covariates", cov)


@dataclass(frozen=True)
class SurvivalDataset:
    """Immutable sample arrays plus the cached time-descending sort.

    ``sort_index`` orders samples by time descending; at equal times events
    come before censored samples and remaining ties keep original order.
    ``_block_first``/``_block_last`` give, for each sorted position, the first
    and last sorted position sharing that observed time.
    """

    times: np.ndarray
    status: np.ndarray
    covariates: np.ndarray
    sort_index: np.ndarray
    _block_first: np.ndarray = field(repr=False)
    _block_last: np.ndarray = field(repr=False)
    _status_sorted: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def p(self) -> int:
        return self.covariates.shape[1]

    @property
    def n_events(self) -> int:
        return int(self.status.sum())

    @property
    def samples(self) -> tuple[SurvivalSample, ...]:
        return tuple(
            SurvivalSample(float(t), int(d), x)
            for t, d, x in zip(self.times, self.status, self.covariates)
        )

    def with_covariates(self, covariates: np.ndarray) -> "SurvivalDataset":
        """Same samples and sort with a replaced covariate matrix."""
        covariates = check_finite_array(covariates, "covariates", ndim=2)
        if covariates.shape[0] != self.n:
            raise LengthMismatchError(
                f"covariates rows {covariates.shape[0]} != n {self.n}"
            )
        covariates = covariates.copy()
        covariates.setflags(write=False)
        return SurvivalDataset(
            times=self.times,
            status=self.status,
            covariates=covariates,
            sort_index=self.sort_index,
            _block_first=self._block_first,
            _block_last=self._block_last,
            _status_sorted=self._status_sorted,
        )

    def select_columns(self, indices) -> "SurvivalDataset":
        """Restrict to the given 0-based covariate columns."""
        return self.with_covariates(np.asarray(self.covariates)[:, list(indices)])


@dataclass(frozen=True)
class Standardization:
    """Per-column location/scale; sds use the sample (n-1) denominator."""

    means: np.ndarray
    sds: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.means) / self.sds

    def invert(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) * self.sds + self.means


def dataset_from_arrays(times, status, covariates) -> SurvivalDataset:
    """Build a ``SurvivalDataset`` from parallel arrays, validating invariants."""
    times = check_finite_array(times, "times", ndim=1)
    covariates = check_finite_array(covariates, "covariates", ndim=2)
    status_arr = np.asarray(status)
    if status_arr.ndim != 1:
        raise DimensionMismatchError("status must be 1-dimensional")
    n = len(times)
    if len(status_arr) != n:
        raise LengthMismatchError("times and status differ in length")
    if covariates.shape[0] != n:
        raise LengthMismatchError("times and covariates differ in length")

    if n < 2:
        raise EmptyOrSingletonError("need at least two samples")
    if np.any(times < 0):
        raise NonFiniteValueError("times must be >= 0")
    if not np.isin(status_arr, (0, 1)).all():
        raise NonFiniteValueError("status entries must be 0 or 1")
    status_arr = status_arr.astype(np.int64)
    if status_arr.sum() == 0:
        raise NoEventsError("at least one sample must have status 1")

    # time descending; events before censorings at equal time; then input order
    order = np.lexsort((np.arange(n), -status_arr, -times))
    ts = times[order]

    new_block = np.empty(n, dtype=bool)
    new_block[0] = True
    new_block[1:] = ts[1:] != ts[:-1]
    block_id = np.cumsum(new_block) - 1
    firsts = np.flatnonzero(new_block)
    lasts = np.append(firsts[1:], n) - 1

    times = times.copy()
    covariates = covariates.copy()
    for arr in (times, status_arr, covariates, order):
        arr.setflags(write=False)

    return SurvivalDataset(
        times=times,
        status=status_arr,
        covariates=covariates,
        sort_index=order,
        _block_first=firsts[block_id],
        _block_last=lasts[block_id],
        _status_sorted=status_arr[order],
    )


def build_dataset(samples) -> SurvivalDataset:
    """Assemble a dataset from a sequence of :class:`SurvivalSample`."""
    samples = list(samples)
    if len(samples) < 2:
        raise EmptyOrSingletonError("need at least two samples")
    dims = {len(s.covariates) for s in samples}
    if len(dims) != 1:
        raise DimensionMismatchError(f"mixed covariate dimensions: {sorted(dims)}")
    times = np.array([s.time for s in samples], dtype=float)
    status = np.array([s.status for s in samples], dtype=np.int64)
    X = np.vstack([s.covariates for s in samples])
    return dataset_from_arrays(times, status, X)


def standardize(data: SurvivalDataset) -> tuple[SurvivalDataset, Standardization]:
    """Center each covariate column and scale it to unit sample sd.

    Raises ``ConstantColumnError`` if any column has zero variance.
    """
    X = np.asarray(data.covariates)
    means = X.mean(axis=0)
    sds = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sds == 0)
    if bad.size:
        raise ConstantColumnError(
            f"columns {['x%d' % (j + 1) for j in bad]} are constant"
        )
    stats = Standardization(means=means, sds=sds)
    return data.with_covariates(stats.apply(X)), stats


def _check_scores(scores, data: SurvivalDataset) -> np.ndarray:
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 1 or len(scores) != data.n:
        raise LengthMismatchError(
            f"scores must be a vector of length {data.n}, got shape {scores.shape}"
        )
    return scores


def neg_log_partial_likelihood(scores, data: SurvivalDataset) -> float:
    """Breslow negative log partial likelihood of per-sample risk scores.

    Computes ``-sum_{i: status=1} [ s_i - log sum_{j: Y_j >= Y_i} exp(s_j) ]``
    with a global max-shift for stability; the inner sums are one cumulative
    sum along the time-descending sort, read at tie-block ends.
    """
    scores = _check_scores(scores, data)
    if not np.all(np.isfinite(scores)):
        raise NonFiniteValueError("scores contain NaN or infinite values")
    s = scores[data.sort_index]
    smax = s.max()
    cum = np.cumsum(np.exp(s - smax))
    # cum can underflow to zero ahead of the max score; the resulting +inf
    # loss is the caller's divergence signal
    with np.errstate(divide="ignore"):
        log_risk = np.log(cum[data._block_last]) + smax
    events = data._status_sorted == 1
    return float(np.sum(log_risk[events] - s[events]))


def nlpl_gradient(scores, data: SurvivalDataset) -> np.ndarray:
    """Gradient of :func:`neg_log_partial_likelihood` in per-sample scores.

    Component i is ``-status_i + exp(s_i) * sum_{events j with Y_j <= Y_i}
    1 / riskdenom_j``; the event sum is a reverse cumulative sum over the
    same sorted order, read at tie-block starts.
    """
    scores = _check_scores(scores, data)
    s = scores[data.sort_index]
    d = data._status_sorted
    smax = s.max()
    exp_s = np.exp(s - smax)
    cum = np.cumsum(exp_s)
    risk = cum[data._block_last]  # scaled by exp(-smax)
    h = np.where(d == 1, 1.0 / risk, 0.0)
    suffix = np.cumsum(h[::-1])[::-1]
    g_sorted = -d + exp_s * suffix[data._block_first]
    grad = np.empty_like(g_sorted)
    grad[data.sort_index] = g_sorted
    return grad
