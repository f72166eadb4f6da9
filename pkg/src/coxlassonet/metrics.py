"""Selection metrics and the replication harness.

MinSize is the shortest ranking prefix containing every true feature;
prob_k_all and prob_k_i are replication frequencies that the top-k set
covers the whole truth / contains one feature. The harness reruns each
scenario with consecutive seeds, collects rankings per method, and reports
the aggregated metrics per (method, scenario) cell along with failure counts
(failed replications are excluded, never silently dropped).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace

import numpy as np

from .baselines import fit_cox_classical, fit_cox_lasso_path, rank_by_pvalue
from .exceptions import (
    CoxLassoNetError,
    EmptyTruthError,
    FeatureOutOfRangeError,
    InconsistentTruthError,
    KTooSmallError,
)
from .network import Architecture
from .path import PathConfig, train_path
from .simulate import SimScenario, generate
from .survival import standardize


@dataclass(frozen=True)
class ReplicationRecord:
    method: str
    scenario: SimScenario
    ranking: tuple[int, ...]
    truth: frozenset[int]

    def __post_init__(self):
        p = len(self.ranking)
        if sorted(self.ranking) != list(range(1, p + 1)):
            raise FeatureOutOfRangeError("ranking must be a permutation of 1..p")
        if not self.truth or not set(self.truth) <= set(range(1, p + 1)):
            raise EmptyTruthError("truth must be a nonempty subset of 1..p")


@dataclass(frozen=True)
class BenchmarkCell:
    method: str
    scenario: SimScenario
    n_completed: int
    n_failed: int
    min_size_mean: float
    min_size_median: float
    prob_all: float
    prob_feature: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "scenario": self.scenario.to_dict(),
            "n_completed": self.n_completed,
            "n_failed": self.n_failed,
            "min_size_mean": self.min_size_mean,
            "min_size_median": self.min_size_median,
            "prob_all": self.prob_all,
            "prob_feature": {str(i): v for i, v in self.prob_feature.items()},
        }


@dataclass(frozen=True)
class BenchmarkTable:
    cells: tuple[BenchmarkCell, ...]
    k: int
    replications: int
    base_seed: int

    def cell(self, method: str, **scenario_fields) -> BenchmarkCell:
        for c in self.cells:
            if c.method != method:
                continue
            if all(getattr(c.scenario, f) == v for f, v in scenario_fields.items()):
                return c
        raise KeyError(f"no cell for method={method}, {scenario_fields}")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "replications": self.replications,
            "base_seed": self.base_seed,
            "cells": [c.to_dict() for c in self.cells],
        }

    def to_csv_rows(self) -> list[list]:
        """Long format: one metric value per row."""
        header = ["method", "model", "n", "p", "rho", "c", "metric", "value"]
        rows = [header]
        for c in self.cells:
            s = c.scenario
            base = [c.method, s.model, s.n, s.p, s.rho, s.c]
            rows.append(base + ["n_completed", c.n_completed])
            rows.append(base + ["n_failed", c.n_failed])
            rows.append(base + ["min_size_mean", c.min_size_mean])
            rows.append(base + ["min_size_median", c.min_size_median])
            rows.append(base + [f"prob_{self.k}_all", c.prob_all])
            for i in sorted(c.prob_feature):
                rows.append(base + [f"prob_{self.k}_x{i}", c.prob_feature[i]])
        return rows


def min_size(ranking, truth) -> int:
    """Smallest prefix of the ranking containing every true feature."""
    truth = set(truth)
    if not truth:
        raise EmptyTruthError("truth must be nonempty")
    ranking = list(ranking)
    if not truth <= set(ranking):
        raise FeatureOutOfRangeError(f"truth {sorted(truth)} not contained in ranking")
    positions = {f: i + 1 for i, f in enumerate(ranking)}
    return max(positions[f] for f in truth)


def _common_truth(records) -> frozenset[int]:
    truths = {r.truth for r in records}
    if len(truths) != 1:
        raise InconsistentTruthError(f"records carry {len(truths)} distinct truth sets")
    return next(iter(truths))


def prob_k_all(records, k: int) -> float:
    """Fraction of records whose top-k ranking covers the whole truth set."""
    records = list(records)
    truth = _common_truth(records)
    if k < len(truth):
        raise KTooSmallError(f"k={k} is smaller than the truth set ({len(truth)})")
    hits = sum(1 for r in records if truth <= set(r.ranking[:k]))
    return hits / len(records)


def prob_k_i(records, k: int, feature: int) -> float:
    """Fraction of records whose top-k ranking contains the given feature."""
    records = list(records)
    p = len(records[0].ranking)
    if not 1 <= feature <= p:
        raise FeatureOutOfRangeError(f"feature {feature} outside 1..{p}")
    hits = sum(1 for r in records if feature in r.ranking[:k])
    return hits / len(records)


def make_default_methods(config: PathConfig, include=("lassonet", "lasso", "cox")):
    """Ranking callables keyed by method name, sharing one hyperparameter set.

    Every method standardizes the covariates before fitting. The network
    architecture is re-sized to the dataset's dimension on each call.
    """

    def _net_config(p: int) -> PathConfig:
        arch = config.architecture
        return replace(config, architecture=Architecture(
            input_dim=p, hidden_dims=arch.hidden_dims, dropout_rate=arch.dropout_rate,
        ))

    def lassonet(dataset):
        std, _ = standardize(dataset)
        return train_path(std, _net_config(dataset.p)).ranking

    def lasso(dataset):
        std, _ = standardize(dataset)
        return fit_cox_lasso_path(std, _net_config(dataset.p)).ranking

    def cox(dataset):
        std, _ = standardize(dataset)
        return rank_by_pvalue(fit_cox_classical(std))

    available = {"lassonet": lassonet, "lasso": lasso, "cox": cox}
    unknown = set(include) - set(available)
    if unknown:
        raise KeyError(f"unknown methods: {sorted(unknown)}")
    return {name: available[name] for name in include}


def run_benchmark(scenarios, methods, replications: int, base_seed: int,
                  k: int = 3) -> BenchmarkTable:
    """Replicate each scenario and aggregate the three metrics per method."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    cells = []
    for scenario in scenarios:
        records: dict[str, list[ReplicationRecord]] = {m: [] for m in methods}
        failures: dict[str, int] = {m: 0 for m in methods}
        for r in range(replications):
            scen_r = replace(scenario, seed=base_seed + r)
            try:
                gd = generate(scen_r)
            except CoxLassoNetError:
                for m in methods:
                    failures[m] += 1
                continue
            for name, fn in methods.items():
                try:
                    ranking = tuple(fn(gd.dataset))
                except (CoxLassoNetError, np.linalg.LinAlgError):
                    failures[name] += 1
                    continue
                records[name].append(ReplicationRecord(
                    method=name, scenario=scen_r,
                    ranking=ranking, truth=gd.true_features,
                ))
        for name in methods:
            recs = records[name]
            if recs:
                sizes = [min_size(r.ranking, r.truth) for r in recs]
                p = len(recs[0].ranking)
                cell = BenchmarkCell(
                    method=name,
                    scenario=scenario,
                    n_completed=len(recs),
                    n_failed=failures[name],
                    min_size_mean=float(np.mean(sizes)),
                    min_size_median=float(statistics.median(sizes)),
                    prob_all=prob_k_all(recs, k),
                    prob_feature={i: prob_k_i(recs, k, i) for i in range(1, p + 1)},
                )
            else:
                cell = BenchmarkCell(
                    method=name, scenario=scenario,
                    n_completed=0, n_failed=failures[name],
                    min_size_mean=float("nan"), min_size_median=float("nan"),
                    prob_all=float("nan"), prob_feature={},
                )
            cells.append(cell)
    return BenchmarkTable(
        cells=tuple(cells), k=k, replications=replications, base_seed=base_seed,
    )
