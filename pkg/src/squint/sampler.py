"""Seeded Monte Carlo simulation of binned homodyne runs.

A "run" draws N quadrature values from the Gaussian outcome law and
bins them into occurrence counts (N-, N0, N+). A "replica set" repeats
the run M times at the same hidden true phase so that estimator spread
and bias can be measured.

Reproducibility contract: replica i draws from
numpy.random.Generator(PCG64) seeded with SeedSequence(master_seed)
.spawn(M)[i], so the full set and every individual replica are
deterministic functions of (master_seed, i) and replicas are mutually
decorrelated. Ties at a bin boundary (|p| == a) land in the central
bin, matching its closed integration interval; for continuous draws
this is a measure-zero event.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binning import BinningScheme
from .errors import ConfigError
from .model import ModelParams, mean_signal, noise_ratio


@dataclass(frozen=True)
class CountRecord:
    """Occurrence counts of one run of n_total shots at theta_true.

    theta_true is carried for evaluation only; the estimators never
    read it. Counts are integers for real runs; fractional "expected
    counts" N * P_k are accepted for noiseless consistency checks, so
    the sum constraint tolerates float rounding.
    """

    n_minus: float
    n_zero: float
    n_plus: float
    n_total: float
    theta_true: float

    def __post_init__(self) -> None:
        if min(self.n_minus, self.n_zero, self.n_plus) < 0:
            raise ConfigError("outcome counts must be non-negative")
        total = self.n_minus + self.n_zero + self.n_plus
        if not math.isclose(total, self.n_total, rel_tol=1e-12, abs_tol=1e-9):
            raise ConfigError("outcome counts must sum to n_total")

    def as_dict(self) -> dict[str, float]:
        return {"-": self.n_minus, "0": self.n_zero, "+": self.n_plus}

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.n_total for k, v in self.as_dict().items()}


@dataclass(frozen=True)
class ReplicaSet:
    """M independent CountRecords sharing (theta_true, n_shots, seed)."""

    records: tuple[CountRecord, ...]
    master_seed: int
    theta_true: float
    n_shots: int

    def __post_init__(self) -> None:
        for rec in self.records:
            if rec.n_total != self.n_shots or rec.theta_true != self.theta_true:
                raise ConfigError("all replicas must share n_shots and theta_true")

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class OutcomeStats:
    """Replica-averaged occurrence frequencies and their spread."""

    mean_freq: dict[str, float]
    std_freq: dict[str, float] | None
    m_replicas: int
    n_shots: int


def sample_quadrature(
    params: ModelParams, theta: float, rng: np.random.Generator, size: int | None = None
):
    """Draw homodyne quadrature values at phase theta.

    The caller owns ``rng`` exclusively; this function advances it.
    """
    mean = mean_signal(params, theta)
    sigma = np.sqrt(noise_ratio(params, theta) / 4.0)
    return rng.normal(mean, sigma, size)


def run_counts(
    params: ModelParams,
    scheme: BinningScheme,
    theta_true: float,
    n_shots: int,
    rng: np.random.Generator,
) -> CountRecord:
    """Simulate one run of n_shots binned measurements."""
    if n_shots < 1:
        raise ConfigError(f"n_shots must be >= 1, got {n_shots}")
    p = sample_quadrature(params, theta_true, rng, n_shots)
    n_minus = int(np.count_nonzero(p < -scheme.a))
    n_plus = int(np.count_nonzero(p > scheme.a))
    return CountRecord(
        n_minus=n_minus,
        n_zero=n_shots - n_minus - n_plus,
        n_plus=n_plus,
        n_total=n_shots,
        theta_true=theta_true,
    )


def run_replicas(
    params: ModelParams,
    scheme: BinningScheme,
    theta_true: float,
    n_shots: int,
    m_replicas: int,
    master_seed: int,
) -> ReplicaSet:
    """Simulate M independent runs from decorrelated substreams."""
    if m_replicas < 1:
        raise ConfigError(f"m_replicas must be >= 1, got {m_replicas}")
    children = np.random.SeedSequence(master_seed).spawn(m_replicas)
    records = tuple(
        run_counts(params, scheme, theta_true, n_shots, np.random.default_rng(child))
        for child in children
    )
    return ReplicaSet(records, master_seed, theta_true, n_shots)


def replica_rng(master_seed: int, index: int, m_replicas: int) -> np.random.Generator:
    """Generator for one replica of a set, without building the others."""
    if not (0 <= index < m_replicas):
        raise ConfigError(f"replica index {index} outside [0, {m_replicas})")
    child = np.random.SeedSequence(master_seed).spawn(m_replicas)[index]
    return np.random.default_rng(child)


def empirical_stats(replicas: ReplicaSet) -> OutcomeStats:
    """Per-outcome mean frequency and sample standard deviation.

    The standard deviation needs at least two replicas and is None
    otherwise.
    """
    freq = {
        k: np.array([rec.frequencies()[k] for rec in replicas.records])
        for k in ("-", "0", "+")
    }
    mean = {k: float(v.mean()) for k, v in freq.items()}
    if len(replicas) >= 2:
        std = {k: float(v.std(ddof=1)) for k, v in freq.items()}
    else:
        std = None
    return OutcomeStats(mean, std, len(replicas), replicas.n_shots)
