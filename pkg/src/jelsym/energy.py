"""Energy-distance permutation test used as a baseline.

Symmetry about the origin is recast as equality in distribution between
the first part of the sample and the negated second part.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator

from ._rng import RngStream, _check_u64
from ._validation import check_alpha, check_sample
from .exceptions import ConfigError, InputError
from .symmetry import TestConfig, center_sample, partition

DEFAULT_REPLICATES = 199
MIN_REPLICATES = 19


@dataclass(frozen=True)
class PermutationTestResult:
    statistic: float
    p_value: float
    replicates: int
    seed: int

    def to_dict(self):
        return {"statistic": self.statistic, "p_value": self.p_value,
                "replicates": self.replicates, "seed": self.seed,
                "statistic_kind": "V-statistic"}


def energy_statistic(a, b):
    """Two-sample energy statistic with V-statistic means.

    ``2 mean ||a_i - b_j|| - mean ||a_i - a_k|| - mean ||b_j - b_l||``
    """
    a = check_sample(a, name="a")
    b = check_sample(b, name="b")
    if a.shape[1] != b.shape[1]:
        raise InputError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    return float(2.0 * cdist(a, b).mean() - cdist(a, a).mean() - cdist(b, b).mean())


def _stat_from_labels(D, row_sums, total, in_a):
    """Energy statistic of a labelling; one matrix-vector product."""
    n_a = in_a.sum()
    n_b = in_a.size - n_a
    Da = D @ in_a
    s_aa = in_a @ Da
    s_ab = in_a @ row_sums - s_aa
    s_bb = total - 2.0 * s_ab - s_aa
    return 2.0 * s_ab / (n_a * n_b) - s_aa / (n_a * n_a) - s_bb / (n_b * n_b)


def permutation_two_sample(a, b, replicates=DEFAULT_REPLICATES, seed=0):
    """Permutation test of ``a =d b`` with the energy statistic.

    Replicate ``k`` shuffles the pooled labels with its own stream
    ``(seed, k)``, so the p-value does not depend on evaluation order.
    """
    replicates = int(replicates)
    if replicates < MIN_REPLICATES:
        raise ConfigError(f"need at least {MIN_REPLICATES} permutation replicates")
    seed = _check_u64(seed, "seed")
    a = check_sample(a, name="a")
    b = check_sample(b, name="b")
    if a.shape[1] != b.shape[1]:
        raise InputError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    pooled = np.vstack([a, b])
    D = cdist(pooled, pooled)
    row_sums = D.sum(axis=1)
    total = row_sums.sum()
    n_a, n = a.shape[0], pooled.shape[0]
    labels = np.zeros(n)
    labels[:n_a] = 1.0
    observed = energy_statistic(a, b)
    # ties up to round-off count as exceedances
    threshold = observed - 1e-12 * total / (n * n)
    exceed = 0
    for k in range(replicates):
        perm = RngStream(seed, k).generator().permutation(labels)
        if _stat_from_labels(D, row_sums, total, perm) >= threshold:
            exceed += 1
    return PermutationTestResult(
        statistic=observed,
        p_value=(1 + exceed) / (replicates + 1),
        replicates=replicates,
        seed=seed,
    )


def permutation_symmetry_test(X, config=None, replicates=DEFAULT_REPLICATES, seed=0):
    """Energy permutation test of central symmetry on one sample."""
    config = TestConfig() if config is None else config
    if int(replicates) < MIN_REPLICATES:
        raise ConfigError(f"need at least {MIN_REPLICATES} permutation replicates")
    X = check_sample(X)
    if config.center is not None:
        X = center_sample(X, config.center)
    parts = partition(X, config.split_policy, config.n1_override)
    return permutation_two_sample(parts.part_x, -parts.part_y, replicates, seed)


class EnergySymmetryTest(BaseEstimator):
    """Estimator wrapper around :func:`permutation_symmetry_test`."""

    def __init__(self, alpha=0.05, n_permutations=DEFAULT_REPLICATES, random_state=0,
                 center=None, split="first", n1=None):
        self.alpha = alpha
        self.n_permutations = n_permutations
        self.random_state = random_state
        self.center = center
        self.split = split
        self.n1 = n1

    def fit(self, X, y=None):
        alpha = check_alpha(self.alpha)
        X = check_sample(X)
        config = TestConfig(alpha=alpha, center=self.center, split_policy=self.split,
                            n1_override=self.n1)
        self.result_ = permutation_symmetry_test(X, config, self.n_permutations,
                                                 self.random_state)
        self.statistic_ = self.result_.statistic
        self.pvalue_ = self.result_.p_value
        self.reject_ = bool(self.pvalue_ <= alpha)
        self.n_features_in_ = X.shape[1]
        return self
