"""Jackknife empirical likelihood test of diagonal symmetry, ``X =d -X``.

The sample is split in two. The first part estimates ``E||X + X'||`` with
the ``PLUS`` kernel, the second ``E||X - X'||`` with the ``MINUS`` kernel;
under the null both pseudo-value populations share a mean, which is what
the empirical likelihood ratio tests.
"""

import enum
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import jel
from ._validation import check_alpha, check_sample, check_vector
from .chi2 import chi2_quantile, chi2_sf
from .exceptions import InputError, InsufficientDataError, NonOverlapError
from .ustat import KernelMode, pseudo_values, variance_estimate

MIN_PART = 3


class OutcomeFlag(str, enum.Enum):
    OK = "OK"
    NON_OVERLAP = "NON_OVERLAP"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class SplitPolicy:
    """How observed data is cut into the two kernel-specific parts.

    ``first_half`` keeps row order; ``random`` applies a seeded permutation
    first.
    """

    kind: str = "first_half"
    seed: int = None

    def __post_init__(self):
        if self.kind not in ("first_half", "random"):
            raise InputError(f"unknown split policy {self.kind!r}")
        if self.kind == "random":
            if self.seed is None or not 0 <= int(self.seed) < 2**64:
                raise InputError("random split needs a 64-bit unsigned seed")

    @classmethod
    def parse(cls, text):
        """Parse ``"first"`` or ``"random:SEED"``."""
        if isinstance(text, cls):
            return text
        text = str(text).strip().lower()
        if text in ("first", "first_half"):
            return cls("first_half")
        if text.startswith("random:"):
            try:
                return cls("random", int(text.split(":", 1)[1]))
            except ValueError:
                raise InputError(f"bad random split seed in {text!r}") from None
        raise InputError(f"split must be 'first' or 'random:SEED', got {text!r}")

    def __str__(self):
        return "first" if self.kind == "first_half" else f"random:{self.seed}"


@dataclass(frozen=True)
class TestConfig:
    """Settings of a single symmetry test.

    ``center=None`` means the origin.
    """

    __test__ = False  # not a pytest class

    alpha: float = 0.05
    center: tuple = None
    split_policy: SplitPolicy = field(default_factory=SplitPolicy)
    n1_override: int = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "split_policy", SplitPolicy.parse(self.split_policy))
        if self.center is not None:
            object.__setattr__(self, "center", tuple(float(c) for c in np.ravel(self.center)))


@dataclass(frozen=True)
class PartitionedSample:
    part_x: np.ndarray
    part_y: np.ndarray

    @property
    def n1(self):
        return self.part_x.shape[0]

    @property
    def n2(self):
        return self.part_y.shape[0]

    @property
    def alpha1(self):
        return self.n1 / (self.n1 + self.n2)

    @property
    def alpha2(self):
        return self.n2 / (self.n1 + self.n2)


@dataclass(frozen=True)
class TestResult:
    __test__ = False

    statistic: float
    p_value: float
    reject: bool
    theta_hat: float
    lambda1: float
    lambda2: float
    n1: int
    n2: int
    u1: float
    u2: float
    s1: float
    s2: float
    outcome_flag: OutcomeFlag
    alpha: float
    split: str = "first"

    def to_dict(self):
        """JSON-ready fields; non-finite numbers become ``None``."""
        out = asdict(self)
        out["outcome_flag"] = self.outcome_flag.value
        for key, val in out.items():
            if isinstance(val, float) and not np.isfinite(val):
                out[key] = None
        return out


def center_sample(X, mu):
    """Rows of ``X`` minus ``mu``."""
    X = check_sample(X)
    mu = check_vector(mu, X.shape[1], "center")
    return X - mu


def partition(X, policy="first", n1=None):
    """Split the rows of ``X`` into the ``PLUS`` part and the ``MINUS`` part.

    ``n1`` defaults to ``floor(n / 2)``; both parts need at least 3 rows.
    """
    X = check_sample(X)
    policy = SplitPolicy.parse(policy)
    n = X.shape[0]
    if n < 2 * MIN_PART:
        raise InsufficientDataError(f"need at least {2 * MIN_PART} observations, got {n}")
    n1 = n // 2 if n1 is None else int(n1)
    if not MIN_PART <= n1 <= n - MIN_PART:
        raise InsufficientDataError(f"n1={n1} must lie in [{MIN_PART}, {n - MIN_PART}]")
    if policy.kind == "random":
        order = np.random.default_rng(policy.seed).permutation(n)
        X = X[order]
    return PartitionedSample(part_x=X[:n1].copy(), part_y=X[n1:].copy())


def two_part_test(part_x, part_y, alpha=0.05, split="first"):
    """JEL test on two independent parts (``PLUS`` on ``part_x``)."""
    alpha = check_alpha(alpha)
    part_x = check_sample(part_x, name="part_x")
    part_y = check_sample(part_y, name="part_y")
    if part_x.shape[1] != part_y.shape[1]:
        raise InputError("parts disagree on dimension")
    pv1 = pseudo_values(part_x, KernelMode.PLUS)
    pv2 = pseudo_values(part_y, KernelMode.MINUS)
    common = dict(n1=pv1.m, n2=pv2.m, u1=pv1.u_stat, u2=pv2.u_stat,
                  alpha=alpha, split=str(split))
    try:
        sol = jel.solve_system(pv1, pv2)
    except NonOverlapError:
        return TestResult(statistic=float("inf"), p_value=0.0, reject=True,
                          theta_hat=float("nan"), lambda1=float("nan"),
                          lambda2=float("nan"), s1=float("nan"), s2=float("nan"),
                          outcome_flag=OutcomeFlag.NON_OVERLAP, **common)
    stat = sol.llr
    return TestResult(
        statistic=stat,
        p_value=chi2_sf(stat),
        reject=bool(stat > chi2_quantile(1.0 - alpha)),
        theta_hat=sol.theta,
        lambda1=sol.lambda1,
        lambda2=sol.lambda2,
        s1=variance_estimate(pv1, sol.theta).s_j,
        s2=variance_estimate(pv2, sol.theta).s_j,
        outcome_flag=OutcomeFlag.OK,
        **common,
    )


def jel_symmetry_test(X, config=None):
    """Test ``H0: X - center =d center - X``.

    Parameters
    ----------
    X : array-like, shape (n, d)
    config : TestConfig, optional

    Returns
    -------
    TestResult
        Disjoint pseudo-value ranges give ``outcome_flag=NON_OVERLAP``,
        an infinite statistic and ``p_value=0``.
    """
    config = TestConfig() if config is None else config
    X = check_sample(X)
    if config.center is not None:
        X = center_sample(X, config.center)
    parts = partition(X, config.split_policy, config.n1_override)
    return two_part_test(parts.part_x, parts.part_y, config.alpha, config.split_policy)


class DiagonalSymmetryTest(BaseEstimator):
    """Estimator wrapper around :func:`jel_symmetry_test`.

    Parameters
    ----------
    alpha : float, default=0.05
    center : array-like of shape (d,), default=None
        Hypothesised center of symmetry; ``None`` is the origin.
    split : str, default="first"
        ``"first"`` or ``"random:SEED"``.
    n1 : int, default=None
        Size of the ``PLUS`` part; ``floor(n / 2)`` when ``None``.

    Attributes
    ----------
    result_ : TestResult
    statistic_, pvalue_, reject_ : shortcuts into ``result_``
    n_features_in_ : int
    """

    def __init__(self, alpha=0.05, center=None, split="first", n1=None):
        self.alpha = alpha
        self.center = center
        self.split = split
        self.n1 = n1

    def fit(self, X, y=None):
        X = check_sample(X)
        config = TestConfig(alpha=self.alpha, center=self.center,
                            split_policy=self.split, n1_override=self.n1)
        self.result_ = jel_symmetry_test(X, config)
        self.statistic_ = self.result_.statistic
        self.pvalue_ = self.result_.p_value
        self.reject_ = self.result_.reject
        self.n_features_in_ = X.shape[1]
        return self

    def summary(self):
        check_is_fitted(self, "result_")
        r = self.result_
        return (f"JEL diagonal symmetry test: statistic={r.statistic:.6g} "
                f"p-value={r.p_value:.6g} reject={r.reject} "
                f"(alpha={r.alpha}, n1={r.n1}, n2={r.n2}, {r.outcome_flag.value})")
