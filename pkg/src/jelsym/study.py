"""Monte Carlo size/power studies, null calibration and the U1/U2 correlation check.

Replication ``r`` draws its first part from stream ``(master_seed, 2r)``
and its second part from ``(master_seed, 2r + 1)``. Outcomes therefore do
not depend on the replication count or on how work is split across
processes.
"""

import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._rng import RngStream, derive_seed
from .chi2 import chi2_sf
from .distributions import draw_sample, spec_from_dict
from .energy import DEFAULT_REPLICATES, permutation_two_sample
from .exceptions import ConfigError, ConvergenceError, DegenerateDataError
from .symmetry import OutcomeFlag, two_part_test
from .ustat import KernelMode, u_statistic

METHODS = ("JEL", "ET")
MIN_REPLICATIONS = 100
CALIBRATION_LEVELS = (0.90, 0.95, 0.99)


class CalibrationWarning(UserWarning):
    """Null calibration requested on a distribution that is not symmetric."""


@dataclass(frozen=True)
class StudyConfig:
    distribution: object
    n1: int
    n2: int
    replications: int = 2000
    alpha: float = 0.05
    methods: tuple = ("JEL",)
    master_seed: int = 0
    et_replicates: int = DEFAULT_REPLICATES
    d: int = None
    workers: int = 1

    def __post_init__(self):
        d = self.distribution.d if self.d is None else int(self.d)
        if d != self.distribution.d:
            raise ConfigError(f"d={d} but the distribution has dimension {self.distribution.d}")
        object.__setattr__(self, "d", d)
        methods = tuple(m.upper() for m in ([self.methods] if isinstance(self.methods, str)
                                            else self.methods))
        if not methods or any(m not in METHODS for m in methods):
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}, got {methods}")
        object.__setattr__(self, "methods", methods)
        if int(self.replications) < MIN_REPLICATIONS:
            raise ConfigError(f"replications must be >= {MIN_REPLICATIONS}, got {self.replications}")
        if min(int(self.n1), int(self.n2)) < 3:
            raise ConfigError("n1 and n2 must both be >= 3")
        if not 0.0 < float(self.alpha) < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError("master_seed must be a 64-bit unsigned integer")
        if "ET" in methods and int(self.et_replicates) < 19:
            raise ConfigError("et_replicates must be >= 19")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")

    def with_(self, **changes):
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        data.update(changes)
        return StudyConfig(**data)

    def to_dict(self):
        return {
            "distribution": self.distribution.to_dict(),
            "d": self.d,
            "n1": int(self.n1),
            "n2": int(self.n2),
            "replications": int(self.replications),
            "alpha": float(self.alpha),
            "methods": list(self.methods),
            "master_seed": int(self.master_seed),
            "et_replicates": int(self.et_replicates),
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "distribution" not in data:
            raise ConfigError("configuration needs a 'distribution' table")
        try:
            data["distribution"] = spec_from_dict(data["distribution"])
            return cls(**data)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc


def load_config(path):
    """Read a JSON study configuration."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return StudyConfig.from_dict(data)


@dataclass
class MethodSummary:
    rejections: int = 0
    non_overlap_count: int = 0
    convergence_failure_count: int = 0
    degenerate_count: int = 0
    statistics: list = field(default_factory=list)

    def rate(self, replications):
        return self.rejections / replications


@dataclass
class StudyReport:
    config: StudyConfig
    methods: dict
    wall_time: float = 0.0

    @property
    def replications(self):
        return int(self.config.replications)

    def rejection_rate(self, method="JEL"):
        return self.methods[method].rate(self.replications)

    def mc_standard_error(self, method="JEL"):
        r = self.rejection_rate(method)
        return math.sqrt(r * (1.0 - r) / self.replications)

    def to_dict(self, include_statistics=False):
        """Report fields; ``wall_time`` is left out so files are reproducible."""
        out = {"config": self.config.to_dict(), "methods": {}}
        for name, summ in self.methods.items():
            entry = {
                "rejection_rate": self.rejection_rate(name),
                "mc_standard_error": self.mc_standard_error(name),
                "rejections": summ.rejections,
                "non_overlap_count": summ.non_overlap_count,
                "convergence_failure_count": summ.convergence_failure_count,
                "degenerate_count": summ.degenerate_count,
            }
            if include_statistics:
                entry["statistics"] = [s if math.isfinite(s) else None for s in summ.statistics]
            out["methods"][name] = entry
        out["notes"] = {
            "et_arrangement": "part_x vs -part_y, V-statistic energy distance",
            "t_scaling": "covariance scaled before the elliptical t construction",
        }
        return out

    def format_table(self):
        lines = [f"{'method':<8}{'rate':>8}{'mc_se':>9}{'non_overlap':>13}"
                 f"{'conv_fail':>11}{'degenerate':>12}"]
        for name, s in self.methods.items():
            lines.append(f"{name:<8}{self.rejection_rate(name):>8.4f}"
                         f"{self.mc_standard_error(name):>9.4f}{s.non_overlap_count:>13d}"
                         f"{s.convergence_failure_count:>11d}{s.degenerate_count:>12d}")
        return "\n".join(lines)


def draw_parts(config, r):
    x = draw_sample(config.distribution, config.n1, RngStream(config.master_seed, 2 * r))
    y = draw_sample(config.distribution, config.n2, RngStream(config.master_seed, 2 * r + 1))
    return x, y


def replicate(config, r):
    """Outcome of replication ``r``: ``{method: (reject, statistic, flag)}``."""
    x, y = draw_parts(config, r)
    out = {}
    for method in config.methods:
        if method == "JEL":
            try:
                res = two_part_test(x, y, config.alpha)
                out[method] = (res.reject, res.statistic, res.outcome_flag.value)
            except DegenerateDataError:
                out[method] = (False, math.nan, OutcomeFlag.DEGENERATE.value)
            except ConvergenceError:
                out[method] = (False, math.nan, "CONVERGENCE_FAILURE")
        else:
            seed = derive_seed(config.master_seed, 2 * r, 1)
            res = permutation_two_sample(x, -y, config.et_replicates, seed)
            out[method] = (res.p_value <= config.alpha, res.statistic, OutcomeFlag.OK.value)
    return out


def _replicate_range(args):
    config, start, stop = args
    return [replicate(config, r) for r in range(start, stop)]


def iter_outcomes(config):
    """Per-replication outcomes in replication order."""
    reps, workers = int(config.replications), int(config.workers)
    if workers == 1:
        for r in range(reps):
            yield replicate(config, r)
        return
    chunk = max(1, math.ceil(reps / (4 * workers)))
    jobs = [(config, s, min(s + chunk, reps)) for s in range(0, reps, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for block in pool.map(_replicate_range, jobs):
            yield from block


def run_study(config):
    """Rejection rates of each configured method over all replications."""
    t0 = time.perf_counter()
    summaries = {m: MethodSummary() for m in config.methods}
    for outcome in iter_outcomes(config):
        for method, (reject, stat, flag) in outcome.items():
            s = summaries[method]
            s.rejections += bool(reject)
            s.statistics.append(float(stat))
            if flag == OutcomeFlag.NON_OVERLAP.value:
                s.non_overlap_count += 1
            elif flag == OutcomeFlag.DEGENERATE.value:
                s.degenerate_count += 1
            elif flag == "CONVERGENCE_FAILURE":
                s.convergence_failure_count += 1
    return StudyReport(config=config, methods=summaries,
                       wall_time=time.perf_counter() - t0)


@dataclass
class CalibrationReport:
    ks_distance: float
    quantiles: dict
    statistics: np.ndarray
    replications: int
    failures: int

    def to_dict(self):
        return {"ks_distance": self.ks_distance,
                "quantiles": {str(k): v for k, v in self.quantiles.items()},
                "replications": self.replications,
                "failures": self.failures}


def ks_distance_chi2(stats):
    """Kolmogorov-Smirnov distance between ``stats`` and the chi2_1 CDF.

    Infinite statistics (disjoint supports) enter with CDF value 1.
    """
    x = np.sort(np.asarray(stats, dtype=float))
    n = x.size
    cdf = np.array([1.0 - chi2_sf(v) for v in x])
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def null_calibration(config):
    """Compare the JEL statistic under a symmetric distribution with chi2_1."""
    if not config.distribution.is_centrally_symmetric():
        warnings.warn("distribution is not symmetric about the origin; "
                      "calibration against chi2_1 is meaningless", CalibrationWarning,
                      stacklevel=2)
    report = run_study(config.with_(methods=("JEL",)))
    summ = report.methods["JEL"]
    stats = np.asarray(summ.statistics)
    finite = stats[~np.isnan(stats)]
    return CalibrationReport(
        ks_distance=ks_distance_chi2(finite),
        quantiles={q: float(np.quantile(finite, q)) for q in CALIBRATION_LEVELS},
        statistics=finite,
        replications=report.replications,
        failures=summ.convergence_failure_count + summ.degenerate_count,
    )


@dataclass(frozen=True)
class CorrelationReport:
    correlation: float
    standard_error: float
    replications: int


def covariance_check(config):
    """Sample correlation of ``(U1, U2)`` across replications."""
    if not config.distribution.is_centrally_symmetric():
        warnings.warn("covariance check is meant for symmetric distributions",
                      CalibrationWarning, stacklevel=2)
    reps = int(config.replications)
    u = np.empty((reps, 2))
    for r in range(reps):
        x, y = draw_parts(config, r)
        u[r] = u_statistic(x, KernelMode.PLUS), u_statistic(y, KernelMode.MINUS)
    corr = float(np.corrcoef(u[:, 0], u[:, 1])[0, 1])
    se = math.sqrt(max(1.0 - corr * corr, 0.0) / (reps - 2))
    return CorrelationReport(correlation=corr, standard_error=se, replications=reps)
