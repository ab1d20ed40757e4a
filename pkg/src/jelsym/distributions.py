"""Study distributions: normal, multivariate t, Laplace, logistic, mixtures.

Every spec round-trips through plain dictionaries (``to_dict`` /
:func:`spec_from_dict`) so it can live in a study configuration file.
"""

from dataclasses import dataclass, field

import numpy as np

from ._rng import as_generator
from ._validation import check_vector
from .exceptions import ConfigError, InputError


class DecompositionError(InputError):
    """Covariance matrix is not positive definite."""


@dataclass(frozen=True)
class CovSpec:
    """Identity, compound symmetry (unit diagonal, constant ``rho``), or a scaled base."""

    kind: str
    d: int
    rho: float = None
    base: "CovSpec" = None
    c: float = None

    @classmethod
    def identity(cls, d):
        return cls("identity", int(d))

    @classmethod
    def compound(cls, d, rho):
        return cls("compound", int(d), rho=float(rho))

    @classmethod
    def scaled(cls, base, c):
        c = float(c)
        if not c > 0:
            raise ConfigError(f"scale factor must be positive, got {c}")
        return cls("scaled", base.d, base=base, c=c)

    def matrix(self):
        if self.d < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.d}")
        if self.kind == "identity":
            return np.eye(self.d)
        if self.kind == "compound":
            m = np.full((self.d, self.d), self.rho)
            np.fill_diagonal(m, 1.0)
            return m
        if self.kind == "scaled":
            return self.c * self.base.matrix()
        raise ConfigError(f"unknown covariance kind {self.kind!r}")

    def to_dict(self):
        out = {"kind": self.kind, "d": self.d}
        if self.kind == "compound":
            out["rho"] = self.rho
        elif self.kind == "scaled":
            out["base"] = self.base.to_dict()
            out["c"] = self.c
        return out

    @classmethod
    def from_dict(cls, data, d=None):
        kind = str(data.get("kind", "identity")).lower()
        dim = int(data.get("d", d if d is not None else 0))
        if kind == "identity":
            return cls.identity(dim)
        if kind == "compound":
            return cls.compound(dim, data["rho"])
        if kind == "scaled":
            return cls.scaled(cls.from_dict(data["base"], d=dim), data["c"])
        raise ConfigError(f"unknown covariance kind {kind!r}")


def cholesky(cov):
    """Lower-triangular ``L`` with ``L @ L.T == cov.matrix()``."""
    if cov.kind == "compound" and cov.d > 1:
        lo = -1.0 / (cov.d - 1)
        if not lo < cov.rho < 1.0:
            raise DecompositionError(
                f"compound rho={cov.rho} outside ({lo}, 1) for d={cov.d}"
            )
    try:
        return np.linalg.cholesky(cov.matrix())
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc


@dataclass(frozen=True)
class Normal:
    mu: tuple
    cov: CovSpec

    @property
    def d(self):
        return self.cov.d

    def sample(self, n, rng):
        L = cholesky(self.cov)
        mu = check_vector(self.mu, self.d, "mu")
        z = rng.standard_normal((n, self.d))
        return z @ L.T + mu

    def is_centrally_symmetric(self):
        return not np.any(np.asarray(self.mu, dtype=float))

    def to_dict(self):
        return {"kind": "normal", "mu": list(map(float, self.mu)), "cov": self.cov.to_dict()}


@dataclass(frozen=True)
class MultivariateT:
    """Elliptical t: ``mu + N(0, cov) / sqrt(chi2_df / df)`` with one divisor per row."""

    mu: tuple
    cov: CovSpec
    df: float = 5.0

    @property
    def d(self):
        return self.cov.d

    def sample(self, n, rng):
        L = cholesky(self.cov)
        mu = check_vector(self.mu, self.d, "mu")
        z = rng.standard_normal((n, self.d)) @ L.T
        w = rng.chisquare(self.df, size=n)
        return z / np.sqrt(w / self.df)[:, None] + mu

    def is_centrally_symmetric(self):
        return not np.any(np.asarray(self.mu, dtype=float))

    def to_dict(self):
        return {"kind": "t", "df": self.df, "mu": list(map(float, self.mu)),
                "cov": self.cov.to_dict()}


@dataclass(frozen=True)
class Laplace:
    loc: float = 0.0
    scale: float = 1.0
    d = 1

    def sample(self, n, rng):
        u = rng.uniform(-0.5, 0.5, size=n)
        x = self.loc - self.scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))
        return x.reshape(-1, 1)

    def is_centrally_symmetric(self):
        return self.loc == 0.0

    def to_dict(self):
        return {"kind": "laplace", "loc": self.loc, "scale": self.scale}


@dataclass(frozen=True)
class Logistic:
    loc: float = 0.0
    scale: float = 1.0
    d = 1

    def sample(self, n, rng):
        # open interval keeps the logit finite
        u = rng.uniform(size=n)
        u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
        x = self.loc + self.scale * (np.log(u) - np.log1p(-u))
        return x.reshape(-1, 1)

    def is_centrally_symmetric(self):
        return self.loc == 0.0

    def to_dict(self):
        return {"kind": "logistic", "loc": self.loc, "scale": self.scale}


@dataclass(frozen=True)
class Mixture:
    weights: tuple
    components: tuple = field(default=())

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != len(self.components) or w.size == 0:
            raise ConfigError("mixture needs one weight per component")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ConfigError(f"mixture weights must be positive and sum to 1, got {w}")
        dims = {c.d for c in self.components}
        if len(dims) != 1:
            raise ConfigError(f"mixture components disagree on dimension: {sorted(dims)}")

    @property
    def d(self):
        return self.components[0].d

    def sample(self, n, rng):
        labels = rng.choice(len(self.components), size=n, p=np.asarray(self.weights))
        out = np.empty((n, self.d))
        for k, comp in enumerate(self.components):
            idx = np.flatnonzero(labels == k)
            if idx.size:
                out[idx] = comp.sample(idx.size, rng)
        return out

    def is_centrally_symmetric(self):
        return all(c.is_centrally_symmetric() for c in self.components)

    def to_dict(self):
        return {"kind": "mixture", "weights": list(map(float, self.weights)),
                "components": [c.to_dict() for c in self.components]}


def spec_from_dict(data):
    """Inverse of ``to_dict`` for every distribution spec."""
    kind = str(data.get("kind", "")).lower()
    if kind in ("normal", "t", "t5"):
        cov_data = data.get("cov", {"kind": "identity"})
        d = data.get("d", len(data["mu"]) if "mu" in data else cov_data.get("d"))
        if d is None:
            raise ConfigError("normal/t spec needs mu or d")
        cov = CovSpec.from_dict(cov_data, d=int(d))
        mu = tuple(float(x) for x in data.get("mu", [0.0] * cov.d))
        if len(mu) != cov.d:
            raise ConfigError(f"mu has length {len(mu)} but covariance is {cov.d}x{cov.d}")
        if kind == "normal":
            return Normal(mu, cov)
        return MultivariateT(mu, cov, float(data.get("df", 5.0)))
    if kind == "laplace":
        return Laplace(float(data.get("loc", 0.0)), float(data.get("scale", 1.0)))
    if kind == "logistic":
        return Logistic(float(data.get("loc", 0.0)), float(data.get("scale", 1.0)))
    if kind == "mixture":
        comps = tuple(spec_from_dict(c) for c in data["components"])
        return Mixture(tuple(float(w) for w in data["weights"]), comps)
    raise ConfigError(f"unknown distribution kind {kind!r}")


def draw_sample(spec, n, rng):
    """``n`` i.i.d. rows from ``spec`` as an ``(n, d)`` array.

    ``rng`` may be an :class:`RngStream`, a ``numpy.random.Generator`` or an
    integer seed.
    """
    n = int(n)
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    return np.ascontiguousarray(spec.sample(n, as_generator(rng)), dtype=float)
