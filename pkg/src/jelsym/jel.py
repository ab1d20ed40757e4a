"""Two-sample jackknife empirical likelihood with a common mean.

Given pseudo-values ``v1`` (size ``n1``) and ``v2`` (size ``n2``), the
constrained problem asks for weights ``p`` and ``q`` with
``sum p_i (v1_i - theta) = 0`` and ``sum q_j (v2_j - theta) = 0``. The
Lagrange system in ``(lambda1, lambda2, theta)`` is solved by nested
scalar root finding:

* inner: for fixed ``theta``, ``lambda_k(theta)`` is the unique root of the
  strictly decreasing function ``sum (v - theta) / (1 + lambda (v - theta))``;
* outer: ``theta`` is the root of ``g(theta) = n1 lambda1 + n2 lambda2``.

Once both inner equations hold, ``sum 1 / (1 + lambda_k (v - theta)) = n_k``,
so the third equation of the system is exactly ``-(n1 lambda1 + n2 lambda2)``.
Each ``lambda_k(theta)`` is decreasing in ``theta``, hence ``g`` is strictly
decreasing and its root on the bracket is unique.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._validation import as_values
from .exceptions import (
    ConvergenceError,
    DegenerateDataError,
    InfeasibilityError,
    InfeasibleThetaError,
    NonOverlapError,
)

INNER_XTOL = 1e-12
OUTER_XTOL = 1e-10
RESIDUAL_RTOL = 1e-8
MAXITER_INNER = 200
MAXITER_OUTER = 200
BRACKET_SHRINK = 1e-9
# brentq rejects rtol below 4 * machine epsilon
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class FeasibleInterval:
    """Bracket for the common mean ``theta``.

    ``lo_on_support`` / ``hi_on_support`` mark endpoints that coincide with
    the edge of a pseudo-value support, where a multiplier diverges.
    """

    lo: float
    hi: float
    lo_on_support: bool = False
    hi_on_support: bool = False

    @property
    def is_point(self):
        return self.lo == self.hi


@dataclass(frozen=True)
class WeightVector:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class JelSolution:
    lambda1: float
    lambda2: float
    theta: float
    residuals: tuple
    llr: float
    iterations: int


def _check_nondegenerate(v, name="pseudo-values"):
    if v.size < 2 or np.ptp(v) == 0.0:
        raise DegenerateDataError(f"{name} have zero spread")


def profile_lambda(pv, theta, xtol=INNER_XTOL, maxiter=MAXITER_INNER):
    """Lagrange multiplier of the one-sample EL problem at mean ``theta``.

    Solves ``sum (v_i - theta) / (1 + lam (v_i - theta)) = 0`` for the
    unique ``lam`` keeping every ``1 + lam (v_i - theta)`` positive.

    Raises
    ------
    DegenerateDataError
        All pseudo-values are equal.
    InfeasibleThetaError
        ``theta`` is not strictly between ``min(pv)`` and ``max(pv)``.
    ConvergenceError
        The bracketed iteration did not converge within ``maxiter``.
    """
    v = as_values(pv)
    _check_nondegenerate(v)
    theta = float(theta)
    z = v - theta
    zmin, zmax = z.min(), z.max()
    if not (zmin < 0.0 < zmax):
        raise InfeasibleThetaError(
            f"theta={theta!r} outside the open range ({v.min()!r}, {v.max()!r})"
        )

    def f(lam):
        return np.sum(z / (1.0 + lam * z))

    f0 = f(0.0)
    if f0 == 0.0:
        return 0.0
    n = z.size
    # Every weight is at most 1, i.e. 1 + lam * z_i >= 1/n; f changes sign
    # across these endpoints.
    if f0 > 0.0:
        a, b = 0.0, (1.0 - 1.0 / n) / (-zmin)
    else:
        a, b = (1.0 / n - 1.0) / zmax, 0.0
    try:
        lam, info = brentq(f, a, b, xtol=xtol, rtol=_RTOL, maxiter=maxiter,
                           full_output=True, disp=False)
    except ValueError as exc:
        raise ConvergenceError(f"inner bracket lost: {exc}", theta=theta) from exc
    if not info.converged:
        raise ConvergenceError("inner iteration cap reached", theta=theta,
                               iterations=info.iterations)
    # One Newton step removes most of the remaining bracketing error.
    denom = 1.0 + lam * z
    fl = np.sum(z / denom)
    dfl = -np.sum((z / denom) ** 2)
    if fl != 0.0 and dfl != 0.0:
        cand = lam - fl / dfl
        if np.all(1.0 + cand * z > 0.0) and abs(f(cand)) < abs(fl):
            lam = cand
    return float(lam)


def theta_bracket(pv1, pv2):
    """Interval in which the common mean is searched.

    It is the segment between the two sample means, clipped to the
    intersection of the open pseudo-value ranges.

    Raises
    ------
    NonOverlapError
        The ranges of ``pv1`` and ``pv2`` do not overlap.
    """
    v1, v2 = as_values(pv1), as_values(pv2)
    _check_nondegenerate(v1, "pv1")
    _check_nondegenerate(v2, "pv2")
    s_lo = max(v1.min(), v2.min())
    s_hi = min(v1.max(), v2.max())
    if s_lo >= s_hi:
        raise NonOverlapError(
            f"pseudo-value ranges do not overlap (max of minima {s_lo!r} >= "
            f"min of maxima {s_hi!r})"
        )
    m1, m2 = float(v1.mean()), float(v2.mean())
    lo, hi = max(min(m1, m2), s_lo), min(max(m1, m2), s_hi)
    return FeasibleInterval(
        lo=float(lo),
        hi=float(hi),
        lo_on_support=bool(lo == s_lo),
        hi_on_support=bool(hi == s_hi),
    )


def equation_residuals(pv1, pv2, lambda1, lambda2, theta):
    """Left-hand sides of the three Lagrange equations."""
    v1, v2 = as_values(pv1), as_values(pv2)
    z1, z2 = v1 - theta, v2 - theta
    d1, d2 = 1.0 + lambda1 * z1, 1.0 + lambda2 * z2
    return (
        float(np.sum(z1 / d1)),
        float(np.sum(z2 / d2)),
        float(lambda1 * np.sum(-1.0 / d1) + lambda2 * np.sum(-1.0 / d2)),
    )


def log_likelihood_ratio(pv1, pv2, sol):
    """``2 sum log(1 + lambda1 (v1 - theta)) + 2 sum log(1 + lambda2 (v2 - theta))``.

    ``sol`` is a :class:`JelSolution` or a ``(lambda1, lambda2, theta)``
    triple. Round-off below zero down to ``-1e-12`` is clamped to 0.
    """
    if isinstance(sol, JelSolution):
        lambda1, lambda2, theta = sol.lambda1, sol.lambda2, sol.theta
    else:
        lambda1, lambda2, theta = map(float, sol)
    v1, v2 = as_values(pv1), as_values(pv2)
    a1 = lambda1 * (v1 - theta)
    a2 = lambda2 * (v2 - theta)
    if np.any(a1 <= -1.0) or np.any(a2 <= -1.0):
        raise InfeasibilityError("non-positive argument in log-likelihood ratio")
    llr = 2.0 * (float(np.sum(np.log1p(a1))) + float(np.sum(np.log1p(a2))))
    if llr < 0.0:
        if llr < -1e-12:
            raise InfeasibilityError(f"negative log-likelihood ratio {llr!r}")
        llr = 0.0
    return llr


def weights(pv, lam, theta):
    """Empirical likelihood weights ``1 / (m (1 + lam (v_i - theta)))``."""
    v = as_values(pv)
    denom = 1.0 + float(lam) * (v - float(theta))
    if np.any(denom <= 0.0):
        raise InfeasibilityError("non-positive weight denominator")
    return WeightVector(1.0 / (v.size * denom))


def _dlambda_dtheta(v, lam, theta):
    z = v - theta
    d2 = (1.0 + lam * z) ** 2
    return -np.sum(1.0 / d2) / np.sum(z * z / d2)


def _polish_theta(v1, v2, theta, lambdas, steps=3):
    """Newton steps on ``g`` from the bracketed root.

    The absolute ``theta`` tolerance alone leaves ``g`` residuals that grow
    like ``n / scale**2`` for small-scale pseudo-values.
    """
    n1, n2 = v1.size, v2.size
    lo = max(v1.min(), v2.min())
    hi = min(v1.max(), v2.max())
    l1, l2 = lambdas(theta)
    gval = n1 * l1 + n2 * l2
    for _ in range(steps):
        if gval == 0.0:
            break
        slope = n1 * _dlambda_dtheta(v1, l1, theta) + n2 * _dlambda_dtheta(v2, l2, theta)
        cand = theta - gval / slope
        if not lo < cand < hi or cand == theta:
            break
        c1, c2 = lambdas(cand)
        cval = n1 * c1 + n2 * c2
        if abs(cval) >= abs(gval):
            break
        theta, l1, l2, gval = cand, c1, c2, cval
    return theta


def solve_system(pv1, pv2, inner_xtol=INNER_XTOL, outer_xtol=OUTER_XTOL,
                 maxiter_inner=MAXITER_INNER, maxiter_outer=MAXITER_OUTER):
    """Solve the three Lagrange equations for ``(lambda1, lambda2, theta)``.

    Returns
    -------
    JelSolution

    Raises
    ------
    NonOverlapError
        Disjoint pseudo-value ranges (the likelihood ratio is infinite).
    DegenerateDataError
        Either vector has zero spread.
    ConvergenceError
        Iteration cap reached, bracket lost, or residuals above tolerance.
    """
    v1, v2 = as_values(pv1), as_values(pv2)
    n1, n2 = v1.size, v2.size
    interval = theta_bracket(v1, v2)

    def lambdas(theta):
        return (profile_lambda(v1, theta, inner_xtol, maxiter_inner),
                profile_lambda(v2, theta, inner_xtol, maxiter_inner))

    def g(theta):
        l1, l2 = lambdas(theta)
        return n1 * l1 + n2 * l2

    iterations = 0
    if interval.is_point:
        theta = interval.lo
    else:
        eps = BRACKET_SHRINK * (interval.hi - interval.lo)
        a = interval.lo + eps if interval.lo_on_support else interval.lo
        b = interval.hi - eps if interval.hi_on_support else interval.hi
        ga, gb = g(a), g(b)
        if ga == 0.0:
            theta = a
        elif gb == 0.0:
            theta = b
        elif np.sign(ga) == np.sign(gb):
            raise ConvergenceError("no sign change of g over the theta bracket",
                                   bracket=(a, b), g=(ga, gb))
        else:
            theta, info = brentq(g, a, b, xtol=outer_xtol, rtol=_RTOL,
                                 maxiter=maxiter_outer, full_output=True,
                                 disp=False)
            iterations = info.iterations
            if not info.converged:
                raise ConvergenceError("outer iteration cap reached",
                                       bracket=(a, b), iterations=iterations)

    if not interval.is_point:
        theta = _polish_theta(v1, v2, theta, lambdas)
    lambda1, lambda2 = lambdas(theta)
    residuals = equation_residuals(v1, v2, lambda1, lambda2, theta)
    scale = float(max(np.abs(v1).max(), np.abs(v2).max()))
    if max(abs(r) for r in residuals) > RESIDUAL_RTOL * (1.0 + scale):
        raise ConvergenceError("residuals above tolerance", residuals=residuals,
                               theta=theta, scale=scale)
    llr = log_likelihood_ratio(v1, v2, (lambda1, lambda2, theta))
    return JelSolution(
        lambda1=lambda1,
        lambda2=lambda2,
        theta=float(theta),
        residuals=residuals,
        llr=llr,
        iterations=iterations,
    )
