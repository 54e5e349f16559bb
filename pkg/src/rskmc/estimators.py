"""Concentration-ratio and concentration estimators for receptor readouts.

Two ratio estimators are provided: the maximum-likelihood estimator over
the full set of bound-time durations, and a counting estimator that only
needs the number of binding events shorter/longer than one time threshold
(method of moments on the interval probabilities).  A single-ligand
concentration estimator from the bound-receptor count completes the set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinetics import LigandPanel, LigandType, ReceptorArray, log_likelihood_ratio

__all__ = [
    "SaturationError",
    "ThresholdScheme",
    "MomWeights",
    "RatioEstimate",
    "ml_ratio_estimate",
    "build_mom_weights",
    "mom_ratio_estimate",
    "mom_estimator_variance",
    "optimize_threshold",
    "csk_concentration_estimate",
    "golden_section_minimize",
]


class SaturationError(ValueError):
    """All receptors bound: the concentration estimate diverges."""


@dataclass(frozen=True)
class ThresholdScheme:
    """Single time threshold separating short from long binding events.

    ``time_threshold = v / k_off`` of the lower-affinity ligand, where the
    dimensionless proportionality constant ``v`` is a design parameter.
    """

    v: float
    time_threshold: float

    def __post_init__(self) -> None:
        if not (self.v > 0.0):
            raise ValueError(f"v must be positive, got {self.v}")
        if not (self.time_threshold > 0.0):
            raise ValueError("time_threshold must be positive")

    @classmethod
    def from_v(cls, v: float, panel: LigandPanel) -> "ThresholdScheme":
        return cls(v=v, time_threshold=v / panel.ligand1.k_off)


@dataclass(frozen=True)
class MomWeights:
    """Interval-probability matrix S and its inverse W for the counting estimator.

    S[l][j] is the probability that a binding event of pure ligand j falls
    in time interval l, with intervals [0, T] and [T, inf).  Columns of S
    sum to one; W = S^-1 maps observed interval counts to ratio estimates.
    """

    s_matrix: np.ndarray
    w_matrix: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.s_matrix, dtype=float)
        w = np.asarray(self.w_matrix, dtype=float)
        if s.shape != (2, 2) or w.shape != (2, 2):
            raise ValueError("S and W must be 2x2")
        if abs(np.linalg.det(s)) <= 1e-12:
            raise ValueError("interval-probability matrix is singular")
        if not np.allclose(w @ s, np.eye(2), atol=1e-10):
            raise ValueError("W is not the inverse of S")


@dataclass(frozen=True)
class RatioEstimate:
    """A ratio estimate with its variance.

    The raw counting estimate may fall outside [0, 1]; clamping is left to
    the detection layer so moment checks stay unbiased.
    """

    alpha_hat: float
    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError(f"variance must be nonnegative, got {self.variance}")

    def clamped(self) -> float:
        return min(max(self.alpha_hat, 0.0), 1.0)


def golden_section_minimize(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section search for the minimizer of ``f`` on [lo, hi].

    Robust for unimodal objectives including boundary minima; returns the
    midpoint of the final bracket.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def ml_ratio_estimate(bound_times, panel: LigandPanel) -> RatioEstimate:
    """Maximum-likelihood estimate of the concentration ratio.

    The log-likelihood is concave in the ratio, so a golden-section search
    on [0, 1] (tolerance 1e-6) finds the maximizer; boundary solutions are
    resolved by direct likelihood comparison.  The variance field carries
    the Cramer-Rao proxy 1/I(alpha_hat) of the optimal receiver.
    """
    times = np.asarray(bound_times, dtype=float)
    if times.size == 0:
        raise ValueError("need at least one bound-time sample")

    def neg_ll(a: float) -> float:
        return -log_likelihood_ratio(times, a, panel)

    a_star = golden_section_minimize(neg_ll, 0.0, 1.0, tol=1e-6)
    # the bracket midpoint can sit a hair inside [0,1] even for boundary
    # optima; compare against the endpoints explicitly
    candidates = [0.0, a_star, 1.0]
    values = [neg_ll(a) for a in candidates]
    a_hat = candidates[int(np.argmin(values))]

    from .information import fisher_rsk_optimal

    receptors = ReceptorArray(n_receptors=times.size)
    info = fisher_rsk_optimal(a_hat, panel, receptors)
    variance = 0.0 if math.isinf(info) else (math.inf if info == 0.0 else 1.0 / info)
    return RatioEstimate(alpha_hat=a_hat, variance=variance)


def build_mom_weights(panel: LigandPanel, scheme: ThresholdScheme) -> MomWeights:
    """Construct the interval-probability matrix and its inverse.

    With interval bounds T0 = 0, T1 = T, T2 = inf, each column holds the
    pure-component interval probabilities and sums to one exactly.  Equal
    unbinding rates make the matrix singular (indistinguishable ligands).
    """
    t = scheme.time_threshold
    e1 = math.exp(-panel.ligand1.k_off * t)
    e2 = math.exp(-panel.ligand2.k_off * t)
    s = np.array([[1.0 - e1, 1.0 - e2], [e1, e2]])
    det = e2 - e1
    if abs(det) <= 1e-12:
        raise ValueError(
            "interval probabilities are singular (gamma = 1: ligands "
            "indistinguishable by bound time)"
        )
    w = np.array([[e2, e2 - 1.0], [-e1, 1.0 - e1]]) / det
    return MomWeights(s_matrix=s, w_matrix=w)


def mom_ratio_estimate(
    counts, weights: MomWeights, receptors: ReceptorArray
) -> RatioEstimate:
    """Counting (method-of-moments) estimate of the concentration ratio.

    ``counts`` holds the number of binding events in the short and long
    interval; they must sum to the receptor count.  The returned variance
    is the plug-in value using the observed interval frequencies.
    """
    n = np.asarray(counts, dtype=float)
    if n.shape != (2,):
        raise ValueError("counts must be a 2-vector")
    if np.any(n < 0.0):
        raise ValueError("counts must be nonnegative")
    n_r = receptors.n_receptors
    if abs(n.sum() - n_r) > 1e-9:
        raise ValueError(f"counts must sum to {n_r}, got {n.sum()}")
    w = weights.w_matrix
    alpha_vec = w @ n / n_r
    p_hat = n / n_r
    variance = _weighted_count_variance(w[0], p_hat, n_r)
    return RatioEstimate(alpha_hat=float(alpha_vec[0]), variance=max(variance, 0.0))


def _weighted_count_variance(w_row: np.ndarray, p: np.ndarray, n_r: int) -> float:
    """Variance of (w . n)/N_R for multinomial interval counts n."""
    total = 0.0
    for i in range(2):
        for j in range(2):
            cov = p[i] * (1.0 - p[i]) * n_r if i == j else -p[i] * p[j] * n_r
            total += w_row[i] * w_row[j] * cov
    return total / n_r**2


def mom_estimator_variance(
    alpha: float,
    panel: LigandPanel,
    scheme: ThresholdScheme,
    receptors: ReceptorArray,
) -> float:
    """Analytic variance of the counting estimator at a true ratio."""
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    weights = build_mom_weights(panel, scheme)
    t = scheme.time_threshold
    e1 = math.exp(-panel.ligand1.k_off * t)
    e2 = math.exp(-panel.ligand2.k_off * t)
    p_long = alpha * e1 + (1.0 - alpha) * e2
    p = np.array([1.0 - p_long, p_long])
    return max(_weighted_count_variance(weights.w_matrix[0], p, receptors.n_receptors), 0.0)


def optimize_threshold(
    panel: LigandPanel,
    receptors: ReceptorArray,
    alpha_grid=None,
) -> ThresholdScheme:
    """Pick the proportionality constant minimizing average estimator variance.

    The criterion averages the analytic variance over ``alpha_grid``
    (uniform 21-point grid by default, since symbol values are unknown at
    design time); golden-section search on v in [0.01, 10] to 1e-4.
    """
    if panel.gamma == 1.0:
        raise ValueError("gamma = 1: no informative threshold exists")
    if alpha_grid is None:
        alpha_grid = np.linspace(0.0, 1.0, 21)
    grid = np.asarray(alpha_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("alpha_grid must be nonempty")

    def objective(v: float) -> float:
        scheme = ThresholdScheme.from_v(v, panel)
        return float(
            np.mean([mom_estimator_variance(a, panel, scheme, receptors) for a in grid])
        )

    v_star = golden_section_minimize(objective, 0.01, 10.0, tol=1e-4)
    return ThresholdScheme.from_v(v_star, panel)


def csk_concentration_estimate(
    n_bound: int, receptors: ReceptorArray, ligand: LigandType
) -> float:
    """Invert the bound-state hyperbola to estimate a single-ligand concentration."""
    n_r = receptors.n_receptors
    if not (0 <= n_bound <= n_r):
        raise ValueError(f"n_bound must be in [0, {n_r}], got {n_bound}")
    if n_bound == n_r:
        raise SaturationError(
            "all receptors bound: concentration estimate is infinite"
        )
    p_hat = n_bound / n_r
    return ligand.k_d * p_hat / (1.0 - p_hat)
