"""Fisher information and approximate capacity of the receptor channel.

Three receiver models are covered: ratio estimation from the full
bound-time record (optimal), ratio estimation from a single threshold
count (suboptimal), and concentration estimation from the bound-receptor
count (single-ligand benchmark).  The asymptotically optimal input density
is proportional to sqrt(I(x)); the corresponding capacity approximation is
log2((2*pi*e)^(-1/2) * integral sqrt(I)).

The ratio-channel information depends only on the rate ratio, the input
ratio, and the receptor count; time units cancel.  For rate ratios >= 2
the information diverges (integrably) at the pure fast-unbinding input, so
tabulated curves stop a hair short of that endpoint and carry an analytic
power-law integral for the trimmed sliver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from scipy.integrate import quad
from scipy.stats import binom

from .kinetics import LigandPanel, LigandType, ReceptorArray

if TYPE_CHECKING:
    from .estimators import ThresholdScheme

__all__ = [
    "ReceiverModel",
    "FisherCurve",
    "InputDistribution",
    "CapacityResult",
    "fisher_rsk_optimal",
    "fisher_rsk_suboptimal",
    "fisher_rsk_suboptimal_sum",
    "fisher_csk",
    "fisher_csk_sum",
    "rsk_optimal_curve",
    "rsk_suboptimal_curve",
    "csk_curve",
    "optimal_input_distribution",
    "approximate_capacity",
    "SQRT_2PI_E",
]

SQRT_2PI_E = math.sqrt(2.0 * math.pi * math.e)

#: edge trim used when tabulating curves with an integrable boundary singularity
EDGE_EPS = 1e-6


class ReceiverModel(str, Enum):
    RSK_OPTIMAL = "rsk-opt"
    RSK_SUBOPTIMAL = "rsk-sub"
    CSK = "csk"


@dataclass(frozen=True)
class FisherCurve:
    """Fisher information tabulated on a uniform grid.

    ``boundary_sqrt_integral`` holds the analytic value of integral sqrt(I)
    over any edge segment excluded from the grid (singular endpoints).
    """

    model: ReceiverModel
    xs: np.ndarray
    values: np.ndarray
    boundary_sqrt_integral: float = 0.0

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if xs.size < 101:
            raise ValueError("curve needs at least 101 grid points")
        if xs.shape != vals.shape:
            raise ValueError("grid and values must have matching shapes")
        if np.any(vals < 0.0):
            raise ValueError("Fisher information must be nonnegative")

    @property
    def grid_size(self) -> int:
        return int(self.xs.size)


@dataclass(frozen=True)
class InputDistribution:
    """Input density tabulated on the curve grid; unit trapezoidal integral."""

    model: ReceiverModel
    xs: np.ndarray
    density: np.ndarray

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.density) < 0.0):
            raise ValueError("density must be nonnegative")


@dataclass(frozen=True)
class CapacityResult:
    """Approximate capacity in bits per channel use.

    ``no_information`` flags the degenerate channel (zero Fisher integral,
    e.g. identical ligand types); ``bits_per_use`` is NaN in that case so
    downstream numeric columns stay well-typed.
    """

    model: ReceiverModel
    bits_per_use: float
    fisher_integral: float
    no_information: bool = False


def _mixture_fisher_per_sample(alpha: float, k1: float, k2: float) -> float:
    """Per-receptor information about the mixture weight of rate-``k1`` events.

    integral over bound time of (d p/d alpha)^2 / p with the two-component
    exponential mixture density p.  Valid for any distinct positive rates;
    diverges at alpha = 1 when k1 >= 2*k2 (and mirrored for k2 >= 2*k1 at
    alpha = 0).
    """
    if k1 == k2:
        return 0.0
    if alpha == 1.0 and k1 >= 2.0 * k2:
        return math.inf
    if alpha == 0.0 and k2 >= 2.0 * k1:
        return math.inf

    tau_max = 50.0 / min(k1, k2)

    def integrand(tau: float) -> float:
        f1 = k1 * math.exp(-k1 * tau)
        f2 = k2 * math.exp(-k2 * tau)
        p = alpha * f1 + (1.0 - alpha) * f2
        d = f1 - f2
        return d * d / p

    # the integrand has a knee where the two mixture components cross in
    # weight; hint it to the adaptive routine
    points = None
    if 0.0 < alpha < 1.0:
        ratio = alpha * k1 / ((1.0 - alpha) * k2)
        if ratio > 0.0 and k1 != k2:
            knee = math.log(ratio) / (k1 - k2)
            if 0.0 < knee < tau_max:
                points = [knee]
    value, _ = quad(integrand, 0.0, tau_max, points=points, limit=200, epsrel=1e-10)
    return value


def fisher_rsk_optimal(
    alpha: float, panel: LigandPanel, receptors: ReceptorArray
) -> float:
    """Fisher information of the ratio from the full bound-time record.

    Equals N_R times the per-sample score variance of the exponential
    mixture; +inf at alpha = 1 when gamma >= 2 (integrable divergence).
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    per_sample = _mixture_fisher_per_sample(
        alpha, panel.ligand1.k_off, panel.ligand2.k_off
    )
    return receptors.n_receptors * per_sample


def _p_long(alpha: float, panel: LigandPanel, scheme: "ThresholdScheme") -> float:
    t = scheme.time_threshold
    e1 = math.exp(-panel.ligand1.k_off * t)
    e2 = math.exp(-panel.ligand2.k_off * t)
    return alpha * e1 + (1.0 - alpha) * e2


def fisher_rsk_suboptimal(
    alpha: float,
    panel: LigandPanel,
    scheme: "ThresholdScheme",
    receptors: ReceptorArray,
) -> float:
    """Fisher information of the ratio from the threshold count (closed form).

    The binomial expectation collapses to N_R / (p(1-p)) times the squared
    sensitivity of the long-event probability to the ratio.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    t = scheme.time_threshold
    e1 = math.exp(-panel.ligand1.k_off * t)
    e2 = math.exp(-panel.ligand2.k_off * t)
    if e1 == e2:
        return 0.0
    p = _p_long(alpha, panel, scheme)
    if p <= 0.0 or p >= 1.0:
        raise ValueError("long-event probability is degenerate (p in {0, 1})")
    return (e1 - e2) ** 2 * receptors.n_receptors / (p * (1.0 - p))


def fisher_rsk_suboptimal_sum(
    alpha: float,
    panel: LigandPanel,
    scheme: "ThresholdScheme",
    receptors: ReceptorArray,
) -> float:
    """Explicit binomial-sum form of the threshold-count information.

    Direct evaluation of the expectation over the count distribution;
    intended as an independent check of the closed form for moderate N_R.
    """
    n_r = receptors.n_receptors
    if n_r > 2000:
        raise ValueError("explicit sum is intended for N_R <= 2000")
    t = scheme.time_threshold
    e1 = math.exp(-panel.ligand1.k_off * t)
    e2 = math.exp(-panel.ligand2.k_off * t)
    p = _p_long(alpha, panel, scheme)
    if p <= 0.0 or p >= 1.0:
        raise ValueError("long-event probability is degenerate (p in {0, 1})")
    counts = np.arange(n_r + 1)
    pmf = binom.pmf(counts, n_r, p)
    expectation = float(np.sum((counts / p**2 + (n_r - counts) / (1.0 - p) ** 2) * pmf))
    return (e1 - e2) ** 2 * expectation


def fisher_csk(c: float, ligand: LigandType, receptors: ReceptorArray) -> float:
    """Fisher information of the concentration from the bound-receptor count.

    Closed form N_R * k_d / (c * (c + k_d)^2); diverges as 1/c at zero
    concentration (+inf returned).
    """
    if c < 0.0:
        raise ValueError(f"concentration must be nonnegative, got {c}")
    if c == 0.0:
        return math.inf
    k_d = ligand.k_d
    return receptors.n_receptors * k_d / (c * (c + k_d) ** 2)


def fisher_csk_sum(c: float, ligand: LigandType, receptors: ReceptorArray) -> float:
    """Explicit binomial-sum form of the concentration information.

    Includes the second-derivative term whose expectation vanishes, as an
    independent check of the closed form for moderate N_R.
    """
    n_r = receptors.n_receptors
    if n_r > 2000:
        raise ValueError("explicit sum is intended for N_R <= 2000")
    if c <= 0.0:
        raise ValueError("explicit sum requires positive concentration")
    k_d = ligand.k_d
    p = c / (c + k_d)
    dp = k_d / (c + k_d) ** 2
    d2p = -2.0 * k_d / (c + k_d) ** 3
    counts = np.arange(n_r + 1)
    pmf = binom.pmf(counts, n_r, p)
    first = d2p * (counts / p - (n_r - counts) / (1.0 - p))
    second = dp**2 * (counts / p**2 + (n_r - counts) / (1.0 - p) ** 2)
    return float(np.sum((second - first) * pmf))


def rsk_optimal_curve(
    panel: LigandPanel,
    receptors: ReceptorArray,
    grid_size: int = 1001,
    parameterize_by: int = 1,
) -> FisherCurve:
    """Tabulate the optimal-receiver information over the ratio domain.

    The grid spans [0, 1 - eps]; the trimmed sliver next to the divergent
    endpoint is integrated analytically from the local power-law exponent
    (1 - alpha)^(-(gamma-2)/(2(gamma-1))) of sqrt(I).  ``parameterize_by=2``
    re-parameterizes the input as the second ligand's ratio (mirror image).
    """
    gamma = panel.gamma
    xs = np.linspace(0.0, 1.0 - EDGE_EPS, grid_size)
    values = np.array(
        [fisher_rsk_optimal(a, panel, receptors) for a in xs]
    )
    beta = max(0.0, (gamma - 2.0) / (2.0 * (gamma - 1.0))) if gamma > 1.0 else 0.0
    tail = math.sqrt(values[-1]) * EDGE_EPS / (1.0 - beta)
    if parameterize_by == 2:
        xs, values = 1.0 - xs[::-1], values[::-1]
    elif parameterize_by != 1:
        raise ValueError("parameterize_by must be 1 or 2")
    return FisherCurve(
        model=ReceiverModel.RSK_OPTIMAL,
        xs=xs,
        values=values,
        boundary_sqrt_integral=tail,
    )


def rsk_suboptimal_curve(
    panel: LigandPanel,
    scheme: "ThresholdScheme",
    receptors: ReceptorArray,
    grid_size: int = 1001,
    parameterize_by: int = 1,
) -> FisherCurve:
    """Tabulate the threshold-count information over the full ratio domain."""
    xs = np.linspace(0.0, 1.0, grid_size)
    if panel.gamma == 1.0:
        values = np.zeros_like(xs)
    else:
        values = np.array(
            [fisher_rsk_suboptimal(a, panel, scheme, receptors) for a in xs]
        )
    if parameterize_by == 2:
        xs, values = 1.0 - xs[::-1], values[::-1]
    elif parameterize_by != 1:
        raise ValueError("parameterize_by must be 1 or 2")
    return FisherCurve(model=ReceiverModel.RSK_SUBOPTIMAL, xs=xs, values=values)


def csk_curve(
    ligand: LigandType,
    receptors: ReceptorArray,
    c_max: float,
    grid_size: int = 1001,
) -> FisherCurve:
    """Tabulate the concentration information on [eps, c_max].

    sqrt(I) ~ c^(-1/2) is integrable at zero; the [0, eps] sliver has the
    exact antiderivative 2*sqrt(N_R)*atan(sqrt(c/k_d)) and is carried as
    the boundary term.
    """
    if not (c_max > 0.0):
        raise ValueError(f"c_max must be positive, got {c_max}")
    k_d = ligand.k_d
    eps = EDGE_EPS * k_d
    xs = np.linspace(eps, c_max, grid_size)
    values = receptors.n_receptors * k_d / (xs * (xs + k_d) ** 2)
    tail = 2.0 * math.sqrt(receptors.n_receptors) * math.atan(math.sqrt(eps / k_d))
    return FisherCurve(
        model=ReceiverModel.CSK, xs=xs, values=values, boundary_sqrt_integral=tail
    )


def optimal_input_distribution(curve: FisherCurve) -> InputDistribution:
    """Normalize sqrt(I) to a unit-integral density on the curve grid."""
    s = np.sqrt(curve.values)
    norm = float(np.trapezoid(s, curve.xs))
    if norm <= 0.0:
        raise ValueError("curve carries no information; no input distribution")
    return InputDistribution(model=curve.model, xs=curve.xs, density=s / norm)


def approximate_capacity(curve: FisherCurve) -> CapacityResult:
    """Capacity approximation from the root-information integral.

    May be negative for very uninformative channels; a zero integral is
    reported as a no-information sentinel instead of -inf.
    """
    integral = float(np.trapezoid(np.sqrt(curve.values), curve.xs))
    integral += curve.boundary_sqrt_integral
    if integral <= 0.0:
        return CapacityResult(
            model=curve.model,
            bits_per_use=math.nan,
            fisher_integral=0.0,
            no_information=True,
        )
    bits = math.log2(integral / SQRT_2PI_E)
    return CapacityResult(model=curve.model, bits_per_use=bits, fisher_integral=integral)
