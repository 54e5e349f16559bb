"""Statistics of the time-varying channel between diffusing endpoints.

Transmitter and receiver perform independent random walks with a common
diffusion coefficient much smaller than that of the ligands.  Their
distance follows a scaled noncentral chi law (3 degrees of freedom); the
peak sampling time follows the matching scaled noncentral chi-squared law.
Received-concentration moments are propagated through the point-source
impulse response with the delta method, and bound-receptor moments follow
from the law of total mean and variance over the concentration spread.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

from scipy.integrate import quad
from scipy.special import erf

from .kinetics import LigandType, ReceptorArray, bound_probability_single

__all__ = [
    "MobilityConfig",
    "DistanceMoments",
    "ConcentrationMoments",
    "cir",
    "peak_time",
    "distance_moments",
    "peak_time_moments",
    "received_concentration_moments_peak",
    "received_concentration_moments_fixed",
    "bound_receptor_moments_mobile",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MobilityConfig:
    """Channel geometry and movement parameters.

    Attributes
    ----------
    d_ligand : ligand diffusion coefficient (um^2/s)
    d_txrx : common transmitter/receiver diffusion coefficient (um^2/s)
    r0 : initial transmitter-receiver distance (um)
    t_s : signaling interval (s)
    """

    d_ligand: float
    d_txrx: float
    r0: float
    t_s: float

    def __post_init__(self) -> None:
        if not (self.d_ligand > 0.0):
            raise ValueError("d_ligand must be positive")
        if self.d_txrx < 0.0:
            raise ValueError("d_txrx must be nonnegative")
        if self.r0 < 0.0:
            raise ValueError("r0 must be nonnegative")
        if not (self.t_s > 0.0):
            raise ValueError("t_s must be positive")
        if self.d_txrx > 0.1 * self.d_ligand:
            warnings.warn(
                "transmitter/receiver diffusion is not small against the "
                "ligand diffusion; the frozen-interval channel assumption "
                "degrades",
                stacklevel=2,
            )


@dataclass(frozen=True)
class DistanceMoments:
    """First two moments of the transmitter-receiver distance.

    ``noncentrality`` is the parameter of the underlying noncentral chi
    variable (infinite in the degenerate, immobile case).
    """

    mean_r: float
    var_r: float
    noncentrality: float

    def __post_init__(self) -> None:
        if not (self.mean_r > 0.0):
            raise ValueError("mean distance must be positive")
        if self.var_r < 0.0:
            raise ValueError("distance variance must be nonnegative")


@dataclass(frozen=True)
class ConcentrationMoments:
    """Received-concentration moments at the sampling instant."""

    mean_c: float
    var_c: float
    sampling: str = "peak"
    tau_s: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mean_c < 0.0 or self.var_c < 0.0:
            raise ValueError("concentration moments must be nonnegative")
        if self.sampling not in ("peak", "fixed"):
            raise ValueError("sampling must be 'peak' or 'fixed'")
        if self.sampling == "fixed" and not (self.tau_s and self.tau_s > 0.0):
            raise ValueError("fixed sampling requires a positive tau_s")


def cir(r: float, tau: float, d_ligand: float) -> float:
    """Per-molecule concentration of a point release after free diffusion.

    (4*pi*D*tau)^(-3/2) * exp(-r^2 / (4*D*tau)), in um^-3 per molecule.
    """
    if r < 0.0:
        raise ValueError("distance must be nonnegative")
    if not (tau > 0.0):
        raise ValueError("elapsed time must be positive")
    if not (d_ligand > 0.0):
        raise ValueError("diffusion coefficient must be positive")
    return (4.0 * math.pi * d_ligand * tau) ** -1.5 * math.exp(
        -(r * r) / (4.0 * d_ligand * tau)
    )


def peak_time(r: float, d_ligand: float) -> float:
    """Elapsed time at which the received concentration peaks: r^2 / (6 D)."""
    if r < 0.0:
        raise ValueError("distance must be nonnegative")
    if not (d_ligand > 0.0):
        raise ValueError("diffusion coefficient must be positive")
    return r * r / (6.0 * d_ligand)


def _log_noncentral_chi3_pdf(x: float, lam: float) -> float:
    """Log-density of the noncentral chi distribution with 3 dof.

    Uses log(sinh) in stable form so large noncentralities do not overflow.
    """
    if x <= 0.0:
        return -math.inf
    if lam == 0.0:
        # central chi, k = 3: sqrt(2/pi) x^2 exp(-x^2/2)
        return 0.5 * math.log(2.0 / math.pi) + 2.0 * math.log(x) - 0.5 * x * x
    z = lam * x
    log_sinh = z + math.log1p(-math.exp(-2.0 * z)) - math.log(2.0)
    return (
        0.5 * math.log(2.0 / math.pi)
        + math.log(x / lam)
        - 0.5 * (x * x + lam * lam)
        + log_sinh
    )


def _noncentral_chi3_mean(lam: float) -> float:
    """Mean of the noncentral chi (3 dof) by adaptive quadrature."""
    lo = max(0.0, lam - 15.0)
    hi = lam + 15.0
    value, _ = quad(
        lambda x: x * math.exp(_log_noncentral_chi3_pdf(x, lam)),
        lo,
        hi,
        limit=200,
        epsrel=1e-11,
    )
    return value


def distance_moments(t: float, config: MobilityConfig) -> DistanceMoments:
    """Distance moments at elapsed walk time ``t``.

    Degenerate cases (t = 0 or immobile endpoints) return the initial
    distance exactly.  Otherwise the scaled noncentral chi mean is
    evaluated by quadrature and the variance follows from the exact second
    moment r0^2 + 12 * d_txrx * t.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if t == 0.0 or config.d_txrx == 0.0:
        if config.r0 == 0.0:
            raise ValueError("degenerate distance at zero initial separation")
        return DistanceMoments(mean_r=config.r0, var_r=0.0, noncentrality=math.inf)
    scale = math.sqrt(4.0 * config.d_txrx * t)
    lam = config.r0 / scale
    mean_b = _noncentral_chi3_mean(lam)
    var_b = 3.0 + lam * lam - mean_b * mean_b
    return DistanceMoments(
        mean_r=scale * mean_b,
        var_r=max(scale * scale * var_b, 0.0),
        noncentrality=lam,
    )


def peak_time_moments(t_r: float, config: MobilityConfig) -> Tuple[float, float]:
    """Mean and variance of the peak sampling time at release time ``t_r``.

    Closed forms of the scaled noncentral chi-squared law:
    mean = (12*d_txrx*t_r + r0^2) / (6*D) and
    var = (24*d_txrx^2*t_r^2 + 4*r0^2*d_txrx*t_r) / (9*D^2).
    """
    if t_r < 0.0:
        raise ValueError("release time must be nonnegative")
    d = config.d_ligand
    dtr = config.d_txrx * t_r
    mean = (12.0 * dtr + config.r0**2) / (6.0 * d)
    var = (24.0 * dtr**2 + 4.0 * config.r0**2 * dtr) / (9.0 * d * d)
    return mean, var


_PEAK_PREFACTOR = math.exp(-1.5) * (1.5 / math.pi) ** 1.5


def received_concentration_moments_peak(
    n_tx: float, dist: DistanceMoments
) -> ConcentrationMoments:
    """Delta-method concentration moments under peak-time sampling.

    At the peak the impulse response collapses to a pure power law in the
    distance, so the expansion needs only the distance moments.
    """
    if n_tx < 0.0:
        raise ValueError("molecule count must be nonnegative")
    mu, var = dist.mean_r, dist.var_r
    rel = var / (mu * mu)
    mean_c = _PEAK_PREFACTOR * n_tx / mu**3 * (1.0 + 6.0 * rel)
    var_c = _PEAK_PREFACTOR**2 * 9.0 * n_tx**2 * var / mu**8 * (1.0 + 8.0 * rel)
    return ConcentrationMoments(mean_c=mean_c, var_c=max(var_c, 0.0), sampling="peak")


def received_concentration_moments_fixed(
    n_tx: float, dist: DistanceMoments, tau_s: float, d_ligand: float
) -> ConcentrationMoments:
    """Delta-method concentration moments under fixed-time sampling."""
    if n_tx < 0.0:
        raise ValueError("molecule count must be nonnegative")
    if not (tau_s > 0.0):
        raise ValueError("sampling time must be positive")
    mu, var = dist.mean_r, dist.var_r
    dt4 = 4.0 * d_ligand * tau_s
    base = n_tx * (math.pi * dt4) ** -1.5 * math.exp(-mu * mu / dt4)
    mean_c = base * (1.0 + var * mu * mu / (8.0 * (d_ligand * tau_s) ** 2) - var / dt4)
    var_c = (
        4.0
        * n_tx**2
        * var
        / (dt4**5 * math.pi**3)
        * math.exp(-2.0 * mu * mu / dt4)
        * (
            mu * mu
            + var / 2.0
            - mu * mu * var / (2.0 * d_ligand * tau_s)
            + mu**4 * var / (8.0 * (d_ligand * tau_s) ** 2)
        )
    )
    return ConcentrationMoments(
        mean_c=max(mean_c, 0.0), var_c=max(var_c, 0.0), sampling="fixed", tau_s=tau_s
    )


def bound_receptor_moments_mobile(
    conc: ConcentrationMoments, receptors: ReceptorArray, ligand: LigandType
) -> Tuple[float, float]:
    """Bound-receptor moments under a Gaussian concentration spread.

    Law of total mean and variance over the (truncated, renormalized)
    concentration density; negative concentrations carry no mass.  Reduces
    exactly to the static binomial moments when the spread vanishes.
    """
    n_r = receptors.n_receptors
    mu_c, var_c = conc.mean_c, conc.var_c
    if var_c == 0.0:
        p = bound_probability_single(mu_c, ligand)
        return n_r * p, n_r * p * (1.0 - p)
    sigma = math.sqrt(var_c)
    lo = max(0.0, mu_c - 10.0 * sigma)
    hi = mu_c + 10.0 * sigma

    # Gaussian mass on [0, inf); renormalize when truncation is material
    mass = 0.5 * (1.0 + erf(mu_c / (sigma * math.sqrt(2.0))))
    if 1.0 - mass > 1e-12:
        logger.debug("truncated %.3e of concentration mass below zero", 1.0 - mass)
    norm = mass if (1.0 - mass) > 1e-12 else 1.0

    def gauss(c: float) -> float:
        z = (c - mu_c) / sigma
        return math.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi) * norm)

    k_d = ligand.k_d

    def mean_integrand(c: float) -> float:
        return c / (c + k_d) * n_r * gauss(c)

    mean_nb, _ = quad(mean_integrand, lo, hi, limit=200, epsrel=1e-10)

    def var_integrand(c: float) -> float:
        p = c / (c + k_d)
        within = n_r * p * (1.0 - p)
        between = (n_r * p - mean_nb) ** 2
        return (within + between) * gauss(c)

    var_nb, _ = quad(var_integrand, lo, hi, limit=200, epsrel=1e-10)
    return mean_nb, max(var_nb, 0.0)
