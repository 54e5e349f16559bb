"""Equilibrium ligand-receptor binding statistics.

Units used throughout the package: lengths in um, time in s, concentration
in molecules/um^3, unbinding rates in 1/s, binding rates in um^3/s.

A receptor exposed to a stationary ligand concentration behaves as a
two-state Markov process; at equilibrium the bound-state probability is a
hyperbola in concentration and the bound-time durations are exponential
with the ligand's unbinding rate.  With two ligand types competing for the
same receptors, bound times follow a two-component exponential mixture
weighted by the concentration ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LigandType",
    "LigandPanel",
    "ReceptorArray",
    "MixtureState",
    "bound_probability_single",
    "bound_probability_mixture",
    "bound_time_density",
    "log_likelihood_ratio",
    "sample_bound_receptors",
    "sample_bound_times",
]


@dataclass(frozen=True)
class LigandType:
    """A molecule species with first-order binding/unbinding kinetics.

    Attributes
    ----------
    k_on : binding rate (um^3/s), shared by diffusion-limited species
    k_off : unbinding rate (1/s)
    """

    k_on: float
    k_off: float

    def __post_init__(self) -> None:
        if not (self.k_on > 0.0):
            raise ValueError(f"k_on must be positive, got {self.k_on}")
        if not (self.k_off > 0.0):
            raise ValueError(f"k_off must be positive, got {self.k_off}")

    @property
    def k_d(self) -> float:
        """Dissociation constant k_off/k_on (um^-3); inverse affinity."""
        return self.k_off / self.k_on

    @classmethod
    def from_dissociation(cls, k_off: float, k_d: float) -> "LigandType":
        """Build a ligand from its unbinding rate and dissociation constant."""
        if not (k_d > 0.0):
            raise ValueError(f"k_d must be positive, got {k_d}")
        return cls(k_on=k_off / k_d, k_off=k_off)


@dataclass(frozen=True)
class LigandPanel:
    """The ordered pair of ligand types used for ratio encoding.

    Construction normalizes the ordering so ``ligand1`` is always the
    lower-affinity species (larger k_off); the similarity ratio
    ``gamma = ligand1.k_off / ligand2.k_off`` is therefore >= 1.
    Both species must share the same binding rate.
    """

    ligand1: LigandType
    ligand2: LigandType

    def __post_init__(self) -> None:
        if self.ligand1.k_off < self.ligand2.k_off:
            object.__setattr__(self, "ligand1", self.ligand2)
            object.__setattr__(self, "ligand2", self.ligand1)
        if not math.isclose(self.ligand1.k_on, self.ligand2.k_on, rel_tol=1e-12):
            raise ValueError(
                "panel requires equal binding rates; got "
                f"{self.ligand1.k_on} and {self.ligand2.k_on}"
            )

    @property
    def gamma(self) -> float:
        """Unbinding-rate ratio of the two species (>= 1 by construction)."""
        return self.ligand1.k_off / self.ligand2.k_off


@dataclass(frozen=True)
class ReceptorArray:
    """A count of independent, identical monovalent receptors."""

    n_receptors: int

    def __post_init__(self) -> None:
        if self.n_receptors < 1:
            raise ValueError(f"need at least one receptor, got {self.n_receptors}")


@dataclass(frozen=True)
class MixtureState:
    """Concentration split of a two-ligand mixture.

    ``alpha`` is the fraction of the total concentration carried by the
    first (lower-affinity) ligand type.
    """

    alpha: float
    c_total: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.c_total < 0.0:
            raise ValueError(f"c_total must be nonnegative, got {self.c_total}")

    @property
    def c1(self) -> float:
        return self.alpha * self.c_total

    @property
    def c2(self) -> float:
        return (1.0 - self.alpha) * self.c_total


def bound_probability_single(c: float, ligand: LigandType) -> float:
    """Equilibrium bound-state probability for one ligand type.

    Returns c / (c + k_d), in [0, 1).
    """
    if c < 0.0:
        raise ValueError(f"concentration must be nonnegative, got {c}")
    return c / (c + ligand.k_d)


def bound_probability_mixture(state: MixtureState, panel: LigandPanel) -> float:
    """Equilibrium bound-state probability under a two-ligand mixture."""
    x1 = state.c1 / panel.ligand1.k_d
    x2 = state.c2 / panel.ligand2.k_d
    return (x1 + x2) / (1.0 + x1 + x2)


def bound_time_density(tau, alpha: float, panel: LigandPanel):
    """Probability density of a single bound-time duration (1/s).

    Two-component exponential mixture: alpha weights the lower-affinity
    (faster-unbinding) component.  Accepts scalar or array ``tau``.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0.0):
        raise ValueError("bound times must be nonnegative")
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    k1 = panel.ligand1.k_off
    k2 = panel.ligand2.k_off
    out = alpha * k1 * np.exp(-k1 * tau) + (1.0 - alpha) * k2 * np.exp(-k2 * tau)
    return out if out.ndim else float(out)


def log_likelihood_ratio(bound_times, alpha: float, panel: LigandPanel) -> float:
    """Log-likelihood of the concentration ratio given observed bound times.

    Computed with logaddexp so that pure-component ratios (alpha of 0 or 1)
    and long durations stay finite where the true likelihood is finite.
    """
    times = np.asarray(bound_times, dtype=float)
    if times.size == 0:
        raise ValueError("need at least one bound-time sample")
    if np.any(times < 0.0):
        raise ValueError("bound times must be nonnegative")
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    k1 = panel.ligand1.k_off
    k2 = panel.ligand2.k_off
    with np.errstate(divide="ignore"):
        log_a = np.log(alpha) if alpha > 0.0 else -np.inf
        log_b = np.log1p(-alpha) if alpha < 1.0 else -np.inf
    term1 = log_a + math.log(k1) - k1 * times
    term2 = log_b + math.log(k2) - k2 * times
    return float(np.logaddexp(term1, term2).sum())


def sample_bound_receptors(
    p_bound: float, receptors: ReceptorArray, rng: np.random.Generator
) -> int:
    """Draw the number of bound receptors at equilibrium, Binomial(N_R, p)."""
    if not (0.0 <= p_bound <= 1.0):
        raise ValueError(f"p_bound must be in [0, 1], got {p_bound}")
    return int(rng.binomial(receptors.n_receptors, p_bound))


def sample_bound_times(
    alpha: float,
    panel: LigandPanel,
    receptors: ReceptorArray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw one bound-time duration per receptor from the mixture.

    Component selection is Bernoulli(alpha), then an exponential draw with
    that component's unbinding rate; exact and O(1) per sample.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    n = receptors.n_receptors
    pick_fast = rng.random(n) < alpha
    rates = np.where(pick_fast, panel.ligand1.k_off, panel.ligand2.k_off)
    return rng.standard_exponential(n) / rates
