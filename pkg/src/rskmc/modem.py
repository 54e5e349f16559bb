"""Quadrature constellation design and symbol error analysis.

Received signals for both modulations are modeled as Gaussians whose
moments depend on the transmit value.  Transmit levels are chosen to
minimize the sum of adjacent-pair Chernoff bounds; maximum-likelihood
detection reduces to three thresholds at the density crossings of adjacent
symbols, and the symbol error probability has a closed erfc form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .estimators import golden_section_minimize

__all__ = [
    "SymbolStats",
    "Constellation",
    "chernoff_distance",
    "pairwise_chernoff_bound",
    "design_constellation",
    "decision_thresholds",
    "analytical_sep",
    "sep_from_stats",
    "detect_symbol",
]


@dataclass(frozen=True)
class SymbolStats:
    """Gaussian received-signal moments for one symbol."""

    mean: float
    variance: float
    label: int = -1

    def __post_init__(self) -> None:
        if not (self.variance > 0.0):
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class Constellation:
    """Four transmit levels, their signal stats, and the decision thresholds."""

    levels: Tuple[float, float, float, float]
    stats: Tuple[SymbolStats, SymbolStats, SymbolStats, SymbolStats]
    thresholds: Tuple[float, float, float]

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")
        means = [s.mean for s in self.stats]
        if any(b <= a for a, b in zip(means, means[1:])):
            raise ValueError("symbol means must be strictly increasing")
        for m, thr in enumerate(self.thresholds, start=1):
            if not (means[m - 1] < thr < means[m]):
                raise ValueError(
                    f"threshold {m} must lie strictly between adjacent means"
                )


def chernoff_distance(a: SymbolStats, b: SymbolStats, lam: float) -> float:
    """Chernoff exponent between two Gaussian hypotheses at weight ``lam``."""
    if not (0.0 < lam < 1.0):
        raise ValueError(f"lambda must be in (0, 1), got {lam}")
    pooled = lam * a.variance + (1.0 - lam) * b.variance
    quad_term = lam * (1.0 - lam) / 2.0 * (b.mean - a.mean) ** 2 / pooled
    log_term = 0.5 * math.log(
        pooled / (a.variance**lam * b.variance ** (1.0 - lam))
    )
    return quad_term + log_term


def pairwise_chernoff_bound(a: SymbolStats, b: SymbolStats) -> float:
    """Tightest Chernoff upper bound on the pairwise error, in (0, 1].

    The exponent is concave in the weight, so a golden-section search over
    (0, 1) to 1e-8 finds the optimum.
    """
    if a.mean == b.mean and a.variance == b.variance:
        return 1.0
    lam = golden_section_minimize(
        lambda l: -chernoff_distance(a, b, l), 1e-9, 1.0 - 1e-9, tol=1e-8
    )
    return math.exp(-chernoff_distance(a, b, lam))


def _compound_metric(stats: Sequence[SymbolStats]) -> float:
    return sum(pairwise_chernoff_bound(stats[i], stats[i + 1]) for i in range(3))


def design_constellation(
    signal_map: Callable[[float], SymbolStats],
    domain: Tuple[float, float],
    coarse_grid: int = 101,
    refine_tol: float = 1e-5,
) -> Constellation:
    """Choose four transmit levels minimizing the compound Chernoff metric.

    The extreme levels are pinned to the domain bounds (widening the outer
    gaps only helps for monotone signal maps); the interior pair is found
    on a 101x101 grid and polished by coordinate descent.
    """
    lo, hi = domain
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("domain bounds must be finite and increasing")

    cache: dict = {}

    def stats_at(x: float) -> SymbolStats:
        if x not in cache:
            cache[x] = signal_map(x)
        return cache[x]

    def metric(x2: float, x3: float) -> float:
        values = [stats_at(lo), stats_at(x2), stats_at(x3), stats_at(hi)]
        m = _compound_metric(values)
        if not math.isfinite(m):
            raise ValueError("design metric is not finite on the domain")
        return m

    interior = np.linspace(lo, hi, coarse_grid)[1:-1]
    best = (math.inf, interior[0], interior[1])
    for i, x2 in enumerate(interior):
        for x3 in interior[i + 1 :]:
            m = metric(x2, x3)
            if m < best[0]:
                best = (m, x2, x3)
    _, x2, x3 = best

    step = (hi - lo) / (coarse_grid - 1)
    gap = 1e-9 * (hi - lo)
    while True:
        a2, b2 = max(lo + gap, x2 - step), min(x3 - gap, x2 + step)
        new_x2 = (
            golden_section_minimize(lambda x: metric(x, x3), a2, b2, tol=refine_tol / 10.0)
            if a2 < b2
            else x2
        )
        a3, b3 = max(new_x2 + gap, x3 - step), min(hi - gap, x3 + step)
        new_x3 = (
            golden_section_minimize(lambda x: metric(new_x2, x), a3, b3, tol=refine_tol / 10.0)
            if a3 < b3
            else x3
        )
        moved = max(abs(new_x2 - x2), abs(new_x3 - x3))
        x2, x3 = new_x2, new_x3
        if moved < refine_tol:
            break

    levels = (lo, x2, x3, hi)
    stats = tuple(
        SymbolStats(mean=stats_at(x).mean, variance=stats_at(x).variance, label=m)
        for m, x in enumerate(levels)
    )
    thresholds = decision_thresholds(stats)
    return Constellation(levels=levels, stats=stats, thresholds=thresholds)


def decision_thresholds(
    stats: Sequence[SymbolStats],
) -> Tuple[float, float, float]:
    """Maximum-likelihood decision boundaries between adjacent Gaussians.

    With unequal variances the density-crossing quadratic has two roots;
    the one between the adjacent means separates the ML regions.  Equal
    variances reduce to the midpoint.  Each returned boundary is verified
    against the density-equality condition.
    """
    means = [s.mean for s in stats]
    if any(b <= a for a, b in zip(means, means[1:])):
        raise ValueError("symbol means must be strictly increasing")
    out = []
    for m in range(1, len(stats)):
        a, b = stats[m - 1], stats[m]
        if abs(b.std - a.std) < 1e-12 * b.std:
            thr = 0.5 * (a.mean + b.mean)
        else:
            dv = b.variance - a.variance
            disc = (b.mean - a.mean) ** 2 + 2.0 * dv * math.log(b.std / a.std)
            root = b.std * a.std * math.sqrt(disc)
            base = b.variance * a.mean - a.variance * b.mean
            thr = (base + root) / dv
            if not (a.mean < thr < b.mean):
                thr = (base - root) / dv
            if not (a.mean < thr < b.mean):
                raise ValueError("no density crossing between adjacent means")
        _check_density_equality(a, b, thr)
        out.append(thr)
    return tuple(out)


def _check_density_equality(a: SymbolStats, b: SymbolStats, thr: float) -> None:
    log_fa = -0.5 * ((thr - a.mean) / a.std) ** 2 - math.log(a.std)
    log_fb = -0.5 * ((thr - b.mean) / b.std) ** 2 - math.log(b.std)
    scale = max(abs(log_fa), abs(log_fb), 1.0)
    if abs(log_fa - log_fb) > 1e-9 * scale:
        raise ValueError("decision boundary fails the density-equality condition")


def sep_from_stats(
    stats: Sequence[SymbolStats], thresholds: Sequence[float]
) -> float:
    """Average symbol error of threshold detection on four Gaussian symbols.

    Valid for any interval partition given by three ordered thresholds;
    collapses to 0.75 (pure guessing) when all symbols coincide.
    """
    if len(stats) != 4 or len(thresholds) != 3:
        raise ValueError("need four symbols and three thresholds")
    t1, t2, t3 = thresholds
    s0, s1, s2, s3 = stats
    sqrt2 = math.sqrt(2.0)
    total = math.erfc((t1 - s0.mean) / (s0.std * sqrt2))
    total += math.erfc((s3.mean - t3) / (s3.std * sqrt2))
    for sym, left, right in ((s1, t1, t2), (s2, t2, t3)):
        total += math.erfc((sym.mean - left) / (sym.std * sqrt2))
        total += math.erfc((right - sym.mean) / (sym.std * sqrt2))
    return total / 8.0


def analytical_sep(constellation: Constellation) -> float:
    """Symbol error probability of the constellation's own ML thresholds."""
    return sep_from_stats(constellation.stats, constellation.thresholds)


def detect_symbol(z: float, thresholds: Sequence[float]) -> int:
    """Map a received value to the symbol of its decision region."""
    return int(
        (z >= thresholds[0]) + (z >= thresholds[1]) + (z >= thresholds[2])
    )
