"""Pure-numpy Monte Carlo kernels for one simulation run.

Both backends must produce identical results from the same bit generator,
so the draw protocol is fixed:

  block 1: 6 standard normals per message (walk increments, message-major,
           coordinate order tx_x tx_y tx_z rx_x rx_y rx_z)
  block 2: 1 uniform per message (symbol selection, floor(4u))
  block 3: 1 binomial per message, in message order (the observation)

Walk draws are consumed in every mode, including modes where the distance
does not enter detection, so that enabling interference or switching
modulation never shifts another block's position in the stream.

Transcendentals that feed a binomial probability are evaluated with
scalar libm calls (math.exp, math.pow): numpy's vectorized exp differs
from libm by ulps, which would break bit-equality with the compiled
backend.  Plain +,-,*,/ and sqrt are IEEE-exact and may be vectorized.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["simulate_run_rsk", "simulate_run_csk"]

_FOUR_PI = 4.0 * math.pi


def _draw_blocks(bit_generator, n_messages: int, sigma_step: float, r0: float):
    """Consume blocks 1 and 2; return (generator, r2 per message, symbols)."""
    rng = np.random.Generator(bit_generator)
    incr = rng.standard_normal((n_messages, 6))
    u = rng.random(n_messages)
    symbols = (4.0 * u).astype(np.int64)
    # difference-vector walk: per-coordinate increment variance 4*D*dt
    diff = sigma_step * (incr[:, 3:6] - incr[:, 0:3])
    cum = np.cumsum(diff, axis=0)
    x = cum[:, 0] + r0
    r2 = x * x + cum[:, 1] * cum[:, 1] + cum[:, 2] * cum[:, 2]
    return rng, r2, symbols


def _detect(z: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    return (
        (z >= thresholds[0]).astype(np.int64)
        + (z >= thresholds[1])
        + (z >= thresholds[2])
    )


def _sampling_tau(r2_k: float, d_ligand: float, fixed_tau: float) -> float:
    return fixed_tau if fixed_tau > 0.0 else r2_k / (6.0 * d_ligand)


def _cir(r2: float, tau: float, d_ligand: float) -> float:
    return math.pow(_FOUR_PI * d_ligand * tau, -1.5) * math.exp(
        -r2 / (4.0 * d_ligand * tau)
    )


def simulate_run_rsk(
    bit_generator,
    n_messages: int,
    n_receptors: int,
    alpha_levels: np.ndarray,
    exp_k1t: float,
    exp_k2t: float,
    w_short: float,
    w_long: float,
    thresholds: np.ndarray,
    sigma_step: float,
    r0: float,
    isi_window: int,
    d_ligand: float,
    t_interval: float,
    fixed_tau: float,
) -> int:
    """Ratio-keyed run; returns the number of symbol errors.

    Each interval's long-event count is drawn directly as a binomial with
    the realized mixture's long-event probability: with one bound-time
    sample per independent receptor, the count of events exceeding the
    threshold is exactly Binomial(N_R, p_long).
    """
    rng, r2, symbols = _draw_blocks(bit_generator, n_messages, sigma_step, r0)

    if isi_window == 0:
        p_by_level = [a * exp_k1t + (1.0 - a) * exp_k2t for a in alpha_levels]
        p = np.asarray(p_by_level)[symbols]
    else:
        # residue from past releases shifts the realized ratio: every
        # transmission carries the same total, so the transmit count cancels
        p = np.empty(n_messages)
        for k in range(n_messages):
            tau_s = _sampling_tau(r2[k], d_ligand, fixed_tau)
            h_cur = _cir(r2[k], tau_s, d_ligand)
            num = alpha_levels[symbols[k]] * h_cur
            den = h_cur
            for j in range(1, min(isi_window, k) + 1):
                h_j = _cir(r2[k - j], j * t_interval + tau_s, d_ligand)
                num += alpha_levels[symbols[k - j]] * h_j
                den += h_j
            a_eff = num / den
            p[k] = a_eff * exp_k1t + (1.0 - a_eff) * exp_k2t

    n_long = rng.binomial(n_receptors, p)
    alpha_hat = ((n_receptors - n_long) * w_short + n_long * w_long) / n_receptors
    alpha_hat = np.clip(alpha_hat, 0.0, 1.0)
    detected = _detect(alpha_hat, thresholds)
    return int(np.sum(detected != symbols))


def simulate_run_csk(
    bit_generator,
    n_messages: int,
    n_receptors: int,
    n_tx_levels: np.ndarray,
    k_d: float,
    thresholds: np.ndarray,
    sigma_step: float,
    r0: float,
    isi_window: int,
    d_ligand: float,
    t_interval: float,
    fixed_tau: float,
) -> int:
    """Concentration-keyed run; returns the number of symbol errors."""
    rng, r2, symbols = _draw_blocks(bit_generator, n_messages, sigma_step, r0)

    p = np.empty(n_messages)
    for k in range(n_messages):
        tau_s = _sampling_tau(r2[k], d_ligand, fixed_tau)
        c = n_tx_levels[symbols[k]] * _cir(r2[k], tau_s, d_ligand)
        for j in range(1, min(isi_window, k) + 1):
            c += n_tx_levels[symbols[k - j]] * _cir(
                r2[k - j], j * t_interval + tau_s, d_ligand
            )
        p[k] = c / (c + k_d)

    n_bound = rng.binomial(n_receptors, p)
    detected = _detect(n_bound, thresholds)
    return int(np.sum(detected != symbols))
