# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels for one simulation run.

Twin of ``pure.py``: same draw protocol (walk normals, symbol uniforms,
then one binomial per message) and the same floating-point expression
shapes, so both backends produce identical results from the same bit
generator.  Keep the two files in sync; the equivalence test in
tests/test_kernels.py guards the contract.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport exp, pow
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (binomial_t, random_binomial,
                                           random_standard_normal,
                                           random_standard_uniform)

import numpy as np

cdef double FOUR_PI = 4.0 * np.pi

__all__ = ["simulate_run_rsk", "simulate_run_csk"]


cdef bitgen_t *_bitgen_state(bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef void _draw_blocks(bitgen_t *state, Py_ssize_t n_messages, double sigma_step,
                       double r0, double *r2, long long *symbols) noexcept nogil:
    cdef Py_ssize_t k
    cdef double g0, g1, g2, g3, g4, g5
    cdef double cx = 0.0, cy = 0.0, cz = 0.0, x
    # block 1: walk increments (6 normals per message, tx first)
    for k in range(n_messages):
        g0 = random_standard_normal(state)
        g1 = random_standard_normal(state)
        g2 = random_standard_normal(state)
        g3 = random_standard_normal(state)
        g4 = random_standard_normal(state)
        g5 = random_standard_normal(state)
        cx = cx + sigma_step * (g3 - g0)
        cy = cy + sigma_step * (g4 - g1)
        cz = cz + sigma_step * (g5 - g2)
        x = cx + r0
        r2[k] = x * x + cy * cy + cz * cz
    # block 2: symbol uniforms
    for k in range(n_messages):
        symbols[k] = <long long>(4.0 * random_standard_uniform(state))


cdef inline double _sampling_tau(double r2_k, double d_ligand,
                                 double fixed_tau) noexcept nogil:
    if fixed_tau > 0.0:
        return fixed_tau
    return r2_k / (6.0 * d_ligand)


cdef inline double _cir(double r2, double tau, double d_ligand) noexcept nogil:
    return pow(FOUR_PI * d_ligand * tau, -1.5) * exp(-r2 / (4.0 * d_ligand * tau))


def simulate_run_rsk(bit_generator, Py_ssize_t n_messages, long long n_receptors,
                     double[::1] alpha_levels, double exp_k1t, double exp_k2t,
                     double w_short, double w_long, double[::1] thresholds,
                     double sigma_step, double r0, Py_ssize_t isi_window,
                     double d_ligand, double t_interval, double fixed_tau):
    """Ratio-keyed run; returns the number of symbol errors."""
    cdef bitgen_t *state = _bitgen_state(bit_generator)
    cdef binomial_t binom
    binom.has_binomial = 0

    r2_arr = np.empty(n_messages, dtype=np.float64)
    sym_arr = np.empty(n_messages, dtype=np.int64)
    cdef double[::1] r2 = r2_arr
    cdef long long[::1] symbols = sym_arr

    cdef Py_ssize_t k, j, jmax
    cdef double tau_s, h_cur, h_j, num, den, a_eff, p, z
    cdef double t0 = thresholds[0], t1 = thresholds[1], t2 = thresholds[2]
    cdef long long n_long, detected, errors = 0
    cdef double p_levels[4]

    _draw_blocks(state, n_messages, sigma_step, r0, &r2[0], &symbols[0])

    for j in range(4):
        p_levels[j] = alpha_levels[j] * exp_k1t + (1.0 - alpha_levels[j]) * exp_k2t

    for k in range(n_messages):
        if isi_window == 0:
            p = p_levels[symbols[k]]
        else:
            tau_s = _sampling_tau(r2[k], d_ligand, fixed_tau)
            h_cur = _cir(r2[k], tau_s, d_ligand)
            num = alpha_levels[symbols[k]] * h_cur
            den = h_cur
            jmax = isi_window if isi_window < k else k
            for j in range(1, jmax + 1):
                h_j = _cir(r2[k - j], j * t_interval + tau_s, d_ligand)
                num = num + alpha_levels[symbols[k - j]] * h_j
                den = den + h_j
            a_eff = num / den
            p = a_eff * exp_k1t + (1.0 - a_eff) * exp_k2t
        n_long = random_binomial(state, p, n_receptors, &binom)
        z = (<double>(n_receptors - n_long) * w_short
             + <double>n_long * w_long) / <double>n_receptors
        if z < 0.0:
            z = 0.0
        elif z > 1.0:
            z = 1.0
        detected = (z >= t0) + (z >= t1) + (z >= t2)
        if detected != symbols[k]:
            errors += 1
    return int(errors)


def simulate_run_csk(bit_generator, Py_ssize_t n_messages, long long n_receptors,
                     double[::1] n_tx_levels, double k_d, double[::1] thresholds,
                     double sigma_step, double r0, Py_ssize_t isi_window,
                     double d_ligand, double t_interval, double fixed_tau):
    """Concentration-keyed run; returns the number of symbol errors."""
    cdef bitgen_t *state = _bitgen_state(bit_generator)
    cdef binomial_t binom
    binom.has_binomial = 0

    r2_arr = np.empty(n_messages, dtype=np.float64)
    sym_arr = np.empty(n_messages, dtype=np.int64)
    cdef double[::1] r2 = r2_arr
    cdef long long[::1] symbols = sym_arr

    cdef Py_ssize_t k, j, jmax
    cdef double tau_s, c, p
    cdef double t0 = thresholds[0], t1 = thresholds[1], t2 = thresholds[2]
    cdef long long n_bound, detected, errors = 0

    _draw_blocks(state, n_messages, sigma_step, r0, &r2[0], &symbols[0])

    for k in range(n_messages):
        tau_s = _sampling_tau(r2[k], d_ligand, fixed_tau)
        c = n_tx_levels[symbols[k]] * _cir(r2[k], tau_s, d_ligand)
        jmax = isi_window if isi_window < k else k
        for j in range(1, jmax + 1):
            c = c + n_tx_levels[symbols[k - j]] * _cir(
                r2[k - j], j * t_interval + tau_s, d_ligand)
        p = c / (c + k_d)
        n_bound = random_binomial(state, p, n_receptors, &binom)
        detected = (<double>n_bound >= t0) + (<double>n_bound >= t1) + (<double>n_bound >= t2)
        if detected != symbols[k]:
            errors += 1
    return int(errors)
