"""Independent test oracles.

Everything here is deliberately written from scratch with plain numpy,
separate from the package code paths it is used to check: a Born-rule
probability evaluator over explicit kets, the correlator formula for
Bloch pairs on the maximally entangled state, and a dense 1-d scan for
the f bound.
"""

import itertools

import numpy as np


def outcome_ket(alpha, beta, outcome):
    if outcome == 0:
        return np.array([alpha, beta], dtype=np.complex128)
    return np.array([-np.conj(beta), np.conj(alpha)], dtype=np.complex128)


def born_prob(state, kets):
    """P = |<k_1 x ... x k_p | state>|^2 by direct tensor contraction."""
    amp = np.asarray(state, dtype=np.complex128).reshape((2,) * len(kets))
    for k in kets:
        amp = np.tensordot(np.conj(k), amp, axes=(0, 0))
    return float(abs(amp) ** 2)


def born_table(state, measurements):
    """Full (m,)*p + (2,)*p probability table from (alpha, beta) pairs."""
    p = len(measurements)
    m = len(measurements[0])
    table = np.zeros((m,) * p + (2,) * p)
    for xs in itertools.product(range(m), repeat=p):
        for outs in itertools.product(range(2), repeat=p):
            kets = [outcome_ket(*measurements[q][xs[q]], outs[q]) for q in range(p)]
            table[xs + outs] = born_prob(state, kets)
    return table


def phi_plus_correlator(n1, n2):
    """<(n1.sigma) x (n2.sigma)> on (|00> + |11>)/sqrt(2)."""
    return n1[0] * n2[0] - n1[1] * n2[1] + n1[2] * n2[2]


def f_dense_max(s, t, npts=200001):
    """Brute-force maximum of the f bound over admissible A."""
    amax = np.sqrt(min(s, t))
    a = np.linspace(0.0, amax, npts)
    u = a * a
    r1 = np.clip(u * (1 - s - u) * (1 - t - u), 0, None)
    r2 = np.clip((1 - u) * (s - u) * (t - u), 0, None)
    den = (1 - 2 * u) ** 2
    vals = np.divide((np.sqrt(r1) + np.sqrt(r2)) ** 2, den,
                     out=np.zeros_like(u), where=den > 1e-24)
    vals[den <= 1e-24] = (np.sqrt(u[den <= 1e-24]) + np.sqrt(1 - u[den <= 1e-24])) ** 2 / 4
    i = int(np.argmax(vals))
    return float(a[i]), float(vals[i])
