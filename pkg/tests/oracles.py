"""Independent reference implementations used to cross-check fast closed forms.

These deliberately avoid the algebraic factorizations of the production code:
the two-photon coincidence pieces are evaluated by explicit enumeration of the
(output port, frequency bin) mode pairs, O(n_bins^2) in memory and time.
"""
import numpy as np

from cavqed.ports import transfer_functions


def brute_force_abc(resp, w1, w2, omegas, tau, t0=0.0):
    """(A, B, C) for detectors at port 1 (time t0) and port 2 (time t0 + tau).

    Input state: (sum_m w1[m] a1^dag(w_m)) (sum_n w2[n] a2^dag(w_n)) |0>.
    Each input operator is rotated into output operators through the unitary
    scattering matrix, giving the two-photon output amplitude tensor
    F[alpha, beta] over flattened modes alpha = (port, bin).  Detection
    amplitudes then follow from Wick contractions:

        A = |u1.F.u2 + u2.F.u1|^2
        B = sum_gamma |(F + F^T) u1|_gamma^2     (singles at detector 1)
        C = likewise with u2                     (singles at detector 2)

    with u_j the detector projection/phase vectors.
    """
    omegas = np.asarray(omegas, dtype=float)
    n = omegas.size
    s_matrix = transfer_functions(resp, omegas)          # (n, 2, 2), [out, in]
    from_port1 = s_matrix[:, :, 0].T * np.asarray(w1)    # (2, n): out port, bin
    from_port2 = s_matrix[:, :, 1].T * np.asarray(w2)
    f_tensor = np.einsum("qm,rn->qmrn", from_port1, from_port2).reshape(2 * n, 2 * n)
    u1 = np.zeros(2 * n, dtype=complex)
    u1[:n] = np.exp(-1j * omegas * t0)
    u2 = np.zeros(2 * n, dtype=complex)
    u2[n:] = np.exp(-1j * omegas * (t0 + tau))
    amplitude = u1 @ f_tensor @ u2 + u2 @ f_tensor @ u1
    v1 = f_tensor.T @ u1 + f_tensor @ u1
    v2 = f_tensor.T @ u2 + f_tensor @ u2
    return (float(abs(amplitude) ** 2),
            float(np.vdot(v1, v1).real),
            float(np.vdot(v2, v2).real))


def jaynes_cummings_doublet(omega01, omega_cavity, g):
    """Single-excitation dressed energies of the resonant two-level/one-mode
    model: (w01 + wc)/2 -+ sqrt(delta^2 + 4 g^2)/2."""
    mean = 0.5 * (omega01 + omega_cavity)
    split = 0.5 * np.sqrt((omega01 - omega_cavity) ** 2 + 4.0 * g * g)
    return mean - split, mean + split
