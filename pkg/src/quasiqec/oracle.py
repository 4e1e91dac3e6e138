"""Dense statevector oracle for small codes.

Brute-force 2^n amplitude simulation of the rotation unitary and the
explicit syndrome projectors, used to validate the coset-sum backend.
Capped at 12 qubits.
"""

from __future__ import annotations

import numpy as np

from .codes import MultiCycleSyndrome, StabilizerCode

ORACLE_QUBIT_CAP = 12


def _check_size(code: StabilizerCode) -> None:
    if code.n > ORACLE_QUBIT_CAP:
        raise ValueError(f"statevector oracle is capped at {ORACLE_QUBIT_CAP} qubits")


def _apply_x_projector(state: np.ndarray, mask: int, sign: int) -> np.ndarray:
    idx = np.arange(state.shape[0]) ^ mask
    return 0.5 * (state + sign * state[idx])


def _z_string_signs(n: int, bits: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.uint32)
    par = np.bitwise_count(idx & np.uint32(bits)) & 1
    return 1.0 - 2.0 * par.astype(float)


def plus_logical_state(code: StabilizerCode) -> np.ndarray:
    """|+_L>: the +1 eigenstate of every X-check and of logical X."""
    _check_size(code)
    state = np.zeros(1 << code.n, dtype=complex)
    state[0] = 1.0
    for mask in (*code.x_checks, code.logical_x):
        state = _apply_x_projector(state, mask, +1)
    norm = np.linalg.norm(state)
    if norm == 0:
        raise RuntimeError("projection annihilated the reference state")
    return state / norm


def apply_rotations(state: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Apply prod_j exp(i theta_j Z_j) to a dense state."""
    n = int(np.log2(state.shape[0]))
    idx = np.arange(state.shape[0], dtype=np.uint32)
    phase = np.zeros(state.shape[0])
    for j in range(n):
        sgn = 1.0 - 2.0 * ((idx >> j) & 1).astype(float)
        phase += theta[j] * sgn
    return state * np.exp(1j * phase)


def project_syndrome(code: StabilizerCode, state: np.ndarray, syndrome) -> np.ndarray:
    """Apply Pi_s = prod_f (1 + s_f S_f)/2 without normalizing."""
    for f, mask in enumerate(code.x_checks):
        sign = -1 if syndrome.bit(f) else +1
        state = _apply_x_projector(state, mask, sign)
    return state


def oracle_trajectory(
    code: StabilizerCode, theta: np.ndarray, syndromes: MultiCycleSyndrome
) -> tuple[complex, complex, float]:
    """Evolve |+_L> through t cycles of U then Pi_{s_r}, forced outcomes.

    Returns (alpha, beta, norm): the decomposition of the unnormalized
    final state against E_s |+_L> and Z_L E_s |+_L>, with E_s the canonical
    representative of the final syndrome, plus the state norm.
    """
    _check_size(code)
    psi_l = plus_logical_state(code)
    state = psi_l
    for s in syndromes:
        state = apply_rotations(state, np.asarray(theta, dtype=float))
        state = project_syndrome(code, state, s)
    rep = code.canonical_representative(syndromes[-1])
    base = _z_string_signs(code.n, rep.bits) * psi_l
    base_flip = _z_string_signs(code.n, code.logical_z.bits) * base
    alpha = complex(np.vdot(base, state))
    beta = complex(np.vdot(base_flip, state))
    return alpha, beta, float(np.linalg.norm(state))


def repetition_two_cycle_mc(
    sigma: float, n_samples: int, rng: np.random.Generator, chunk: int = 100_000
) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo estimate of the two-cycle repetition-code coefficients.

    Vectorized dense two-qubit statevector simulation over angle samples.
    Returns (mean, stderr), both shaped (4 syndromes, 2 classes): entry
    [s, 0] estimates the coefficient of E_s rho E_s, [s, 1] the one with an
    extra logical Z, for s in ((+,+), (-,+), (+,-), (-,-)) order.
    """
    check_mask = 0b11
    perm = np.arange(4) ^ check_mask
    psi_l = np.full(4, 0.5, dtype=complex)  # |++>
    z_a = np.array([1.0, -1.0, 1.0, -1.0])  # Z on qubit A (bit 0)
    z_l = np.array([1.0, -1.0, -1.0, 1.0])

    sums = np.zeros((4, 2))
    sq_sums = np.zeros((4, 2))
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        theta = rng.normal(0.0, sigma, size=(m, 2))
        sgn_a = np.array([1.0, -1.0, 1.0, -1.0])
        sgn_b = np.array([1.0, 1.0, -1.0, -1.0])
        phases = np.exp(1j * (np.outer(theta[:, 0], sgn_a) + np.outer(theta[:, 1], sgn_b)))
        vals = np.zeros((m, 4, 2))
        for s1 in (0, 1):
            state1 = phases * psi_l[None, :]
            flipped = state1[:, perm]
            state1 = 0.5 * (state1 + (1 - 2 * s1) * flipped)
            for s2 in (0, 1):
                state2 = phases * state1
                state2 = 0.5 * (state2 + (1 - 2 * s2) * state2[:, perm])
                base = psi_l if s2 == 0 else z_a * psi_l
                alpha = state2 @ np.conj(base)
                beta = state2 @ np.conj(z_l * base)
                s_idx = s1 + 2 * s2  # ((+,+), (-,+), (+,-), (-,-))
                vals[:, s_idx, 0] = np.abs(alpha) ** 2
                vals[:, s_idx, 1] = np.abs(beta) ** 2
        sums += vals.sum(axis=0)
        sq_sums += (vals**2).sum(axis=0)
        done += m
    mean = sums / n_samples
    var = sq_sums / n_samples - mean**2
    stderr = np.sqrt(np.maximum(var, 0.0) / n_samples)
    return mean, stderr
