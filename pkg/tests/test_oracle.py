import numpy as np
import pytest

from quasiqec import analytics, oracle
from quasiqec.codes import Syndrome, ZString
from quasiqec.coherent import follow_trajectory


def _random_history(code, rng, t):
    return tuple(
        Syndrome(code.n_checks, int(rng.integers(0, 1 << code.n_checks)))
        for _ in range(t)
    )


def test_plus_logical_is_stabilized(d3):
    state = oracle.plus_logical_state(d3)
    idx = np.arange(state.size)
    for mask in (*d3.x_checks, d3.logical_x):
        assert np.allclose(state[idx ^ mask], state, atol=1e-12)
    for g in d3.z_stab_generators:
        assert np.allclose(oracle._z_string_signs(d3.n, g.bits) * state, state)
    # logical Z flips |+_L> to an orthogonal state
    flipped = oracle._z_string_signs(d3.n, d3.logical_z.bits) * state
    assert abs(np.vdot(flipped, state)) < 1e-12


def test_zero_angles_identity(d3):
    theta = np.zeros(d3.n)
    a, b, norm = oracle.oracle_trajectory(d3, theta, (Syndrome(4, 0),))
    assert a == pytest.approx(1.0) and b == pytest.approx(0.0)
    assert norm == pytest.approx(1.0)


def test_single_cycle_completeness(d3, rng):
    theta = rng.normal(0, 0.4, d3.n)
    total = 0.0
    for s in range(16):
        _, _, norm = oracle.oracle_trajectory(d3, theta, (Syndrome(4, s),))
        total += norm**2
    assert total == pytest.approx(1.0, abs=1e-10)


def test_projector_commutation_identity(d3, rng):
    # applying a Z string then projecting equals projecting the shifted
    # syndrome then applying the string
    state = oracle.plus_logical_state(d3)
    state = oracle.apply_rotations(state, rng.normal(0, 0.5, d3.n))
    for _ in range(20):
        e_bits = int(rng.integers(0, 1 << d3.n))
        s = Syndrome(4, int(rng.integers(0, 16)))
        signs = oracle._z_string_signs(d3.n, e_bits)
        lhs = oracle.project_syndrome(d3, signs * state, s)
        shifted = s ^ d3.syndrome_of(ZString(d3.n, e_bits))
        rhs = signs * oracle.project_syndrome(d3, state, shifted)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_trajectory_amplitudes_match_oracle(d3, rng):
    for _ in range(60):
        t = int(rng.integers(1, 4))
        theta = rng.normal(0, 0.4, d3.n)
        syn = _random_history(d3, rng, t)
        a1, b1, acc = follow_trajectory(d3, theta, syn)
        if d3.class_bit(acc * d3.canonical_representative(syn[-1])):
            a1, b1 = b1, a1
        a2, b2, norm = oracle.oracle_trajectory(d3, theta, syn)
        assert a1 == pytest.approx(a2, abs=1e-11)
        assert b1 == pytest.approx(b2, abs=1e-11)
        assert norm**2 == pytest.approx(abs(a1) ** 2 + abs(b1) ** 2, abs=1e-11)


def test_infidelity_matches_statevector_overlap(d3, rng):
    # 1 - |<+_L| corrected state>|^2 equals the magnitude-based infidelity
    from quasiqec.coherent import TrajectoryRecord, logical_infidelity

    psi_l = oracle.plus_logical_state(d3)
    for _ in range(25):
        t = int(rng.integers(1, 4))
        theta = rng.normal(0, 0.4, d3.n)
        syn = _random_history(d3, rng, t)
        alpha, beta, acc = follow_trajectory(d3, theta, syn)
        rec = TrajectoryRecord(
            code=d3, theta=theta, alpha=alpha, beta=beta, e_acc=acc,
            true_syndromes=syn, recorded=syn,
        )
        corr = d3.canonical_representative(syn[-1])
        got = logical_infidelity(rec, corr)

        state = psi_l
        for s in syn:
            state = oracle.apply_rotations(state, theta)
            state = oracle.project_syndrome(d3, state, s)
        state = oracle._z_string_signs(d3.n, corr.bits) * state
        norm = np.linalg.norm(state)
        overlap = abs(np.vdot(psi_l, state)) ** 2 / norm**2
        assert got == pytest.approx(1.0 - overlap, abs=1e-10)


def test_repetition_oracle_reproduces_closed_forms(rng):
    mean, err = oracle.repetition_two_cycle_mc(0.25, 150_000, rng)
    ref = analytics.coherent_two_cycle(0.25).as_array()
    assert np.all(np.abs(mean - ref) < 3.5 * err + 1e-6)
    assert mean.sum() == pytest.approx(1.0, abs=1e-9)
