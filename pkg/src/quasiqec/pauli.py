"""Monte Carlo of independent phase flips plus phenomenological readout errors.

Fast backend for threshold scans at arbitrary distance.  Each qubit flips
independently with probability p before every measurement cycle; each
recorded check bit flips with probability q except in the final cycle.
Shots are keyed to (seed, grid index, shot index) through counter-based
Philox streams, so results are reproducible for any worker partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import (
    MultiCycleSyndrome,
    StabilizerCode,
    Syndrome,
    ZString,
    check_matrix,
    logical_x_vector,
)


def shot_rng(seed: int, grid_index: int, shot_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one shot of one grid point."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(grid_index, shot_index))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class PauliShot:
    """One sampled shot: per-cycle fresh flips and what the readout saw."""

    code: StabilizerCode
    fresh: tuple[ZString, ...]
    cumulative: ZString
    true_syndromes: MultiCycleSyndrome
    recorded: MultiCycleSyndrome


def _mask_from_bools(bools: np.ndarray) -> int:
    mask = 0
    for i in np.nonzero(bools)[0]:
        mask |= 1 << int(i)
    return mask


def run_pauli_shot(
    code: StabilizerCode, p: float, q: float, t: int, rng: np.random.Generator
) -> PauliShot:
    """Sample one multi-cycle phase-flip shot.

    Flips are applied before each cycle's measurement; the final cycle's
    record is faithful.  Draw order (flips then readout) matches the
    batched sampler bit for bit.
    """
    if not (0.0 <= p <= 0.5 and 0.0 <= q <= 0.5):
        raise ValueError("p and q must lie in [0, 1/2]")
    if t < 1:
        raise ValueError("need at least one cycle")
    flip_draws = rng.random((t, code.n)) < p
    readout_draws = rng.random((t - 1, code.n_checks)) < q if t > 1 else None
    fresh = []
    cumulative = ZString(code.n, 0)
    true_syndromes = []
    recorded = []
    for r in range(t):
        f = ZString(code.n, _mask_from_bools(flip_draws[r]))
        fresh.append(f)
        cumulative = cumulative * f
        syn = code.syndrome_of(cumulative)
        true_syndromes.append(syn)
        if r < t - 1:
            syn = Syndrome(code.n_checks, syn.bits ^ _mask_from_bools(readout_draws[r]))
        recorded.append(syn)
    return PauliShot(
        code=code,
        fresh=tuple(fresh),
        cumulative=cumulative,
        true_syndromes=tuple(true_syndromes),
        recorded=tuple(recorded),
    )


def failure_of(code: StabilizerCode, shot: PauliShot, correction: ZString) -> bool:
    """Whether the residual error after correction is a logical operator."""
    if code.syndrome_of(correction) != code.syndrome_of(shot.cumulative):
        raise ValueError("correction is inconsistent with the final syndrome")
    return code.logical_class_of(correction * shot.cumulative) == "logical"


@dataclass
class DefectBatch:
    """Defect lists of many shots, packed back to back for the batch decoder."""

    defect_f: np.ndarray
    defect_r: np.ndarray
    defect_off: np.ndarray  # (n_shots + 1,) slice offsets
    error_class: np.ndarray  # (n_shots,) parity of cumulative error vs logical X


def sample_defect_batch(
    code: StabilizerCode,
    p: float,
    q: float,
    t: int,
    seed: int,
    grid_index: int,
    shot_start: int,
    n_shots: int,
) -> DefectBatch:
    """Sample shots and extract detection events, one Philox stream per shot."""
    h = check_matrix(code).astype(np.uint8)
    lx = logical_x_vector(code)
    all_f: list[np.ndarray] = []
    all_r: list[np.ndarray] = []
    offsets = np.zeros(n_shots + 1, np.int64)
    err_cls = np.zeros(n_shots, np.uint8)
    for i in range(n_shots):
        rng = shot_rng(seed, grid_index, shot_start + i)
        flips = (rng.random((t, code.n)) < p).astype(np.uint8)
        cum = np.bitwise_xor.accumulate(flips, axis=0)
        syn = (cum @ h.T) & 1
        if t > 1:
            readout = (rng.random((t - 1, code.n_checks)) < q).astype(np.uint8)
            syn[: t - 1] ^= readout
        events = syn.copy()
        events[1:] ^= syn[:-1]
        r_idx, f_idx = np.nonzero(events)
        all_r.append(r_idx)
        all_f.append(f_idx)
        offsets[i + 1] = offsets[i] + r_idx.size
        err_cls[i] = int(cum[-1] @ lx) & 1
    return DefectBatch(
        defect_f=np.concatenate(all_f) if all_f else np.zeros(0, np.int64),
        defect_r=np.concatenate(all_r) if all_r else np.zeros(0, np.int64),
        defect_off=offsets,
        error_class=err_cls,
    )
