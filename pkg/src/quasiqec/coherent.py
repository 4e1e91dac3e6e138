"""Exact simulation of quasistatic phase damping via coset amplitude sums.

Per shot, every data qubit gets a random Z-rotation angle that stays fixed
for all measurement cycles.  For a fixed angle vector the state after any
sequence of X-check outcomes is (alpha + beta Z_L) E |psi_L> with E a known
Z string, so a shot reduces to bookkeeping of two complex amplitudes plus
an accumulated error string.  The per-syndrome amplitude table (the coset
sums a(s), b(s)) is computed exactly with a Walsh-Hadamard transform of
per-qubit phase factors, which keeps the d = 5 surface code at a few
thousand table entries instead of a 2^25-term sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .codes import (
    MultiCycleSyndrome,
    StabilizerCode,
    Syndrome,
    ZString,
    canonical_representative_table,
)

# The table transform is over 2^(n_checks+1) buckets; 12 generators (d = 5)
# is the contract limit for the coherent backend.
COHERENT_GENERATOR_CAP = 12


def p_of_sigma(sigma: float) -> float:
    """Phase-flip rate equivalent to angle spread sigma: (1 - exp(-2 sigma^2))/2."""
    return 0.5 * (1.0 - math.exp(-2.0 * sigma * sigma))


def sigma_of_p(p: float) -> float:
    """Inverse of p_of_sigma; defined for p in [0, 1/2)."""
    if not 0.0 <= p < 0.5:
        raise ValueError("p must lie in [0, 1/2)")
    return math.sqrt(-0.5 * math.log1p(-2.0 * p))


@dataclass(frozen=True)
class NoiseParams:
    """Angle spread sigma and readout flip probability q; p is derived."""

    sigma: float
    q: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if not 0.0 <= self.q <= 0.5:
            raise ValueError("q must lie in [0, 1/2]")

    @property
    def p(self) -> float:
        return p_of_sigma(self.sigma)

    @classmethod
    def from_p(cls, p: float, q: float = 0.0) -> "NoiseParams":
        return cls(sigma=sigma_of_p(p), q=q)


def sample_angles(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    """Draw the per-qubit rotation angles for one shot.

    Gaussian samples are used unfolded: cos/sin are 2pi-periodic, so the
    channel is identical to the one with the density folded into (-pi, pi].
    """
    return rng.normal(0.0, sigma, size=n)


def amplitude(error: ZString, theta: np.ndarray) -> complex:
    """Expansion amplitude of a Z string in U = prod_j exp(i theta_j Z_j).

    prod_j cos(theta_j)^(1 - n_j) * (i sin(theta_j))^(n_j), with n_j = 1 on
    the string's support.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (error.n,):
        raise ValueError("angle vector has the wrong length")
    on = np.array([(error.bits >> j) & 1 for j in range(error.n)], dtype=bool)
    return complex(np.prod(np.where(on, 1j * np.sin(theta), np.cos(theta))))


@lru_cache(maxsize=None)
def _transform_signs(code: StabilizerCode) -> np.ndarray:
    """Character signs s_j(chi) = (-1)^<chi, phi_j> as an int8 matrix.

    phi_j packs (class bit << n_checks) | syndrome of Z_j; characters chi
    run over all n_checks+1 bit patterns.
    """
    nb = code.n_checks + 1
    phi = np.zeros(code.n, dtype=np.uint32)
    for q in range(code.n):
        s = code.syndrome_of(ZString(code.n, 1 << q)).bits
        c = (code.logical_x >> q) & 1
        phi[q] = (c << code.n_checks) | s
    chi = np.arange(1 << nb, dtype=np.uint32)
    par = np.bitwise_count(chi[:, None] & phi[None, :]) & 1
    return (1 - 2 * par.astype(np.int8)).astype(np.int8)


def _walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    out = vec.copy()
    h = 1
    n = out.shape[0]
    while h < n:
        out = out.reshape(-1, 2, h)
        a = out[:, 0, :].copy()
        out[:, 0, :] = a + out[:, 1, :]
        out[:, 1, :] = a - out[:, 1, :]
        out = out.reshape(n)
        h *= 2
    return out


@dataclass(frozen=True)
class CosetTable:
    """Per-syndrome amplitudes a(s), b(s) of 1 and Z_L for one angle vector.

    a[s] sums the expansion amplitudes of E_s * S over the Z-stabilizer
    group, b[s] the same with an extra logical Z.
    """

    code: StabilizerCode
    a: np.ndarray
    b: np.ndarray

    def completeness(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2))


def build_coset_table(code: StabilizerCode, theta: np.ndarray) -> CosetTable:
    """Exact coset sums for every syndrome, via a Walsh-Hadamard transform.

    The sum of amplitudes over each (syndrome, class) bucket is the inverse
    transform of prod_j exp(+-i theta_j), the per-character phase with signs
    given by the bucket map, so the whole table costs O(2^N (n + N)).
    """
    if len(code.z_stab_generators) > COHERENT_GENERATOR_CAP:
        raise ValueError(
            f"{len(code.z_stab_generators)} Z generators exceed the coherent cap "
            f"{COHERENT_GENERATOR_CAP}"
        )
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (code.n,):
        raise ValueError("angle vector has the wrong length")
    signs = _transform_signs(code)
    hat = np.exp(1j * (signs @ theta))
    buckets = _walsh_hadamard(hat) / hat.shape[0]
    n_s = 1 << code.n_checks
    _, rep_cls = canonical_representative_table(code)
    s_idx = np.arange(n_s, dtype=np.int64)
    cls = rep_cls.astype(np.int64)
    a = buckets[(cls << code.n_checks) | s_idx]
    b = buckets[((1 - cls) << code.n_checks) | s_idx]
    return CosetTable(code=code, a=a, b=b)


@dataclass(frozen=True)
class TrajectoryRecord:
    """One shot: angles, final amplitudes, accumulated string, syndromes."""

    code: StabilizerCode
    theta: np.ndarray
    alpha: complex
    beta: complex
    e_acc: ZString
    true_syndromes: MultiCycleSyndrome
    recorded: MultiCycleSyndrome

    @property
    def norm(self) -> float:
        """Probability of the sampled true syndrome history."""
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


def follow_trajectory(
    code: StabilizerCode, theta: np.ndarray, syndromes: MultiCycleSyndrome
) -> tuple[complex, complex, ZString]:
    """Amplitudes after a forced sequence of syndrome outcomes.

    Returns (alpha, beta, e_acc): the unnormalized state is
    (alpha + beta Z_L) E_acc |psi_L>, and |alpha|^2 + |beta|^2 is the
    probability of the forced history.
    """
    table = build_coset_table(code, theta)
    reps, _ = canonical_representative_table(code)
    alpha, beta = 1.0 + 0.0j, 0.0j
    acc_bits = 0
    acc_syn = 0
    for s in syndromes:
        s_rel = s.bits ^ acc_syn
        a, b = table.a[s_rel], table.b[s_rel]
        alpha, beta = alpha * a + beta * b, alpha * b + beta * a
        acc_bits ^= int(reps[s_rel])
        acc_syn ^= s_rel
    return complex(alpha), complex(beta), ZString(code.n, acc_bits)


def _sample_history(
    code: StabilizerCode,
    table: CosetTable,
    t: int,
    rng: np.random.Generator,
) -> tuple[complex, complex, int, list[int]]:
    reps, _ = canonical_representative_table(code)
    n_s = 1 << code.n_checks
    s_all = np.arange(n_s, dtype=np.int64)
    alpha, beta = 1.0 + 0.0j, 0.0j
    acc_bits = 0
    acc_syn = 0
    history: list[int] = []
    for _ in range(t):
        s_rel = s_all ^ acc_syn
        a = table.a[s_rel]
        b = table.b[s_rel]
        cand_alpha = alpha * a + beta * b
        cand_beta = alpha * b + beta * a
        w = np.abs(cand_alpha) ** 2 + np.abs(cand_beta) ** 2
        total = w.sum()
        if not total > 0.0:
            raise RuntimeError("zero total syndrome weight; finite sigma cannot do this")
        s = int(np.searchsorted(np.cumsum(w), rng.random() * total, side="right"))
        s = min(s, n_s - 1)
        alpha = complex(cand_alpha[s])
        beta = complex(cand_beta[s])
        acc_bits ^= int(reps[s ^ acc_syn])
        acc_syn = s
        history.append(s)
    return alpha, beta, acc_bits, history


def _record_with_readout(
    code: StabilizerCode, history: list[int], q: float, rng: np.random.Generator
) -> MultiCycleSyndrome:
    t = len(history)
    nc = code.n_checks
    recorded = []
    for r, s in enumerate(history):
        if r < t - 1 and q > 0.0:
            flips = rng.random(nc) < q
            s ^= sum(1 << f for f in range(nc) if flips[f])
        recorded.append(Syndrome(nc, s))
    return tuple(recorded)


def run_shot(
    code: StabilizerCode,
    params: NoiseParams,
    t: int,
    rng: np.random.Generator,
) -> TrajectoryRecord:
    """Sample one multi-cycle shot under quasistatic phase damping.

    Angles are drawn once, the coset table is built once, and each cycle's
    syndrome is sampled from the exact conditional distribution.  Recorded
    syndromes flip each bit independently with probability q, except the
    final cycle which is recorded faithfully.
    """
    if t < 1:
        raise ValueError("need at least one cycle")
    theta = sample_angles(rng, code.n, params.sigma)
    table = build_coset_table(code, theta)
    alpha, beta, acc_bits, history = _sample_history(code, table, t, rng)
    recorded = _record_with_readout(code, history, params.q, rng)
    return TrajectoryRecord(
        code=code,
        theta=theta,
        alpha=alpha,
        beta=beta,
        e_acc=ZString(code.n, acc_bits),
        true_syndromes=tuple(Syndrome(code.n_checks, s) for s in history),
        recorded=recorded,
    )


def refresh_angle_variant(
    code: StabilizerCode,
    params: NoiseParams,
    t: int,
    rng: np.random.Generator,
) -> TrajectoryRecord:
    """run_shot with angles resampled every cycle.

    Only used to test the claim that refreshing angles reduces the model to
    independent phase flips.
    """
    if t < 1:
        raise ValueError("need at least one cycle")
    reps, _ = canonical_representative_table(code)
    n_s = 1 << code.n_checks
    s_all = np.arange(n_s, dtype=np.int64)
    alpha, beta = 1.0 + 0.0j, 0.0j
    acc_bits = 0
    acc_syn = 0
    history: list[int] = []
    thetas = []
    for _ in range(t):
        theta = sample_angles(rng, code.n, params.sigma)
        thetas.append(theta)
        table = build_coset_table(code, theta)
        s_rel = s_all ^ acc_syn
        cand_alpha = alpha * table.a[s_rel] + beta * table.b[s_rel]
        cand_beta = alpha * table.b[s_rel] + beta * table.a[s_rel]
        w = np.abs(cand_alpha) ** 2 + np.abs(cand_beta) ** 2
        s = int(np.searchsorted(np.cumsum(w), rng.random() * w.sum(), side="right"))
        s = min(s, n_s - 1)
        alpha, beta = complex(cand_alpha[s]), complex(cand_beta[s])
        acc_bits ^= int(reps[s ^ acc_syn])
        acc_syn = s
        history.append(s)
    recorded = _record_with_readout(code, history, params.q, rng)
    return TrajectoryRecord(
        code=code,
        theta=np.stack(thetas),
        alpha=alpha,
        beta=beta,
        e_acc=ZString(code.n, acc_bits),
        true_syndromes=tuple(Syndrome(code.n_checks, s) for s in history),
        recorded=recorded,
    )


def logical_infidelity(record: TrajectoryRecord, correction: ZString) -> float:
    """Worst-case logical infidelity after applying a correction.

    The correction must return the state to the code space, i.e. share the
    final true syndrome.  If the residual correction * e_acc is a stabilizer
    the infidelity is |beta|^2 / (|alpha|^2 + |beta|^2); if it is logical,
    the roles swap.
    """
    code = record.code
    if code.syndrome_of(correction) != code.syndrome_of(record.e_acc):
        raise ValueError("correction does not return the state to the code space")
    na = abs(record.alpha) ** 2
    nb = abs(record.beta) ** 2
    flipped = code.class_bit(correction * record.e_acc)
    return (na if flipped else nb) / (na + nb)


def trig_moment(m: int, k: int, sigma: float) -> float:
    """Exact Gaussian average <cos^m(theta) sin^k(theta)> for theta ~ N(0, sigma).

    Expands into exp(i omega theta) harmonics, whose averages are
    exp(-omega^2 sigma^2 / 2); zero for odd k by symmetry.
    """
    if m < 0 or k < 0:
        raise ValueError("powers must be non-negative")
    if k % 2 == 1:
        return 0.0
    total = 0.0 + 0.0j
    for a in range(m + 1):
        for b in range(k + 1):
            omega = 2 * (a + b) - (m + k)
            coeff = math.comb(m, a) * math.comb(k, b) * (-1) ** (k - b)
            total += coeff * math.exp(-0.5 * omega * omega * sigma * sigma)
    total /= 2**m * (2j) ** k
    return float(total.real)


def cycle_resolved_weight(
    code: StabilizerCode, scenario: tuple[ZString, ...], sigma: float
) -> float:
    """Signed weight of a cycle-resolved error scenario under angle averaging.

    Sums <A(E) A*(E')> over all scenarios E' with the same per-cycle
    syndrome history and the same merged string as E.  These weights add up
    to one over all scenarios but can be negative.
    """
    t = len(scenario)
    if t < 1:
        raise ValueError("need at least one cycle")
    n = code.n
    # per-cycle syndrome history and merged string of the reference scenario
    merged = 0
    deltas = []
    for e in scenario:
        if e.n != n:
            raise ValueError("scenario string on wrong qubit count")
        merged ^= e.bits
        deltas.append(code.syndrome_of(e).bits)

    coset: list[int] = []
    for s_elem, _ in code.enumerate_z_stabilizer_group():
        coset.append(s_elem.bits)
        coset.append(s_elem.bits ^ code.logical_z.bits)
    if len(coset) ** t > 1 << 22:
        raise ValueError("scenario class enumeration too large for this code")

    reps, _ = canonical_representative_table(code)

    z_ref = [sum((e.bits >> j) & 1 for e in scenario) for j in range(n)]

    def term(other: list[int]) -> complex:
        val = 1.0 + 0.0j
        for j in range(n):
            z = z_ref[j]
            zp = sum((bits >> j) & 1 for bits in other)
            mom = trig_moment(2 * t - z - zp, z + zp, sigma)
            if mom == 0.0:
                return 0.0j
            val *= (1j) ** z * (-1j) ** zp * mom
        return val

    total = 0.0 + 0.0j
    # enumerate E' cycle by cycle: E'_r must reproduce the syndrome increment
    stack: list[list[int]] = [[]]
    while stack:
        prefix = stack.pop()
        if len(prefix) == t:
            m = 0
            for bits in prefix:
                m ^= bits
            if m == merged:
                total += term(prefix)
            continue
        base = int(reps[deltas[len(prefix)]])
        for elem in coset:
            stack.append(prefix + [base ^ elem])
    return float(total.real)
