"""Space-time minimum-weight perfect-matching decoder for Z errors.

Detection events are temporal XORs of recorded X-check outcomes.  Because
data-error rates are uniform across qubits and readout rates across
checks, the space-time graph distance between two events is separable:
w_s * (check-graph hops) + w_t * |cycle difference|, and the distance to
the boundary only involves check-graph hops.  All spatial quantities
(pairwise hop counts, canonical shortest paths and their data-qubit
masks, logical-crossing parities) are precomputed once per code, so a
decode is one exact matching over the defect set.

Defect-to-boundary assignments are folded into the defect graph: the
edge weight between defects i and j is min(D(i,j), B(i) + B(j)), which
is an exact reduction because any two boundary-bound defects can always
be "paired" at cost B(i) + B(j).  Instances with at most 14 defects use
a branch-and-bound search with lexicographic tie-breaking; larger ones
use the exact blossom kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np
from numba import njit, prange

from . import blossom
from .codes import MultiCycleSyndrome, StabilizerCode, Syndrome, ZString

BNB_DEFECT_LIMIT = 14
_TIE_EPS = 1e-9
_INF_WEIGHT = 1e12  # stands in for +infinity (removed edges) in float arithmetic


class DecodingError(RuntimeError):
    """Internal inconsistency while decoding (a bug, not a noise effect)."""


def edge_weight(rate: float) -> float:
    """Log-likelihood weight ln((1-x)/x); +inf at 0, 0 at 1/2."""
    if rate < 0.0 or rate > 0.5:
        raise ValueError("error rates must lie in [0, 1/2]")
    if rate == 0.0:
        return math.inf
    return math.log((1.0 - rate) / rate)


@dataclass(frozen=True)
class CheckGeometry:
    """Static spatial tables of a code's X-check graph."""

    code: StabilizerCode
    shared_qubit: np.ndarray  # (N, N) int, -1 if checks not adjacent
    spatial_dist: np.ndarray  # (N, N) int hop counts
    boundary_dist: np.ndarray  # (N,) int hops to the nearest boundary qubit
    pair_mask: tuple  # (N, N) nested tuple of canonical path qubit masks
    boundary_mask: tuple  # (N,) canonical boundary path qubit masks
    pair_parity: np.ndarray  # (N, N) uint8 logical-X crossings of pair paths
    boundary_parity: np.ndarray  # (N,) uint8


@lru_cache(maxsize=None)
def check_geometry(code: StabilizerCode) -> CheckGeometry:
    n_checks = code.n_checks
    shared = np.full((n_checks, n_checks), -1, np.int64)
    for a in range(n_checks):
        for b in range(a + 1, n_checks):
            common = code.x_checks[a] & code.x_checks[b]
            if common:
                q = (common & -common).bit_length() - 1
                shared[a, b] = shared[b, a] = q

    # boundary qubits sit in exactly one check; pick the smallest per check
    qubit_owner_count = [0] * code.n
    for mask in code.x_checks:
        m = mask
        while m:
            q = (m & -m).bit_length() - 1
            qubit_owner_count[q] += 1
            m &= m - 1
    boundary_qubit = np.full(n_checks, -1, np.int64)
    for f, mask in enumerate(code.x_checks):
        m = mask
        while m:
            q = (m & -m).bit_length() - 1
            if qubit_owner_count[q] == 1:
                boundary_qubit[f] = q
                break
            m &= m - 1

    neighbors = [sorted(np.nonzero(shared[f] >= 0)[0].tolist()) for f in range(n_checks)]

    # BFS from every check; ascending neighbor order fixes canonical paths
    big = 10**9
    dist = np.full((n_checks, n_checks), big, np.int64)
    pair_mask = [[0] * n_checks for _ in range(n_checks)]
    for src in range(n_checks):
        dist[src, src] = 0
        pred = [-1] * n_checks
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for v in neighbors[u]:
                    if dist[src, v] == big:
                        dist[src, v] = dist[src, u] + 1
                        pred[v] = u
                        nxt.append(v)
            frontier = nxt
        for tgt in range(n_checks):
            if tgt == src or dist[src, tgt] == big:
                continue
            mask = 0
            v = tgt
            while v != src:
                u = pred[v]
                mask ^= 1 << shared[u, v]
                v = u
            pair_mask[src][tgt] = mask

    # BFS from the virtual boundary node
    bdist = np.full(n_checks, big, np.int64)
    bpred = [-1] * n_checks
    frontier = []
    for f in range(n_checks):
        if boundary_qubit[f] >= 0:
            bdist[f] = 1
            frontier.append(f)
    while frontier:
        nxt = []
        for u in frontier:
            for v in neighbors[u]:
                if bdist[v] == big:
                    bdist[v] = bdist[u] + 1
                    bpred[v] = u
                    nxt.append(v)
        frontier = sorted(nxt)
    bmask = [0] * n_checks
    for f in range(n_checks):
        if bdist[f] == big:
            raise DecodingError("check has no path to the boundary")
        mask = 0
        v = f
        while bpred[v] != -1:
            u = bpred[v]
            mask ^= 1 << shared[u, v]
            v = u
        mask ^= 1 << boundary_qubit[v]
        bmask[f] = mask

    lx = code.logical_x
    pair_par = np.zeros((n_checks, n_checks), np.uint8)
    for a in range(n_checks):
        for b in range(n_checks):
            pair_par[a, b] = (pair_mask[a][b] & lx).bit_count() & 1
    bnd_par = np.array([(m & lx).bit_count() & 1 for m in bmask], np.uint8)

    return CheckGeometry(
        code=code,
        shared_qubit=shared,
        spatial_dist=dist,
        boundary_dist=bdist,
        pair_mask=tuple(tuple(row) for row in pair_mask),
        boundary_mask=tuple(bmask),
        pair_parity=pair_par,
        boundary_parity=bnd_par,
    )


@dataclass(frozen=True)
class DetectionGraph:
    """Defects of a recorded multi-cycle syndrome plus matching weights."""

    code: StabilizerCode
    t: int
    p: float
    q: float
    w_s: float
    w_t: float
    defects: tuple[tuple[int, int], ...]  # (check, cycle) sorted by (cycle, check)
    recorded: MultiCycleSyndrome

    @property
    def geometry(self) -> CheckGeometry:
        return check_geometry(self.code)

    def nodes(self) -> Iterator[tuple[int, int]]:
        for r in range(self.t):
            for f in range(self.code.n_checks):
                yield (f, r)

    def spacelike_edges(self) -> Iterator[tuple[tuple[int, int], tuple[int, int], float]]:
        geo = self.geometry
        for r in range(self.t):
            for a in range(self.code.n_checks):
                for b in range(a + 1, self.code.n_checks):
                    if geo.shared_qubit[a, b] >= 0:
                        yield ((a, r), (b, r), self.w_s)

    def timelike_edges(self) -> Iterator[tuple[tuple[int, int], tuple[int, int], float]]:
        for r in range(self.t - 1):
            for f in range(self.code.n_checks):
                yield ((f, r), (f, r + 1), self.w_t)

    def boundary_edges(self) -> Iterator[tuple[tuple[int, int], float]]:
        geo = self.geometry
        for r in range(self.t):
            for f in range(self.code.n_checks):
                yield ((f, r), self.w_s * float(geo.boundary_dist[f]))


def build_detection_graph(
    code: StabilizerCode, recorded: MultiCycleSyndrome, p: float, q: float
) -> DetectionGraph:
    """Extract defects (temporal XOR of recorded outcomes) and set weights."""
    t = len(recorded)
    defects = []
    prev = 0
    for r, syn in enumerate(recorded):
        changed = syn.bits ^ prev
        f = 0
        while changed:
            if changed & 1:
                defects.append((f, r))
            changed >>= 1
            f += 1
        prev = syn.bits
    defects.sort(key=lambda fr: (fr[1], fr[0]))
    return DetectionGraph(
        code=code,
        t=t,
        p=p,
        q=q,
        w_s=edge_weight(p),
        w_t=edge_weight(q),
        defects=tuple(defects),
        recorded=recorded,
    )


def _distance_tables(graph: DetectionGraph) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise defect distances and boundary distances as float arrays."""
    geo = graph.geometry
    ws = graph.w_s if math.isfinite(graph.w_s) else _INF_WEIGHT
    wt = graph.w_t if math.isfinite(graph.w_t) else _INF_WEIGHT
    fs = np.array([f for f, _ in graph.defects], np.int64)
    rs = np.array([r for _, r in graph.defects], np.int64)
    dmat = ws * geo.spatial_dist[np.ix_(fs, fs)] + wt * np.abs(rs[:, None] - rs[None, :])
    bvec = ws * geo.boundary_dist[fs].astype(float)
    return dmat.astype(float), bvec


def _bnb_pairing(dist: np.ndarray, bnd: np.ndarray) -> list[int]:
    """Exact min-weight pairing with boundary option, lexicographic ties.

    Returns partner[i] = j or -1 for the boundary.  Explores options in
    lexicographic order (boundary first, then partners ascending), keeping
    the first solution of minimal weight, so ties resolve to the
    lexicographically smallest assignment.
    """
    k = dist.shape[0]
    # static per-defect lower bound: cheapest way to retire this defect
    cheapest = np.minimum(bnd, 0.5 * dist.min(axis=1, initial=np.inf, where=~np.eye(k, dtype=bool)))
    best_w = math.inf
    best: list[int] = []
    partner = [-2] * k  # -2 unassigned, -1 boundary, else index

    def lower_bound() -> float:
        return sum(cheapest[i] for i in range(k) if partner[i] == -2)

    def rec(weight: float) -> None:
        nonlocal best_w, best
        if weight + lower_bound() >= best_w - _TIE_EPS and best:
            return
        i = next((x for x in range(k) if partner[x] == -2), -1)
        if i == -1:
            if weight < best_w - _TIE_EPS:
                best_w = weight
                best = partner.copy()
            return
        partner[i] = -1
        rec(weight + bnd[i])
        partner[i] = -2
        for j in range(i + 1, k):
            if partner[j] == -2:
                partner[i] = j
                partner[j] = i
                rec(weight + dist[i, j])
                partner[i] = -2
                partner[j] = -2

    rec(0.0)
    return best


def _blossom_pairing(dist: np.ndarray, bnd: np.ndarray) -> list[int]:
    """Exact pairing via the blossom kernel on the boundary-folded graph."""
    k = dist.shape[0]
    folded = np.minimum(dist, bnd[:, None] + bnd[None, :])
    if k % 2:
        full = np.zeros((k + 1, k + 1))
        full[:k, :k] = folded
        full[:k, k] = bnd
        full[k, :k] = bnd
        folded = full
    partner = blossom.min_weight_perfect_matching(folded)
    out = []
    for i in range(k):
        j = int(partner[i])
        if j >= k:
            out.append(-1)  # matched to the odd-parity virtual node
        elif dist[i, j] < bnd[i] + bnd[j] - _TIE_EPS and dist[i, j] < _INF_WEIGHT / 2:
            out.append(j)
        else:
            # folded edge, or an exact tie: both ends retire to the boundary
            # (the branch-and-bound path prefers the boundary on ties too)
            out.append(-1)
    return out


def mwpm_decode(graph: DetectionGraph) -> ZString:
    """Exact minimum-weight perfect matching correction for a recorded history.

    The returned Z string reproduces the final recorded syndrome (which is
    the true final syndrome, the last cycle being read out faithfully).
    """
    code = graph.code
    if not graph.defects:
        return ZString(code.n, 0)
    dist, bnd = _distance_tables(graph)
    if len(graph.defects) <= BNB_DEFECT_LIMIT:
        partner = _bnb_pairing(dist, bnd)
    else:
        partner = _blossom_pairing(dist, bnd)
    geo = graph.geometry
    mask = 0
    for i, j in enumerate(partner):
        f_i = graph.defects[i][0]
        if j == -1:
            mask ^= geo.boundary_mask[f_i]
        elif j > i:
            f_j = graph.defects[j][0]
            mask ^= geo.pair_mask[f_i][f_j]
    correction = ZString(code.n, mask)
    if code.syndrome_of(correction) != graph.recorded[-1]:
        raise DecodingError("correction does not reproduce the final syndrome")
    return correction


def matching_weight(graph: DetectionGraph) -> float:
    """Total weight of the optimal matching (for oracle comparisons)."""
    if not graph.defects:
        return 0.0
    dist, bnd = _distance_tables(graph)
    if len(graph.defects) <= BNB_DEFECT_LIMIT:
        partner = _bnb_pairing(dist, bnd)
    else:
        partner = _blossom_pairing(dist, bnd)
    total = 0.0
    for i, j in enumerate(partner):
        if j == -1:
            total += bnd[i]
        elif j > i:
            total += min(dist[i, j], bnd[i] + bnd[j])
    return total


def exhaustive_matching_weight(graph: DetectionGraph) -> float:
    """Brute-force minimum pairing weight; independent oracle for tests."""
    dist, bnd = _distance_tables(graph)
    k = dist.shape[0]
    if k == 0:
        return 0.0

    def rec(unmatched: tuple[int, ...]) -> float:
        if not unmatched:
            return 0.0
        i, rest = unmatched[0], unmatched[1:]
        best = bnd[i] + rec(rest)
        for idx, j in enumerate(rest):
            w = dist[i, j] + rec(rest[:idx] + rest[idx + 1 :])
            if w < best:
                best = w
        return best

    return float(rec(tuple(range(k))))


# ---------------------------------------------------------------------------
# d = 3 equal-weight lookup decoder


@lru_cache(maxsize=None)
def lookup_table_d3(code: StabilizerCode) -> tuple[np.ndarray, np.ndarray]:
    """Correction masks and class parities for all recorded d=3 histories.

    Index packs the 3-cycle recorded history as bits r * n_checks + f.
    Built by running the exact decoder with equal space/time weights.
    """
    if code.n_checks != 4:
        raise ValueError("lookup decoder is defined for the distance-3 surface code")
    t = 3
    n_hist = 1 << (t * code.n_checks)
    masks = np.zeros(n_hist, np.int64)
    cls = np.zeros(n_hist, np.uint8)
    for h in range(n_hist):
        recorded = tuple(
            Syndrome(code.n_checks, (h >> (r * code.n_checks)) & 0xF) for r in range(t)
        )
        base = build_detection_graph(code, recorded, 0.25, 0.25)
        graph = DetectionGraph(
            code=code,
            t=t,
            p=base.p,
            q=base.q,
            w_s=1.0,
            w_t=1.0,
            defects=base.defects,
            recorded=recorded,
        )
        corr = mwpm_decode(graph)
        masks[h] = corr.bits
        cls[h] = code.class_bit(corr)
    return masks, cls


def lookup_decode_d3(code: StabilizerCode, recorded: MultiCycleSyndrome) -> ZString:
    """Equal-weight MWPM lookup decoder for d = 3, t = 3."""
    if len(recorded) != 3:
        raise ValueError("lookup decoder expects exactly 3 cycles")
    masks, _ = lookup_table_d3(code)
    h = 0
    for r, syn in enumerate(recorded):
        h |= syn.bits << (r * code.n_checks)
    return ZString(code.n, int(masks[h]))


# ---------------------------------------------------------------------------
# batched decoding kernel (used by the Monte Carlo harness)


@njit(cache=True)
def _match_folded(dist, bnd):  # pragma: no cover - jitted
    """Partner array for the boundary-folded complete graph (-1 = boundary)."""
    k = dist.shape[0]
    kk = k + (k & 1)
    m = kk * (kk - 1) // 2
    eu = np.zeros(m, np.int64)
    ev = np.zeros(m, np.int64)
    ew = np.zeros(m, np.float64)
    idx = 0
    wmax = 0.0
    for i in range(k):
        for j in range(i + 1, k):
            w = dist[i, j]
            fold = bnd[i] + bnd[j]
            if fold < w:
                w = fold
            eu[idx] = i
            ev[idx] = j
            ew[idx] = w
            if w > wmax:
                wmax = w
            idx += 1
        if kk > k:
            eu[idx] = i
            ev[idx] = k
            ew[idx] = bnd[i]
            if bnd[i] > wmax:
                wmax = bnd[i]
            idx += 1
    # idx == m holds for either parity of k
    inv = np.empty(idx, np.float64)
    for i in range(idx):
        inv[i] = wmax + 1.0 - ew[i]
    deg = np.zeros(kk + 1, np.int64)
    for e in range(idx):
        deg[eu[e] + 1] += 1
        deg[ev[e] + 1] += 1
    indptr = np.zeros(kk + 1, np.int64)
    for i in range(kk):
        indptr[i + 1] = indptr[i] + deg[i + 1]
    fill = indptr[:-1].copy()
    data = np.zeros(2 * idx, np.int64)
    for e in range(idx):
        u = eu[e]
        v = ev[e]
        data[fill[u]] = 2 * e + 1
        fill[u] += 1
        data[fill[v]] = 2 * e
        fill[v] += 1
    return blossom._solve(kk, eu[:idx], ev[:idx], inv, indptr, data)


@njit(cache=True, parallel=True)
def _decode_batch_class(
    def_f, def_r, def_off, sp_dist, bnd_dist, pair_par, bnd_par, ws, wt
):  # pragma: no cover - jitted
    """Logical-class parity of the MWPM correction for each shot.

    def_f/def_r hold all shots' defect coordinates back to back, sliced by
    def_off.  Ties between a real pair and its boundary fold resolve to the
    real pair, matching the object-path decoder.
    """
    nshots = def_off.shape[0] - 1
    out = np.zeros(nshots, np.uint8)
    for s in prange(nshots):
        lo = def_off[s]
        hi = def_off[s + 1]
        k = hi - lo
        if k == 0:
            continue
        dist = np.empty((k, k), np.float64)
        bnd = np.empty(k, np.float64)
        for a in range(k):
            fa = def_f[lo + a]
            ra = def_r[lo + a]
            bnd[a] = ws * bnd_dist[fa]
            for b in range(k):
                dt = ra - def_r[lo + b]
                if dt < 0:
                    dt = -dt
                dist[a, b] = ws * sp_dist[fa, def_f[lo + b]] + wt * dt
        partner = _match_folded(dist, bnd)
        par = 0
        for a in range(k):
            pb = partner[a]
            if pb >= k:
                par ^= bnd_par[def_f[lo + a]]
            elif pb > a:
                fa = def_f[lo + a]
                fb = def_f[lo + pb]
                if dist[a, pb] < bnd[a] + bnd[pb] - 1e-9:
                    par ^= pair_par[fa, fb]
                else:
                    par ^= bnd_par[fa] ^ bnd_par[fb]
        out[s] = par
    return out


def decode_batch_class(
    code: StabilizerCode,
    defect_f: np.ndarray,
    defect_r: np.ndarray,
    defect_off: np.ndarray,
    p: float,
    q: float,
) -> np.ndarray:
    """Vectorized front end for the batched class decoder."""
    geo = check_geometry(code)
    ws = edge_weight(p)
    wt = edge_weight(q)
    ws = ws if math.isfinite(ws) else _INF_WEIGHT
    wt = wt if math.isfinite(wt) else _INF_WEIGHT
    return _decode_batch_class(
        np.ascontiguousarray(defect_f, np.int64),
        np.ascontiguousarray(defect_r, np.int64),
        np.ascontiguousarray(defect_off, np.int64),
        np.ascontiguousarray(geo.spatial_dist, np.float64),
        np.ascontiguousarray(geo.boundary_dist, np.float64),
        np.ascontiguousarray(geo.pair_parity, np.uint8),
        np.ascontiguousarray(geo.boundary_parity, np.uint8),
        float(ws),
        float(wt),
    )
