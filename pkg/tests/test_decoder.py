import heapq
import itertools
import math

import numpy as np
import pytest

from quasiqec import decoder, pauli
from quasiqec.codes import Syndrome, ZString
from quasiqec.decoder import (
    DetectionGraph,
    build_detection_graph,
    check_geometry,
    edge_weight,
    exhaustive_matching_weight,
    lookup_decode_d3,
    lookup_table_d3,
    matching_weight,
    mwpm_decode,
)


def _record(code, bits_by_cycle):
    return tuple(Syndrome(code.n_checks, b) for b in bits_by_cycle)


def test_edge_weight_limits():
    assert edge_weight(0.5) == 0.0
    assert math.isinf(edge_weight(0.0))
    assert edge_weight(0.1) == pytest.approx(math.log(9))
    with pytest.raises(ValueError):
        edge_weight(0.6)


def test_equal_rates_equal_weights(d3):
    g = build_detection_graph(d3, _record(d3, [0, 0, 0]), 0.03, 0.03)
    assert g.w_s == g.w_t
    assert g.defects == ()


def test_timelike_weight_decreases_with_q(d3):
    qs = [0.01, 0.05, 0.2, 0.5]
    weights = [edge_weight(q) for q in qs]
    assert all(a > b for a, b in zip(weights, weights[1:]))


def test_single_recorded_flip_gives_timelike_pair(d3):
    # one flipped bit in cycle r < t shows up as defects at r and r+1
    g = build_detection_graph(d3, _record(d3, [0, 2, 0]), 0.05, 0.05)
    assert g.defects == ((1, 1), (1, 2))


def test_edge_iterators_counts(d3):
    g = build_detection_graph(d3, _record(d3, [0, 0, 0]), 0.05, 0.05)
    geo = g.geometry
    n_adj = int((geo.shared_qubit >= 0).sum() // 2)
    assert len(list(g.spacelike_edges())) == 3 * n_adj
    assert len(list(g.timelike_edges())) == 2 * d3.n_checks
    assert len(list(g.boundary_edges())) == 3 * d3.n_checks


def _dijkstra_reference(graph: DetectionGraph):
    """All-pairs defect/boundary distances on the explicit space-time graph."""
    code = graph.code
    nodes = {(f, r): i for i, (f, r) in enumerate(
        (f, r) for r in range(graph.t) for f in range(code.n_checks))}
    boundary = len(nodes)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(boundary + 1)]
    for (a, b_node, w) in graph.spacelike_edges():
        u, v = nodes[a], nodes[b_node]
        adj[u].append((v, w))
        adj[v].append((u, w))
    for (a, b_node, w) in graph.timelike_edges():
        u, v = nodes[a], nodes[b_node]
        adj[u].append((v, w))
        adj[v].append((u, w))
    for (a, w) in graph.boundary_edges():
        u = nodes[a]
        adj[u].append((boundary, w))
        adj[boundary].append((u, w))

    def dijkstra(src):
        dist = [math.inf] * (boundary + 1)
        dist[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u] + 1e-12:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v] - 1e-12:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    return nodes, boundary, dijkstra


@pytest.mark.parametrize("p,q", [(0.03, 0.03), (0.02, 0.09), (0.12, 0.01)])
def test_closed_form_distances_match_dijkstra(d3, rng, p, q):
    recorded = _record(d3, [int(rng.integers(0, 16)) for _ in range(4)])
    graph = build_detection_graph(d3, recorded, p, q)
    if not graph.defects:
        return
    dmat, bvec = decoder._distance_tables(graph)
    nodes, boundary, dijkstra = _dijkstra_reference(graph)
    for i, fr in enumerate(graph.defects):
        dist = dijkstra(nodes[fr])
        for j, fr2 in enumerate(graph.defects):
            # a space-time path may also route through the boundary, which
            # is what the boundary fold accounts for
            folded = min(dmat[i, j], bvec[i] + bvec[j])
            assert folded == pytest.approx(dist[nodes[fr2]], abs=1e-9)
        assert bvec[i] == pytest.approx(dist[boundary], abs=1e-9)


def test_decode_no_defects_is_identity(d3):
    g = build_detection_graph(d3, _record(d3, [0, 0]), 0.05, 0.05)
    assert mwpm_decode(g).is_identity


def test_single_data_flip_corrected(d3):
    # every single-qubit flip before cycle 1, read out noiselessly, must be
    # corrected up to a stabilizer
    for q_idx in range(d3.n):
        err = ZString(d3.n, 1 << q_idx)
        syn = d3.syndrome_of(err)
        recorded = (syn, syn, syn)
        g = build_detection_graph(d3, recorded, 0.05, 0.05)
        corr = mwpm_decode(g)
        assert d3.syndrome_of(corr) == syn
        assert d3.logical_class_of(corr * err) == "trivial"


def test_all_single_faults_corrected(d3):
    # exhaustive weight-1 space-time fault check: one data flip at any
    # cycle, or one readout flip at any non-final cycle
    t = 3
    faults = [("d", q, r) for q in range(d3.n) for r in range(t)]
    faults += [("m", f, r) for f in range(d3.n_checks) for r in range(t - 1)]
    for kind, a, r in faults:
        flips = [0] * t
        readout = [0] * t
        if kind == "d":
            flips[r] = 1 << a
        else:
            readout[r] = 1 << a
        cum = 0
        rec = []
        for rr in range(t):
            cum ^= flips[rr]
            rec.append(Syndrome(d3.n_checks, d3.syndrome_of(ZString(d3.n, cum)).bits ^ readout[rr]))
        g = build_detection_graph(d3, tuple(rec), 0.01, 0.01)
        corr = mwpm_decode(g)
        residual = corr * ZString(d3.n, cum)
        assert d3.logical_class_of(residual) == "trivial"


def test_matching_weight_equals_bruteforce(d3, d5, rng):
    checked = 0
    for code, t, p, q in [(d3, 3, 0.04, 0.04), (d5, 5, 0.02, 0.05), (d3, 5, 0.08, 0.02)]:
        for _ in range(40):
            rng_shot = np.random.default_rng(rng.integers(1 << 31))
            shot = pauli.run_pauli_shot(code, p, q, t, rng_shot)
            g = build_detection_graph(code, shot.recorded, p, q)
            if len(g.defects) > 8:
                continue
            checked += 1
            assert matching_weight(g) == pytest.approx(
                exhaustive_matching_weight(g), abs=1e-9
            )
    assert checked > 40


def test_blossom_engine_agrees_with_bnb_on_weight(d5, rng, monkeypatch):
    # force the blossom path on instances small enough to brute force
    for _ in range(30):
        rng_shot = np.random.default_rng(rng.integers(1 << 31))
        shot = pauli.run_pauli_shot(d5, 0.03, 0.06, 4, rng_shot)
        g = build_detection_graph(d5, shot.recorded, 0.03, 0.06)
        if not 2 <= len(g.defects) <= 8:
            continue
        w_bnb = matching_weight(g)
        monkeypatch.setattr(decoder, "BNB_DEFECT_LIMIT", 0)
        w_blossom = matching_weight(g)
        corr = mwpm_decode(g)
        assert d5.syndrome_of(corr) == shot.recorded[-1]
        monkeypatch.setattr(decoder, "BNB_DEFECT_LIMIT", 14)
        assert w_blossom == pytest.approx(w_bnb, abs=1e-9)


def test_decode_large_instances_consistent(d5, rng):
    # above the branch-and-bound limit: syndrome consistency must still hold
    done = 0
    for i in range(60):
        shot = pauli.run_pauli_shot(d5, 0.08, 0.08, 5, pauli.shot_rng(7, 3, i))
        g = build_detection_graph(d5, shot.recorded, 0.08, 0.08)
        if len(g.defects) <= decoder.BNB_DEFECT_LIMIT:
            continue
        corr = mwpm_decode(g)
        assert d5.syndrome_of(corr) == shot.recorded[-1]
        done += 1
    assert done > 5


def test_lookup_table_matches_decoder(d3, rng):
    masks, cls = lookup_table_d3(d3)
    assert masks.shape == (4096,)
    assert masks[0] == 0
    # trivial history decodes to the identity
    assert lookup_decode_d3(d3, _record(d3, [0, 0, 0])).is_identity
    # spot-check random histories against a fresh equal-weight decode
    for _ in range(150):
        h = int(rng.integers(0, 4096))
        recorded = tuple(
            Syndrome(4, (h >> (4 * r)) & 0xF) for r in range(3)
        )
        base = build_detection_graph(d3, recorded, 0.25, 0.25)
        g = DetectionGraph(
            code=d3, t=3, p=base.p, q=base.q, w_s=1.0, w_t=1.0,
            defects=base.defects, recorded=recorded,
        )
        corr = mwpm_decode(g)
        assert corr.bits == masks[h]
        assert d3.class_bit(corr) == cls[h]
        assert d3.syndrome_of(corr) == recorded[-1]


def test_lookup_dimensions_checked(d3, d5):
    with pytest.raises(ValueError):
        lookup_decode_d3(d3, _record(d3, [0, 0]))
    with pytest.raises(ValueError):
        lookup_table_d3(d5)


def test_batch_kernel_matches_object_path(d5):
    p, q, t = 0.035, 0.06, 4  # unequal weights: matchings are tie-free
    n = 150
    batch = pauli.sample_defect_batch(d5, p, q, t, 11, 0, 0, n)
    cls = decoder.decode_batch_class(
        d5, batch.defect_f, batch.defect_r, batch.defect_off, p, q
    )
    for i in range(n):
        shot = pauli.run_pauli_shot(d5, p, q, t, pauli.shot_rng(11, 0, i))
        g = build_detection_graph(d5, shot.recorded, p, q)
        corr = mwpm_decode(g)
        fail_obj = pauli.failure_of(d5, shot, corr)
        fail_batch = bool(cls[i] ^ batch.error_class[i])
        assert fail_obj == fail_batch
