import itertools

import networkx as nx
import numpy as np
import pytest

from quasiqec.blossom import max_weight_matching, min_weight_perfect_matching


def _nx_reference(nv, eu, ev, ew):
    g = nx.Graph()
    g.add_nodes_from(range(nv))
    for u, v, w in zip(eu, ev, ew):
        g.add_edge(int(u), int(v), weight=float(w))
    out = np.full(nv, -1, np.int64)
    for a, b in nx.max_weight_matching(g, maxcardinality=True):
        out[a] = b
        out[b] = a
    return out


def _score(partner, eu, ev, ew):
    wmap = {(min(int(u), int(v)), max(int(u), int(v))): w for u, v, w in zip(eu, ev, ew)}
    card = total = 0
    for v, p in enumerate(partner):
        if p >= 0 and v < p:
            card += 1
            total += wmap[(v, int(p))]
    return card, total


def test_matches_networkx_on_random_graphs(rng):
    for trial in range(120):
        nv = int(rng.integers(2, 13))
        pairs = list(itertools.combinations(range(nv), 2))
        keep = rng.random(len(pairs)) < rng.uniform(0.3, 1.0)
        pairs = [p for p, k in zip(pairs, keep) if k]
        if not pairs:
            continue
        eu = np.array([p[0] for p in pairs])
        ev = np.array([p[1] for p in pairs])
        if trial % 2:
            ew = rng.integers(0, 6, len(pairs)).astype(float)  # degenerate ties
        else:
            ew = rng.uniform(0, 10, len(pairs))
        got = _score(max_weight_matching(nv, eu, ev, ew), eu, ev, ew)
        ref = _score(_nx_reference(nv, eu, ev, ew), eu, ev, ew)
        assert got[0] == ref[0]
        assert got[1] == pytest.approx(ref[1], abs=1e-9)


def test_matches_networkx_on_lattice_like_instances(rng):
    for _ in range(12):
        k = int(rng.integers(4, 18)) * 2
        pts = rng.integers(0, 8, size=(k, 3))
        dist = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
        got = min_weight_perfect_matching(dist)
        g = nx.Graph()
        for i in range(k):
            for j in range(i + 1, k):
                g.add_edge(i, j, weight=dist[i, j])
        ref = nx.min_weight_matching(g)
        w_got = sum(dist[v, p] for v, p in enumerate(got) if v < p)
        w_ref = sum(dist[a, b] for a, b in ref)
        assert w_got == pytest.approx(w_ref, abs=1e-9)


def test_perfect_matching_small_bruteforce(rng):
    def brute(dist):
        k = dist.shape[0]
        best = np.inf
        idx = list(range(k))

        def rec(rem, acc):
            nonlocal best
            if not rem:
                best = min(best, acc)
                return
            i = rem[0]
            for j in rem[1:]:
                rest = tuple(x for x in rem if x not in (i, j))
                rec(rest, acc + dist[i, j])

        rec(tuple(idx), 0.0)
        return best

    for _ in range(30):
        k = int(rng.integers(1, 5)) * 2
        dist = rng.uniform(0, 5, size=(k, k))
        dist = (dist + dist.T) / 2
        np.fill_diagonal(dist, 0)
        partner = min_weight_perfect_matching(dist)
        got = sum(dist[v, p] for v, p in enumerate(partner) if v < p)
        assert got == pytest.approx(brute(dist), abs=1e-9)


def test_degenerate_inputs():
    assert min_weight_perfect_matching(np.zeros((0, 0))).size == 0
    with pytest.raises(ValueError):
        min_weight_perfect_matching(np.zeros((3, 3)))
    out = max_weight_matching(4, np.array([0]), np.array([1]), np.array([2.0]))
    assert out[0] == 1 and out[1] == 0 and out[2] == -1
