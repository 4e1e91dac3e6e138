"""Exact maximum-weight matching on dense arrays, compiled with numba.

Array port of the classic endpoint-indexed primal-dual blossom algorithm
(Galil 1986), the same algorithm behind networkx.max_weight_matching,
which serves as the reference implementation in the tests.  Runs in
O(n^3); always in maximum-cardinality mode, which is what reductions of
minimum-weight perfect matching need.

The port replaces the reference version's per-blossom Python lists with
fixed-width 2D arrays plus counts, and its recursive blossom traversals
with explicit stacks.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _solve(nv, eu, ev, ew, nbe_indptr, nbe_data):  # pragma: no cover - jitted
    m = eu.shape[0]
    nb = 2 * nv

    maxweight = 0.0
    for k in range(m):
        if ew[k] > maxweight:
            maxweight = ew[k]

    mate = np.full(nv, -1, np.int64)  # remote endpoint or -1
    label = np.zeros(nb, np.int64)
    labelend = np.full(nb, -1, np.int64)
    inblossom = np.arange(nv)
    blossomparent = np.full(nb, -1, np.int64)
    blossombase = np.full(nb, -1, np.int64)
    blossombase[:nv] = np.arange(nv)
    bestedge = np.full(nb, -1, np.int64)
    dualvar = np.zeros(nb, np.float64)
    dualvar[:nv] = maxweight
    allowedge = np.zeros(m, np.bool_)

    # children / connecting endpoints of non-trivial blossoms, row-indexed
    # by blossom id; -1 count marks "no list" (trivial or unused)
    width = nv + 2
    childs = np.full((nb, width), -1, np.int64)
    endps = np.full((nb, width), -1, np.int64)
    nchilds = np.full(nb, -1, np.int64)
    bestedges = np.full((nb, nv + 1), -1, np.int64)
    nbestedges = np.full(nb, -1, np.int64)

    unused = np.arange(nv, nb)
    n_unused_box = np.zeros(1, np.int64)
    n_unused_box[0] = nv

    queue = np.zeros(nv * nv + 8 * nv + 16, np.int64)
    qlen_box = np.zeros(1, np.int64)

    leaves_buf = np.zeros(nv, np.int64)
    leaves_stack = np.zeros(nb, np.int64)
    scan_path = np.zeros(nb, np.int64)
    bestedgeto = np.full(nb, -1, np.int64)

    # frame stacks for the iterative blossom augment
    fr_b = np.zeros(nv + 2, np.int64)
    fr_v = np.zeros(nv + 2, np.int64)
    fr_t = np.zeros(nv + 2, np.int64)
    fr_i = np.zeros(nv + 2, np.int64)
    fr_j = np.zeros(nv + 2, np.int64)
    fr_jstep = np.zeros(nv + 2, np.int64)
    fr_trick = np.zeros(nv + 2, np.int64)
    fr_p = np.zeros(nv + 2, np.int64)
    fr_phase = np.zeros(nv + 2, np.int64)

    expand_stack = np.zeros(nb, np.int64)

    def endpoint(p):
        return eu[p >> 1] if (p & 1) == 0 else ev[p >> 1]

    def slack(k):
        return dualvar[eu[k]] + dualvar[ev[k]] - 2.0 * ew[k]

    def blossom_leaves(b):
        # fill leaves_buf with the vertices of blossom b, return count
        cnt = 0
        sp = 0
        leaves_stack[sp] = b
        sp += 1
        while sp > 0:
            sp -= 1
            t = leaves_stack[sp]
            if t < nv:
                leaves_buf[cnt] = t
                cnt += 1
            else:
                for i in range(nchilds[t]):
                    leaves_stack[sp] = childs[t, i]
                    sp += 1
        return cnt

    def assign_label(w0, t0, p0):
        w, t, p = w0, t0, p0
        while True:
            b = inblossom[w]
            label[w] = t
            label[b] = t
            labelend[w] = p
            labelend[b] = p
            bestedge[w] = -1
            bestedge[b] = -1
            if t == 1:
                cnt = blossom_leaves(b)
                if qlen_box[0] + cnt > queue.shape[0]:
                    raise RuntimeError("matching queue overflow")
                for i in range(cnt):
                    queue[qlen_box[0]] = leaves_buf[i]
                    qlen_box[0] += 1
                return
            # T label: the base's mate becomes S
            base = blossombase[b]
            w = endpoint(mate[base])
            t = 1
            p = mate[base] ^ 1

    def scan_blossom(v0, w0):
        v, w = v0, w0
        pcnt = 0
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            scan_path[pcnt] = b
            pcnt += 1
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint(labelend[b])
                b = inblossom[v]
                v = endpoint(labelend[b])
            if w != -1:
                tmp = v
                v = w
                w = tmp
        for i in range(pcnt):
            label[scan_path[i]] = 1
        return base

    def augment_blossom(b0, v0):
        sp = 0
        fr_b[sp] = b0
        fr_v[sp] = v0
        fr_phase[sp] = 0
        sp += 1
        while sp > 0:
            f = sp - 1
            b = fr_b[f]
            v = fr_v[f]
            phase = fr_phase[f]
            if phase == 0:
                t = v
                while blossomparent[t] != b:
                    t = blossomparent[t]
                fr_t[f] = t
                fr_phase[f] = 1
                if t >= nv:
                    fr_b[sp] = t
                    fr_v[sp] = v
                    fr_phase[sp] = 0
                    sp += 1
                continue
            if phase == 1:
                t = fr_t[f]
                cnt = nchilds[b]
                i = 0
                for ci in range(cnt):
                    if childs[b, ci] == t:
                        i = ci
                        break
                j = i
                if i & 1:
                    j -= cnt
                    jstep = 1
                    trick = 0
                else:
                    jstep = -1
                    trick = 1
                fr_i[f] = i
                fr_j[f] = j
                fr_jstep[f] = jstep
                fr_trick[f] = trick
                fr_phase[f] = 2
                continue
            cnt = nchilds[b]
            jstep = fr_jstep[f]
            trick = fr_trick[f]
            if phase == 2:
                j = fr_j[f]
                if j == 0:
                    # rotate childs so the entry child becomes the base
                    i = fr_i[f]
                    if i > 0:
                        tmp_c = childs[b, :cnt].copy()
                        tmp_e = endps[b, :cnt].copy()
                        for ci in range(cnt):
                            childs[b, ci] = tmp_c[(ci + i) % cnt]
                            endps[b, ci] = tmp_e[(ci + i) % cnt]
                    blossombase[b] = blossombase[childs[b, 0]]
                    sp -= 1
                    continue
                j += jstep
                fr_j[f] = j
                t = childs[b, j % cnt]
                p = endps[b, (j - trick) % cnt] ^ trick
                fr_p[f] = p
                fr_phase[f] = 3
                if t >= nv:
                    fr_b[sp] = t
                    fr_v[sp] = endpoint(p)
                    fr_phase[sp] = 0
                    sp += 1
                continue
            if phase == 3:
                j = fr_j[f] + jstep
                fr_j[f] = j
                t = childs[b, j % cnt]
                p = fr_p[f]
                fr_phase[f] = 4
                if t >= nv:
                    fr_b[sp] = t
                    fr_v[sp] = endpoint(p ^ 1)
                    fr_phase[sp] = 0
                    sp += 1
                continue
            # phase 4: match the connecting edge, loop back
            p = fr_p[f]
            mate[endpoint(p)] = p ^ 1
            mate[endpoint(p ^ 1)] = p
            fr_phase[f] = 2

    def augment_matching(k):
        for side in range(2):
            if side == 0:
                s = eu[k]
                p = 2 * k + 1
            else:
                s = ev[k]
                p = 2 * k
            while True:
                bs = inblossom[s]
                if bs >= nv:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint(labelend[bs])
                bt = inblossom[t]
                s = endpoint(labelend[bt])
                j = endpoint(labelend[bt] ^ 1)
                if bt >= nv:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    def add_blossom(base, k):
        v = eu[k]
        w = ev[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unused[n_unused_box[0] - 1]
        n_unused_box[0] -= 1
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        # trace back from v, collect the path to the base
        cnt = 0
        while bv != bb:
            blossomparent[bv] = b
            childs[b, cnt] = bv
            endps[b, cnt] = labelend[bv]
            cnt += 1
            v = endpoint(labelend[bv])
            bv = inblossom[v]
        childs[b, cnt] = bb
        cnt += 1
        # reverse
        for ci in range(cnt // 2):
            tmp = childs[b, ci]
            childs[b, ci] = childs[b, cnt - 1 - ci]
            childs[b, cnt - 1 - ci] = tmp
        for ci in range((cnt - 1) // 2):
            tmp = endps[b, ci]
            endps[b, ci] = endps[b, cnt - 2 - ci]
            endps[b, cnt - 2 - ci] = tmp
        endps[b, cnt - 1] = 2 * k
        # trace back from w
        while bw != bb:
            blossomparent[bw] = b
            childs[b, cnt] = bw
            endps[b, cnt] = labelend[bw] ^ 1
            cnt += 1
            w = endpoint(labelend[bw])
            bw = inblossom[w]
        nchilds[b] = cnt
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0.0
        lcnt = blossom_leaves(b)
        for i in range(lcnt):
            lv = leaves_buf[i]
            if label[inblossom[lv]] == 2:
                queue[qlen_box[0]] = lv
                qlen_box[0] += 1
            inblossom[lv] = b
        # compute the blossom's least-slack edges to other S-blossoms
        for i in range(nb):
            bestedgeto[i] = -1
        for ci in range(cnt):
            bv = childs[b, ci]
            if bv < nv or nbestedges[bv] < 0:
                # walk all edges of this child's leaves
                lc = blossom_leaves(bv)
                for li in range(lc):
                    lv = leaves_buf[li]
                    for pi in range(nbe_indptr[lv], nbe_indptr[lv + 1]):
                        ek = nbe_data[pi] >> 1
                        i2 = eu[ek]
                        j2 = ev[ek]
                        if inblossom[j2] == b:
                            j2 = i2
                        bj = inblossom[j2]
                        if bj != b and label[bj] == 1:
                            if bestedgeto[bj] == -1 or slack(ek) < slack(bestedgeto[bj]):
                                bestedgeto[bj] = ek
            else:
                for ei in range(nbestedges[bv]):
                    ek = bestedges[bv, ei]
                    i2 = eu[ek]
                    j2 = ev[ek]
                    if inblossom[j2] == b:
                        j2 = i2
                    bj = inblossom[j2]
                    if bj != b and label[bj] == 1:
                        if bestedgeto[bj] == -1 or slack(ek) < slack(bestedgeto[bj]):
                            bestedgeto[bj] = ek
            nbestedges[bv] = -1
            bestedge[bv] = -1
        ne = 0
        for i in range(nb):
            if bestedgeto[i] != -1:
                bestedges[b, ne] = bestedgeto[i]
                ne += 1
        nbestedges[b] = ne
        bestedge[b] = -1
        for ei in range(ne):
            ek = bestedges[b, ei]
            if bestedge[b] == -1 or slack(ek) < slack(bestedge[b]):
                bestedge[b] = ek

    def expand_blossom(b0, endstage):
        sp = 0
        expand_stack[sp] = b0
        sp += 1
        while sp > 0:
            sp -= 1
            b = expand_stack[sp]
            cnt = nchilds[b]
            for ci in range(cnt):
                s = childs[b, ci]
                blossomparent[s] = -1
                if s < nv:
                    inblossom[s] = s
                elif endstage and dualvar[s] == 0.0:
                    expand_stack[sp] = s
                    sp += 1
                else:
                    lc = blossom_leaves(s)
                    for li in range(lc):
                        inblossom[leaves_buf[li]] = s
            if (not endstage) and label[b] == 2:
                # relabel the path from the entry child to the base
                entrychild = inblossom[endpoint(labelend[b] ^ 1)]
                j = 0
                for ci in range(cnt):
                    if childs[b, ci] == entrychild:
                        j = ci
                        break
                if j & 1:
                    j -= cnt
                    jstep = 1
                    trick = 0
                else:
                    jstep = -1
                    trick = 1
                p = labelend[b]
                while j != 0:
                    label[endpoint(p ^ 1)] = 0
                    label[endpoint(endps[b, (j - trick) % cnt] ^ trick ^ 1)] = 0
                    assign_label(endpoint(p ^ 1), 2, p)
                    allowedge[endps[b, (j - trick) % cnt] >> 1] = True
                    j += jstep
                    p = endps[b, (j - trick) % cnt] ^ trick
                    allowedge[p >> 1] = True
                    j += jstep
                bv = childs[b, j % cnt]
                label[endpoint(p ^ 1)] = 2
                label[bv] = 2
                labelend[endpoint(p ^ 1)] = p
                labelend[bv] = p
                bestedge[bv] = -1
                j += jstep
                while childs[b, j % cnt] != entrychild:
                    bv = childs[b, j % cnt]
                    if label[bv] == 1:
                        j += jstep
                        continue
                    lc = blossom_leaves(bv)
                    lv = -1
                    for li in range(lc):
                        lv = leaves_buf[li]
                        if label[lv] != 0:
                            break
                    if lv >= 0 and label[lv] != 0:
                        label[lv] = 0
                        label[endpoint(mate[blossombase[bv]])] = 0
                        assign_label(lv, 2, labelend[lv])
                    j += jstep
            label[b] = 0
            labelend[b] = -1
            nchilds[b] = -1
            blossombase[b] = -1
            nbestedges[b] = -1
            bestedge[b] = -1
            blossomparent[b] = -1
            unused[n_unused_box[0]] = b
            n_unused_box[0] += 1

    # main loop: one stage per augmentation
    for _stage in range(nv):
        for i in range(nb):
            label[i] = 0
            labelend[i] = -1
            bestedge[i] = -1
            nbestedges[i] = -1
        for k in range(m):
            allowedge[k] = False
        qlen_box[0] = 0
        for v in range(nv):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)
        augmented = False
        while True:
            while qlen_box[0] > 0 and not augmented:
                qlen_box[0] -= 1
                v = queue[qlen_box[0]]
                for pi in range(nbe_indptr[v], nbe_indptr[v + 1]):
                    p = nbe_data[pi]
                    k = p >> 1
                    w = endpoint(p)
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0.0
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0.0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # no augmenting path: compute the dual adjustment
            deltatype = -1
            delta = 0.0
            deltaedge = -1
            deltablossom = -1
            for v in range(nv):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(nb):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = 0.5 * slack(bestedge[b])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nv, nb):
                if (
                    blossombase[b] >= 0
                    and blossomparent[b] == -1
                    and label[b] == 2
                    and (deltatype == -1 or dualvar[b] < delta)
                ):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                # max-cardinality optimum reached
                deltatype = 1
                mind = dualvar[0]
                for v in range(1, nv):
                    if dualvar[v] < mind:
                        mind = dualvar[v]
                delta = mind if mind > 0.0 else 0.0

            for v in range(nv):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nv, nb):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i2 = eu[deltaedge]
                if label[inblossom[i2]] == 0:
                    i2 = ev[deltaedge]
                queue[qlen_box[0]] = i2
                qlen_box[0] += 1
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue[qlen_box[0]] = eu[deltaedge]
                qlen_box[0] += 1
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break

        # end of stage: expand S-blossoms with zero dual
        for b in range(nv, nb):
            if (
                blossombase[b] >= 0
                and blossomparent[b] == -1
                and label[b] == 1
                and dualvar[b] == 0.0
            ):
                expand_blossom(b, True)

    out = np.full(nv, -1, np.int64)
    for v in range(nv):
        if mate[v] >= 0:
            out[v] = endpoint(mate[v])
    return out


def max_weight_matching(nv: int, edges_u, edges_v, weights) -> np.ndarray:
    """Maximum-cardinality maximum-weight matching; returns partner per vertex.

    Vertices are 0..nv-1; unmatched entries are -1.  Edge lists must not
    contain duplicates or self-loops.
    """
    eu = np.ascontiguousarray(edges_u, dtype=np.int64)
    ev = np.ascontiguousarray(edges_v, dtype=np.int64)
    ew = np.ascontiguousarray(weights, dtype=np.float64)
    m = eu.shape[0]
    if m == 0:
        return np.full(nv, -1, np.int64)
    deg = np.zeros(nv + 1, np.int64)
    for k in range(m):
        deg[eu[k] + 1] += 1
        deg[ev[k] + 1] += 1
    indptr = np.cumsum(deg)
    data = np.zeros(2 * m, np.int64)
    fill = indptr[:-1].copy()
    for k in range(m):
        u, v = eu[k], ev[k]
        data[fill[u]] = 2 * k + 1  # endpoint pointing at v
        fill[u] += 1
        data[fill[v]] = 2 * k
        fill[v] += 1
    return _solve(nv, eu, ev, ew, indptr, data)


def min_weight_perfect_matching(dist: np.ndarray) -> np.ndarray:
    """Exact minimum-weight perfect matching of a complete even graph.

    dist is a symmetric (k, k) array; returns the partner of each vertex.
    Reduces to maximum-cardinality max-weight matching on inverted weights.
    """
    k = dist.shape[0]
    if k % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if k == 0:
        return np.zeros(0, np.int64)
    iu, iv = np.triu_indices(k, 1)
    w = dist[iu, iv]
    partner = max_weight_matching(k, iu, iv, w.max() + 1.0 - w)
    if np.any(partner < 0):
        raise RuntimeError("matching is not perfect")
    return partner
