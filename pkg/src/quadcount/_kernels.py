"""Compiled range kernels over CSR adjacency.

Each kernel handles items ``[lo, hi)`` and writes only rows it owns. Kernels that
can detect an inconsistency return the offending vertex, or -1 when clean.
"""

import numba as nb
import numpy as np

jit = nb.njit(nogil=True, cache=True)

# local 3-profile columns
H0, H1E, H1D, H2C, H2E, H3 = range(6)


@jit
def common_counts(indptr, indices, edges, lo, hi, out):
    for e in range(lo, hi):
        u = edges[e, 0]
        v = edges[e, 1]
        i, ie = indptr[u], indptr[u + 1]
        j, je = indptr[v], indptr[v + 1]
        c = 0
        while i < ie and j < je:
            x = indices[i]
            y = indices[j]
            if x == y:
                c += 1
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                j += 1
        out[e] = c


@jit
def local3(indptr, indices, slot_edge, common, degree, n, m, lo, hi, out):
    pairs_without_v = (n - 1) * (n - 2) // 2
    for v in range(lo, hi):
        dv = degree[v]
        s3 = 0
        s2c = 0
        s2e = 0
        s1e = 0
        for k in range(indptr[v], indptr[v + 1]):
            a = indices[k]
            c = common[slot_edge[k]]
            da = degree[a]
            s3 += c
            s2c += dv - c - 1
            s2e += da - c - 1
            s1e += n - (dv + da - c)
        if s3 % 2 != 0 or s2c % 2 != 0:
            return v
        h3 = s3 // 2
        h2c = s2c // 2
        h1d = (m - dv) - h3 - s2e
        h0 = pairs_without_v - s1e - h1d - h2c - s2e - h3
        if h1d < 0 or h0 < 0:
            return v
        out[v, H0] = h0
        out[v, H1E] = s1e
        out[v, H1D] = h1d
        out[v, H2C] = h2c
        out[v, H2E] = s2e
        out[v, H3] = h3
    return -1


@jit
def pivots(indptr, indices, slot_edge, common, degree, n, local, lo, hi, out):
    """Edge-pivot sums E1..E13 into out[:, 0:13]."""
    for v in range(lo, hi):
        dv = degree[v]
        e1 = e2 = e3 = e4 = e5 = e6 = e7 = e9 = e10 = e11 = e12 = e13 = 0
        for k in range(indptr[v], indptr[v + 1]):
            a = indices[k]
            n3 = common[slot_edge[k]]
            da = degree[a]
            n2c = dv - n3 - 1
            n2e = da - n3 - 1
            n1e = n - (dv + da - n3)
            e1 += n1e * (n1e - 1) // 2
            e2 += n2c * (n2c - 1) // 2
            e3 += n3 * (n3 - 1) // 2
            e4 += n1e * n2c
            e5 += n1e * n3
            e6 += n2c * n2e
            e7 += n2c * n3
            e9 += n2e * (n2e - 1) // 2
            e10 += n1e * n2e
            e11 += n2e * n3
            t12 = local[a, H3] - n3
            t13 = local[a, H2E] - n2c
            if t12 < 0 or t13 < 0:
                return v
            e12 += t12
            e13 += t13
        out[v, 0] = e1
        out[v, 1] = e2
        out[v, 2] = e3
        out[v, 3] = e4
        out[v, 4] = e5
        out[v, 5] = e6
        out[v, 6] = e7
        out[v, 7] = local[v, H1D] * dv
        out[v, 8] = e9
        out[v, 9] = e10
        out[v, 10] = e11
        out[v, 11] = e12
        out[v, 12] = e13
    return -1


@jit
def two_hop(indptr, indices, degree, lo, hi, threshold, count, stamp, touched, vec,
            e16, targets, frontier):
    """Merge neighbors' adjacency into (target, #2-paths) counts per vertex.

    Small gathers go through a sorted vector; larger ones through a dense
    counter keyed by vertex id (count must be all-zero on entry and is left
    all-zero). stamp marks the current vertex's neighbors with v + 1.
    """
    for v in range(lo, hi):
        mark = v + 1
        gathered = 0
        for k in range(indptr[v], indptr[v + 1]):
            a = indices[k]
            stamp[a] = mark
            gathered += degree[a] - 1
        s16 = 0
        nt = 0
        hv = 0
        if gathered <= threshold:
            t = 0
            for k in range(indptr[v], indptr[v + 1]):
                a = indices[k]
                for j in range(indptr[a], indptr[a + 1]):
                    p = indices[j]
                    if p != v:
                        vec[t] = p
                        t += 1
            buf = vec[:t]
            buf.sort()
            i = 0
            while i < t:
                p = buf[i]
                j = i
                while j < t and buf[j] == p:
                    j += 1
                c = j - i
                nt += 1
                if stamp[p] != mark:
                    hv += 1
                    s16 += c * (c - 1) // 2
                i = j
        else:
            for k in range(indptr[v], indptr[v + 1]):
                a = indices[k]
                for j in range(indptr[a], indptr[a + 1]):
                    p = indices[j]
                    if p != v:
                        if count[p] == 0:
                            touched[nt] = p
                            nt += 1
                        count[p] += 1
            for i in range(nt):
                p = touched[i]
                c = count[p]
                count[p] = 0
                if stamp[p] != mark:
                    hv += 1
                    s16 += c * (c - 1) // 2
        e16[v] = s16
        targets[v] = nt
        frontier[v] = hv


@jit
def triangle_fill(indptr, indices, tri_ptr, lo, hi, pairs):
    """Pairs (b, c), b < c, of adjacent neighbors of each vertex."""
    for v in range(lo, hi):
        pos = tri_ptr[v]
        vend = indptr[v + 1]
        for k in range(indptr[v], vend):
            a = indices[k]
            i = k + 1
            j, je = indptr[a], indptr[a + 1]
            while i < vend and j < je:
                x = indices[i]
                y = indices[j]
                if x == y:
                    if pos >= tri_ptr[v + 1]:
                        return v
                    pairs[pos, 0] = a
                    pairs[pos, 1] = x
                    pos += 1
                    i += 1
                    j += 1
                elif x < y:
                    i += 1
                else:
                    j += 1
        if pos != tri_ptr[v + 1]:
            return v
    return -1


@jit
def clique_paw(indptr, indices, tri_ptr, pairs, lo, hi, stamp, e14, e15):
    for v in range(lo, hi):
        mark = v + 1
        for k in range(indptr[v], indptr[v + 1]):
            stamp[indices[k]] = mark
        both = 0
        neither = 0
        for k in range(indptr[v], indptr[v + 1]):
            a = indices[k]
            for t in range(tri_ptr[a], tri_ptr[a + 1]):
                b = pairs[t, 0]
                c = pairs[t, 1]
                if b == v or c == v:
                    continue
                inb = stamp[b] == mark
                inc = stamp[c] == mark
                if inb and inc:
                    both += 1
                elif not inb and not inc:
                    neither += 1
        if both % 3 != 0:
            return v
        e14[v] = both
        e15[v] = neither
    return -1


@jit
def neighbor_sum(indptr, indices, values, lo, hi, out):
    for v in range(lo, hi):
        s = 0
        for k in range(indptr[v], indptr[v + 1]):
            s += values[indices[k]]
        out[v] = s


def exact_column_sums(a):
    """Column sums of an int64 matrix as Python ints, without overflow."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a[:, None]
    lo = (a & 0xFFFFFFFF).sum(axis=0)
    hi = (a >> 32).sum(axis=0)
    return [(int(h) << 32) + int(lo_) for h, lo_ in zip(hi, lo)]
