"""Brute-force ground truth by enumerating every 3- and 4-subset.

Deliberately shares no classification code with the counting pipeline. The
64-entry lookup table is derived at import time from degree sequences and
connected components of each edge pattern.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numba as nb
import numpy as np

from .codes import ORBIT_INDEX, ORBITS3
from .errors import SizeError

DEFAULT_GUARD = 10**9

# bit i of a 4-vertex pattern is the pair PAIRS4[i] of positions (a, b, c, d)
PAIRS4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIRS3 = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class QuadClass:
    type: int
    orbits: tuple

    @property
    def name(self):
        return f"F{self.type}"


def _components(k, edges):
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(k)})


# (edge count, descending degree sequence) -> (type, components, {degree: orbit})
_SHAPES = {
    (0, (0, 0, 0, 0)): (0, 4, {0: "F0"}),
    (1, (1, 1, 0, 0)): (1, 3, {1: "F1_E", 0: "F1_I"}),
    (2, (1, 1, 1, 1)): (2, 2, {1: "F2"}),
    (2, (2, 1, 1, 0)): (3, 2, {1: "F3_E", 2: "F3_C", 0: "F3_I"}),
    (3, (2, 2, 1, 1)): (4, 1, {1: "F4_E", 2: "F4_M"}),
    (3, (2, 2, 2, 0)): (5, 2, {2: "F5_T", 0: "F5_I"}),
    (3, (3, 1, 1, 1)): (6, 1, {1: "F6_L", 3: "F6_H"}),
    (4, (2, 2, 2, 2)): (7, 1, {2: "F7"}),
    (4, (3, 2, 2, 1)): (8, 1, {1: "F8_P", 3: "F8_H", 2: "F8_T"}),
    (5, (3, 3, 2, 2)): (9, 1, {2: "F9_2", 3: "F9_3"}),
    (6, (3, 3, 3, 3)): (10, 1, {3: "F10"}),
}


def _classify_mask(mask):
    edges = [PAIRS4[i] for i in range(6) if mask >> i & 1]
    deg = [0] * 4
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    key = (len(edges), tuple(sorted(deg, reverse=True)))
    ty, ncomp, roles = _SHAPES[key]
    if _components(4, edges) != ncomp:
        raise AssertionError(f"pattern {mask:06b}: unexpected connectivity")
    return QuadClass(ty, tuple(roles[d] for d in deg))


TABLE = tuple(_classify_mask(mask) for mask in range(64))
TABLE_TYPE = np.array([c.type for c in TABLE], dtype=np.int64)
TABLE_ORBIT = np.array([[ORBIT_INDEX[o] for o in c.orbits] for c in TABLE], dtype=np.int64)


def _classify3(mask):
    ne = bin(mask).count("1")
    deg = [0, 0, 0]
    for i, (a, b) in enumerate(PAIRS3):
        if mask >> i & 1:
            deg[a] += 1
            deg[b] += 1
    if ne == 0:
        roles = ["H0"] * 3
    elif ne == 1:
        roles = ["H1e" if d else "H1d" for d in deg]
    elif ne == 2:
        roles = ["H2c" if d == 2 else "H2e" for d in deg]
    else:
        roles = ["H3"] * 3
    return ne, [ORBITS3.index(r) for r in roles]


TABLE3_TYPE = np.array([_classify3(m)[0] for m in range(8)], dtype=np.int64)
TABLE3_ORBIT = np.array([_classify3(m)[1] for m in range(8)], dtype=np.int64)


def classify_quadruple(bits):
    """Type and per-position orbit of a 4-vertex pattern.

    ``bits`` are six booleans for the pairs (ab, ac, ad, bc, bd, cd), or the
    equivalent 6-bit integer.
    """
    if not isinstance(bits, (int, np.integer)):
        bits = sum(1 << i for i, b in enumerate(bits) if b)
    return TABLE[int(bits)]


@nb.njit(nogil=True, cache=True)
def _census4(adj, eid, ttype, torbit, starts, orbits, types, edge_counts, track):
    n = adj.shape[0]
    q = np.empty(4, dtype=np.int64)
    for a in starts:
        q[0] = a
        for b in range(a + 1, n):
            q[1] = b
            ab = adj[a, b]
            for c in range(b + 1, n):
                q[2] = c
                m3 = ab | (adj[a, c] << 1) | (adj[b, c] << 3)
                for d in range(c + 1, n):
                    q[3] = d
                    mask = m3 | (adj[a, d] << 2) | (adj[b, d] << 4) | (adj[c, d] << 5)
                    t = ttype[mask]
                    types[t] += 1
                    orbits[a, torbit[mask, 0]] += 1
                    orbits[b, torbit[mask, 1]] += 1
                    orbits[c, torbit[mask, 2]] += 1
                    orbits[d, torbit[mask, 3]] += 1
                    if track and mask != 0:
                        for i in range(6):
                            if (mask >> i) & 1:
                                x, y = _pair(i)
                                edge_counts[eid[q[x], q[y]], t] += 1


@nb.njit(nogil=True, cache=True)
def _pair(i):
    if i == 0:
        return 0, 1
    if i == 1:
        return 0, 2
    if i == 2:
        return 0, 3
    if i == 3:
        return 1, 2
    if i == 4:
        return 1, 3
    return 2, 3


@nb.njit(nogil=True, cache=True)
def _census3(adj, ttype, torbit, orbits, types):
    n = adj.shape[0]
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                mask = adj[a, b] | (adj[a, c] << 1) | (adj[b, c] << 2)
                types[ttype[mask]] += 1
                orbits[a, torbit[mask, 0]] += 1
                orbits[b, torbit[mask, 1]] += 1
                orbits[c, torbit[mask, 2]] += 1


@dataclass
class OracleResult:
    orbits: np.ndarray        # (n, 20)
    profile: np.ndarray       # (n, 11)
    global4: list
    local3: np.ndarray        # (n, 6)
    global3: list
    edge_type_counts: np.ndarray | None  # (m, 11)


def brute_force_profiles(g, guard=DEFAULT_GUARD, edge_counts=False, workers=1):
    """Classify every 4-subset (and 3-subset) of ``g``."""
    n = g.n
    if comb(n, 4) > guard:
        raise SizeError(f"C({n},4) = {comb(n, 4)} quadruples exceeds the guard {guard}")
    adj = g.adjacency_matrix().astype(np.int64)
    eid = np.full((n, n), -1, dtype=np.int64)
    if g.m:
        eid[g.edges[:, 0], g.edges[:, 1]] = np.arange(g.m)
        eid[g.edges[:, 1], g.edges[:, 0]] = np.arange(g.m)

    workers = max(1, int(workers))
    # interleave start vertices so low ids (most work) spread across workers
    parts = [np.arange(w, n, workers, dtype=np.int64) for w in range(workers)]

    def run(starts):
        orb = np.zeros((n, 20), dtype=np.int64)
        ty = np.zeros(11, dtype=np.int64)
        ec = np.zeros((g.m if edge_counts else 0, 11), dtype=np.int64)
        _census4(adj, eid, TABLE_TYPE, TABLE_ORBIT, starts, orb, ty, ec, edge_counts)
        return orb, ty, ec

    if workers == 1:
        results = [run(parts[0])]
    else:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, parts))
    orbits = sum(r[0] for r in results)
    types = sum(r[1] for r in results)
    ec = sum(r[2] for r in results) if edge_counts else None

    local3 = np.zeros((n, 6), dtype=np.int64)
    types3 = np.zeros(4, dtype=np.int64)
    _census3(adj, TABLE3_TYPE, TABLE3_ORBIT, local3, types3)

    profile = np.zeros((n, 11), dtype=np.int64)
    for i, c in enumerate(TABLE_ORBIT_TYPES):
        profile[:, c] += orbits[:, i]
    return OracleResult(orbits=orbits, profile=profile, global4=[int(x) for x in types],
                        local3=local3, global3=[int(x) for x in types3],
                        edge_type_counts=ec)


# orbit column -> type, derived from the table rather than from orbit names
TABLE_ORBIT_TYPES = [0] * 20
for _mask in range(64):
    for _o in TABLE_ORBIT[_mask]:
        TABLE_ORBIT_TYPES[_o] = int(TABLE_TYPE[_mask])


def sampling_transition_matrix(p, size=4):
    """P(sampled type = i | original type = j) by enumerating edge subsets.

    Independent of the closed-form sampling matrices; ``size`` 3 or 4.
    """
    if size == 4:
        types, nmask, ntypes = TABLE_TYPE, 64, 11
    else:
        types, nmask, ntypes = TABLE3_TYPE, 8, 4
    rep = {}
    for mask in range(nmask):
        rep.setdefault(int(types[mask]), mask)
    H = np.zeros((ntypes, ntypes))
    for j, mask in rep.items():
        bits = [i for i in range(6 if size == 4 else 3) if mask >> i & 1]
        for keep in itertools.product((0, 1), repeat=len(bits)):
            sub = sum(1 << b for b, k in zip(bits, keep) if k)
            kept = sum(keep)
            H[int(types[sub]), j] += p**kept * (1 - p) ** (len(bits) - kept)
    return H


def sampled_type_counts(g, p, seeds, guard=10**6):
    """Global 4-profile of ``sample_edges(g, p, s)`` for every seed s, by enumeration.

    Vectorized over seeds: each quadruple's six pair indicators are looked up
    in the per-seed keep masks. Returns an int64 array (len(seeds), 11).
    """
    from .sparsify import keep_mask

    n = g.n
    if comb(n, 4) > guard:
        raise SizeError(f"C({n},4) = {comb(n, 4)} quadruples exceeds the guard {guard}")
    quads = np.array(list(itertools.combinations(range(n), 4)), dtype=np.int64).reshape(-1, 4)
    eid = np.full((n, n), -1, dtype=np.int64)
    if g.m:
        eid[g.edges[:, 0], g.edges[:, 1]] = np.arange(g.m)
        eid[g.edges[:, 1], g.edges[:, 0]] = np.arange(g.m)
    pair_eid = np.stack([eid[quads[:, x], quads[:, y]] for x, y in PAIRS4], axis=1)
    out = np.zeros((len(seeds), 11), dtype=np.int64)
    for row, s in enumerate(seeds):
        keep = np.append(keep_mask(g, p, s), False)  # index -1 -> never kept
        bits = keep[pair_eid].astype(np.int64)
        masks = (bits << np.arange(6)).sum(axis=1)
        out[row] = np.bincount(TABLE_TYPE[masks], minlength=11)
    return out
