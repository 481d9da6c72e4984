"""Immutable undirected simple graphs in compressed adjacency (CSR) form."""

from __future__ import annotations

import bisect
from math import comb
from pathlib import Path

import numpy as np

from .errors import ContractError, InputError, ParseError, SizeError

UINT64_MAX = 2**64 - 1
INT64_MAX = np.iinfo(np.int64).max

# above this degree, Python-level membership queries use a hashed set
DEFAULT_DEGREE_THRESHOLD = 4096


class Graph:
    """Undirected simple graph with dense vertex ids ``0..n-1``.

    ``indptr``/``indices`` hold the sorted neighbor lists, ``edges`` the
    canonical edge list (rows ``u < v``, lexicographically sorted), and
    ``slot_edge[k]`` the edge id of adjacency slot ``k``. ``labels[i]`` is the
    external id vertex ``i`` was read as.
    """

    __slots__ = ("n", "indptr", "indices", "edges", "slot_edge", "degree",
                 "labels", "degree_threshold", "_sets")

    def __init__(self, n, edges, labels=None, degree_threshold=DEFAULT_DEGREE_THRESHOLD):
        n = int(n)
        if n < 0:
            raise ContractError("vertex count must be non-negative")
        edges = _canonical_edges(np.asarray(edges, dtype=np.int64).reshape(-1, 2), n)
        m = len(edges)

        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((dst, src))
        degree = np.bincount(src, minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degree, out=indptr[1:])

        self.n = n
        self.indptr = indptr
        self.indices = dst[order].astype(np.int64)
        self.slot_edge = eid[order].astype(np.int64)
        self.edges = edges
        self.degree = degree
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        if len(self.labels) != n:
            raise ContractError("labels must have one entry per vertex")
        self.degree_threshold = degree_threshold
        self._sets = {}
        for arr in (self.indptr, self.indices, self.slot_edge, self.edges, self.degree, self.labels):
            arr.flags.writeable = False
        _check_size(self)

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u, v):
        if u == v:
            return False
        if self.degree[u] > self.degree[v]:
            u, v = v, u
        if self.degree[u] > self.degree_threshold:
            s = self._sets.get(u)
            if s is None:
                s = self._sets[u] = frozenset(self.neighbors(u).tolist())
            return v in s
        nb = self.neighbors(u)
        i = bisect.bisect_left(nb, v)
        return i < len(nb) and nb[i] == v

    def slot(self, v, a):
        """Adjacency slot of ``a`` in ``v``'s neighbor list, or -1."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        i = lo + int(np.searchsorted(self.indices[lo:hi], a))
        if i < hi and self.indices[i] == a:
            return i
        return -1

    def edge_set(self):
        return {(int(u), int(v)) for u, v in self.edges}

    def labelled_edge_set(self):
        """Edges as sorted pairs of external ids."""
        lab = self.labels
        return {tuple(sorted((int(lab[u]), int(lab[v])))) for u, v in self.edges}

    def adjacency_matrix(self):
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        a[self.edges[:, 0], self.edges[:, 1]] = 1
        a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.edges, other.edges)
                and np.array_equal(self.labels, other.labels))

    __hash__ = None


def _canonical_edges(edges, n):
    if len(edges) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if edges.min() < 0 or edges.max() >= n:
        raise ContractError("edge endpoint outside [0, n)")
    edges = np.sort(edges, axis=1)
    edges = edges[edges[:, 0] != edges[:, 1]]
    return np.unique(edges, axis=0).astype(np.int64)


def _check_size(g):
    # per-vertex accumulators are int64; whole-graph totals use Python ints but
    # are still required to fit an unsigned 64-bit word
    n = g.n
    if n < 4:
        return
    if comb(n, 4) > UINT64_MAX:
        raise SizeError(f"graph with n={n}: C(n,4) overflows a 64-bit unsigned counter")
    dmax = int(g.degree.max()) if n else 0
    if comb(n - 1, 3) > INT64_MAX or max(dmax, 1) * comb(n, 2) > INT64_MAX:
        raise SizeError(f"graph with n={n}, max degree={dmax} overflows 64-bit per-vertex counters")


def from_edges(n, edges, labels=None, **kw):
    return Graph(n, edges, labels=labels, **kw)


def load_graph(text, degree_threshold=DEFAULT_DEGREE_THRESHOLD):
    """Parse a SNAP-style edge list.

    Each non-comment line holds two integer tokens; further tokens (weights,
    timestamps) are ignored. Self-loops are dropped, reversed and repeated pairs
    merged, and external ids remapped to ``0..n-1`` in order of first
    appearance. A vertex seen only in a self-loop is kept as isolated.
    """
    remap = {}
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tok = s.split()
        if len(tok) < 2:
            raise ParseError(f"expected two vertex ids, got {s!r}", line=lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {s!r}", line=lineno) from None
        iu = remap.setdefault(u, len(remap))
        iv = remap.setdefault(v, len(remap))
        pairs.append((iu, iv))
    labels = np.fromiter(remap.keys(), dtype=np.int64, count=len(remap))
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return Graph(len(remap), edges, labels=labels, degree_threshold=degree_threshold)


def read_graph(path, **kw):
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return load_graph(text, **kw)


def write_edge_list(g, path=None):
    lines = [f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges]
    text = "\n".join(lines) + ("\n" if lines else "")
    if path is not None:
        Path(path).write_text(text)
    return text


def complement_neighbor_count(g, v, a):
    """Vertices adjacent to neither ``v`` nor ``a`` for the edge ``va``."""
    if not g.has_edge(v, a):
        raise ContractError(f"({v}, {a}) is not an edge")
    common = np.intersect1d(g.neighbors(v), g.neighbors(a), assume_unique=True).size
    return g.n - (int(g.degree[v]) + int(g.degree[a]) - common)


# small graph constructors used by tests and the CLI


def house_graph():
    """The 5-vertex example: 4-cycle 0-1-4-3 plus vertex 2 closing a triangle on edge 01."""
    return Graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (3, 4)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)] if n >= 3 else [])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def empty_graph(n):
    return Graph(n, [])


def disjoint_union(*graphs):
    off = 0
    parts = []
    for g in graphs:
        parts.append(g.edges + off)
        off += g.n
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    return Graph(off, edges)


def erdos_renyi(n, p, seed=0):
    """G(n, p). Dense sampling for small n, pair sampling with dedup above."""
    rng = np.random.default_rng(seed)
    if n <= 5000:
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(len(iu)) < p
        return Graph(n, np.stack([iu[keep], ju[keep]], axis=1))
    total = n * (n - 1) // 2
    m = rng.binomial(total, p)
    # oversample to absorb self-loops and duplicates, then trim to m distinct pairs
    k = int(m * 1.05) + 16
    u = rng.integers(0, n, size=k)
    v = rng.integers(0, n, size=k)
    e = np.sort(np.stack([u, v], axis=1), axis=1)
    e = e[e[:, 0] != e[:, 1]]
    _, first = np.unique(e, axis=0, return_index=True)
    e = e[np.sort(first)][:m]
    return Graph(n, e)


def tree_with_shortcuts(children, grandchildren):
    """Root, ``children`` hubs, ``grandchildren`` leaves per hub; every leaf also
    links to every other hub. Many distinct 2-paths share endpoints."""
    root = 0
    hubs = list(range(1, children + 1))
    edges = [(root, h) for h in hubs]
    nxt = children + 1
    leaves = []
    for h in hubs:
        for _ in range(grandchildren):
            edges.append((h, nxt))
            leaves.append(nxt)
            nxt += 1
    for leaf in leaves:
        for h in hubs:
            edges.append((h, leaf))
    return Graph(nxt, edges)
