"""Edge scalars, local 3-profiles and the global 3-profile."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels as K
from .errors import ConsistencyError

H0, H1E, H1D, H2C, H2E, H3 = range(6)


@dataclass(frozen=True)
class EdgeScalars:
    """Per ordered edge counts, aligned with the graph's adjacency slots.

    For slot k holding (v, a): ``n1e`` vertices adjacent to neither,
    ``n2c`` neighbors of v not adjacent to a, ``n2e`` neighbors of a not
    adjacent to v, ``n3`` common neighbors. ``common`` is ``n3`` per
    undirected edge id.
    """

    graph: object
    common: np.ndarray
    n1e: np.ndarray
    n2c: np.ndarray
    n2e: np.ndarray
    n3: np.ndarray

    def get(self, v, a):
        k = self.graph.slot(v, a)
        if k < 0:
            raise KeyError((v, a))
        return int(self.n1e[k]), int(self.n2c[k]), int(self.n2e[k]), int(self.n3[k])


@dataclass(frozen=True)
class Global3Profile:
    n0: int
    n1: int
    n2: int
    n3: int

    def as_list(self):
        return [self.n0, self.n1, self.n2, self.n3]

    def __iter__(self):
        return iter(self.as_list())


def edge_common(g, lo=0, hi=None, out=None):
    hi = g.m if hi is None else hi
    if out is None:
        out = np.zeros(g.m, dtype=np.int64)
    K.common_counts(g.indptr, g.indices, g.edges, lo, hi, out)
    return out


def compute_edge_scalars(g):
    common = edge_common(g)
    src = np.repeat(np.arange(g.n), g.degree)
    dst = g.indices
    n3 = common[g.slot_edge]
    dv = g.degree[src]
    da = g.degree[dst]
    return EdgeScalars(
        graph=g,
        common=common,
        n1e=g.n - (dv + da - n3),
        n2c=dv - n3 - 1,
        n2e=da - n3 - 1,
        n3=n3,
    )


def local3_range(g, common, lo, hi, out):
    bad = K.local3(g.indptr, g.indices, g.slot_edge, common, g.degree, g.n, g.m, lo, hi, out)
    if bad >= 0:
        raise ConsistencyError(f"local 3-profile parity/sign check failed at vertex {bad}")


def local_3_profiles(g, s=None):
    """Per-vertex counts [H0, H1e, H1d, H2c, H2e, H3] as an (n, 6) int64 array."""
    common = edge_common(g) if s is None else s.common
    out = np.zeros((g.n, 6), dtype=np.int64)
    local3_range(g, common, 0, g.n, out)
    return out


def global_3_profile(local, n=None):
    """Aggregate local 3-profiles, checking both ways of counting edges and wedges."""
    n = len(local) if n is None else n
    return global3_from_sums(n, K.exact_column_sums(local) if len(local) else [0] * 6)


def global3_from_sums(n, s):
    if s[H3] % 3 or s[H1E] % 2 or s[H2E] % 2:
        raise ConsistencyError("local 3-profile sums are not divisible by orbit sizes")
    n3 = s[H3] // 3
    n2 = s[H2C]
    n1 = s[H1E] // 2
    if n1 != s[H1D] or n2 != s[H2E] // 2:
        raise ConsistencyError(f"global 3-profile cross-check failed: n1 {n1} vs {s[H1D]}, "
                               f"n2 {n2} vs {s[H2E] // 2}")
    n0 = comb(n, 3) - n1 - n2 - n3
    if n0 < 0 or s[H0] != 3 * n0:
        raise ConsistencyError("global 3-profile empty-triple count inconsistent")
    return Global3Profile(n0, n1, n2, n3)
