"""Exact local and global 4-profiles from edge pivots, triangle lists and
two-hop histograms.

Per vertex v the pipeline accumulates 16 sums E1..E16, each a fixed integer
combination of v's 16 connected-role orbit counts, solves that square system
exactly, and then recovers the four orbits where v touches no edge of the
subgraph (F0, F1_I, F3_I, F5_I) from the global 3-profile: every 3-subset not
containing v extends to exactly one 4-subset with v.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels as K
from .codes import CONNECTED_ORBITS, ORBIT_INDEX, ORBIT_TYPE, ORBITS4
from .engine import Phase, PhasePlan, add_merge, histogram_merge, run_plan
from .errors import ConsistencyError
from .three import H0, H1D, H1E, H2C, H2E, H3, Global3Profile, edge_common, global3_from_sums, local3_range

DEFAULT_HIST_THRESHOLD = 8192

# E_i = sum_j SYSTEM[i][j] * orbit_j, orbits in CONNECTED_ORBITS order
_SYSTEM_ROWS = {
    "E1": {"F1_E": 1, "F2": 1},
    "E2": {"F6_H": 3, "F8_H": 1},
    "E3": {"F9_3": 1, "F10": 3},
    "E4": {"F3_C": 2, "F4_M": 1},
    "E5": {"F5_T": 2, "F8_T": 1},
    "E6": {"F4_M": 1, "F7": 2},
    "E7": {"F8_H": 2, "F9_3": 2},
    "E8": {"F2": 1, "F4_E": 1, "F8_P": 1},
    "E9": {"F6_L": 1, "F8_P": 1},
    "E10": {"F3_E": 1, "F4_E": 1},
    "E11": {"F8_T": 1, "F9_2": 2},
    "E12": {"F8_P": 1, "F9_2": 2, "F10": 3},
    "E13": {"F4_E": 1, "F7": 2, "F8_T": 1, "F9_3": 2},
    "E14": {"F10": 3},
    "E15": {"F8_P": 1},
    "E16": {"F7": 1, "F9_2": 1},
}
SYSTEM = np.array([[row.get(o, 0) for o in CONNECTED_ORBITS] for row in _SYSTEM_ROWS.values()],
                  dtype=np.int64)


def _fraction_inverse(mat):
    n = len(mat)
    a = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det, [row[n:] for row in a]


def system_inverse():
    """Exact determinant and rational inverse of the 16x16 orbit system."""
    det, inv = _fraction_inverse(SYSTEM.tolist())
    if det == 0:
        raise ConsistencyError("orbit equation system is singular")
    return det, inv


@dataclass(frozen=True)
class TriangleList:
    """Delta(v) for all v in CSR form: pairs[ptr[v]:ptr[v+1]] are (b, c), b < c."""

    ptr: np.ndarray
    pairs: np.ndarray

    def of(self, v):
        return [tuple(map(int, p)) for p in self.pairs[self.ptr[v]:self.ptr[v + 1]]]


@dataclass(frozen=True)
class GlobalProfile:
    n: int
    m: int
    N: tuple
    orbit_sums: tuple
    checks: dict = field(default_factory=dict)

    def as_list(self):
        return list(self.N)


# ---------------------------------------------------------------- accumulators


def pivot_accumulators(g, common=None, local3=None):
    """E1..E13 per vertex as an (n, 13) array."""
    common = edge_common(g) if common is None else common
    if local3 is None:
        local3 = np.zeros((g.n, 6), dtype=np.int64)
        local3_range(g, common, 0, g.n, local3)
    out = np.zeros((g.n, 16), dtype=np.int64)
    _pivots_range(g, common, local3, 0, g.n, out)
    return out[:, :13].copy()


def _pivots_range(g, common, local3, lo, hi, out):
    bad = K.pivots(g.indptr, g.indices, g.slot_edge, common, g.degree, g.n, local3, lo, hi, out)
    if bad >= 0:
        raise ConsistencyError(f"negative neighbor term in E12/E13 at vertex {bad}")


def _triangle_ptr(local3):
    ptr = np.zeros(len(local3) + 1, dtype=np.int64)
    np.cumsum(local3[:, H3], out=ptr[1:])
    return ptr


def _triangles_range(g, tri, lo, hi):
    bad = K.triangle_fill(g.indptr, g.indices, tri.ptr, lo, hi, tri.pairs)
    if bad >= 0:
        raise ConsistencyError(f"triangle list of vertex {bad} disagrees with its triangle count")


def triangle_lists(g, local3=None):
    if local3 is None:
        local3 = np.zeros((g.n, 6), dtype=np.int64)
        local3_range(g, edge_common(g), 0, g.n, local3)
    ptr = _triangle_ptr(local3)
    tri = TriangleList(ptr, np.zeros((int(ptr[-1]), 2), dtype=np.int64))
    _triangles_range(g, tri, 0, g.n)
    return tri


def _clique_range(g, tri, lo, hi, stamp, e14, e15):
    bad = K.clique_paw(g.indptr, g.indices, tri.ptr, tri.pairs, lo, hi, stamp, e14, e15)
    if bad >= 0:
        raise ConsistencyError(f"4-clique sum at vertex {bad} is not divisible by 3")


def clique_paw_counts(g, tri=None):
    """(E14, E15): 3x the 4-cliques on v, and paws with v as the pendant."""
    tri = triangle_lists(g) if tri is None else tri
    e14 = np.zeros(g.n, dtype=np.int64)
    e15 = np.zeros(g.n, dtype=np.int64)
    _clique_range(g, tri, 0, g.n, np.zeros(g.n, dtype=np.int64), e14, e15)
    return e14, e15


def _hist_scratch(g, threshold):
    return (np.zeros(g.n, dtype=np.int64), np.zeros(g.n, dtype=np.int64),
            np.zeros(g.n, dtype=np.int64), np.zeros(max(threshold, 1), dtype=np.int64))


def two_hop_stats(g, threshold=DEFAULT_HIST_THRESHOLD):
    """Per vertex: E16, number of distinct 2-hop targets (p != v), and h_v."""
    e16 = np.zeros(g.n, dtype=np.int64)
    targets = np.zeros(g.n, dtype=np.int64)
    hv = np.zeros(g.n, dtype=np.int64)
    K.two_hop(g.indptr, g.indices, g.degree, 0, g.n, threshold, *_hist_scratch(g, threshold),
              e16, targets, hv)
    return e16, targets, hv


def two_hop_cycle_sum(g, threshold=DEFAULT_HIST_THRESHOLD):
    """Sum over non-neighbors p != v of C(#2-paths v-a-p, 2)."""
    return two_hop_stats(g, threshold)[0]


def two_hop_histogram(g, v):
    """Merged histogram {p: #2-paths v-a-p} over p != v (reference, Python-level)."""
    hist = {}
    for a in g.neighbors(v).tolist():
        hist = histogram_merge(hist, {int(p): 1 for p in g.neighbors(a).tolist()})
    hist.pop(int(v), None)
    return hist


# ---------------------------------------------------------------- solve


def solve_local_orbits(E, first_vertex=0):
    """Exact integer solve of the 16 equations, row by row.

    ``E`` is (k, 16) with columns E1..E16. Returns (k, 16) orbit counts in
    ``CONNECTED_ORBITS`` order. Elimination runs from the single-unknown rows
    outward so every step is an integer subtraction or exact division.
    """
    E = np.asarray(E, dtype=np.int64)
    if E.ndim == 1:
        E = E[None, :]
    e = [E[:, i] for i in range(16)]
    rem = []

    def div(x, d):
        q, r = np.divmod(x, d)
        rem.append(r)
        return q

    f10 = div(e[13], 3)
    f8p = e[14]
    f93 = e[2] - 3 * f10
    f8h = div(e[6] - 2 * f93, 2)
    f6h = div(e[1] - f8h, 3)
    f6l = e[8] - f8p
    f92 = div(e[11] - f8p - 3 * f10, 2)
    f7 = e[15] - f92
    f4m = e[5] - 2 * f7
    f3c = div(e[3] - f4m, 2)
    f8t = e[10] - 2 * f92
    f5t = div(e[4] - f8t, 2)
    f4e = e[12] - 2 * f7 - f8t - 2 * f93
    f3e = e[9] - f4e
    f2 = e[7] - f4e - f8p
    f1e = e[0] - f2

    out = np.stack([f1e, f2, f3e, f3c, f4e, f4m, f5t, f6l, f6h, f7, f8p, f8h, f8t, f92, f93, f10],
                   axis=1)
    bad = (out < 0).any(axis=1)
    for r in rem:
        bad |= r != 0
    if bad.any():
        v = int(np.flatnonzero(bad)[0]) + first_vertex
        raise ConsistencyError(f"orbit system has no non-negative integer solution at vertex {v}")
    return out


def complete_orbits(local3, global3, solved, first_vertex=0):
    """All 20 orbit counts and the 11-entry local profile per vertex."""
    local3 = np.asarray(local3, dtype=np.int64)
    solved = np.asarray(solved, dtype=np.int64)
    g3 = global3.as_list() if isinstance(global3, Global3Profile) else list(global3)
    k = len(solved)
    col = {name: solved[:, i] for i, name in enumerate(CONNECTED_ORBITS)}

    t_empty = np.int64(g3[0]) - local3[:, H0]
    t_edge = np.int64(g3[1]) - local3[:, H1E] - local3[:, H1D]
    t_wedge = np.int64(g3[2]) - local3[:, H2C] - local3[:, H2E]
    t_tri = np.int64(g3[3]) - local3[:, H3]

    orbits = np.zeros((k, 20), dtype=np.int64)
    for name, values in col.items():
        orbits[:, ORBIT_INDEX[name]] = values
    orbits[:, ORBIT_INDEX["F0"]] = t_empty - col["F1_E"] - col["F3_C"] - col["F6_H"]
    orbits[:, ORBIT_INDEX["F1_I"]] = (t_edge - col["F2"] - col["F3_E"] - col["F4_M"]
                                      - col["F5_T"] - col["F8_H"])
    orbits[:, ORBIT_INDEX["F3_I"]] = (t_wedge - col["F4_E"] - col["F6_L"] - col["F7"]
                                      - col["F8_T"] - col["F9_3"])
    orbits[:, ORBIT_INDEX["F5_I"]] = t_tri - col["F8_P"] - col["F9_2"] - col["F10"]
    neg = (orbits < 0).any(axis=1)
    if neg.any():
        v = int(np.flatnonzero(neg)[0]) + first_vertex
        raise ConsistencyError(f"negative completed orbit count at vertex {v}")
    return orbits, orbit_profile(orbits)


_TYPE_OF_ORBIT = np.zeros((20, 11), dtype=np.int64)
_TYPE_OF_ORBIT[np.arange(20), ORBIT_TYPE] = 1


def orbit_profile(orbits):
    return np.asarray(orbits, dtype=np.int64) @ _TYPE_OF_ORBIT


# orbit-name -> multiplicity of that orbit in its subgraph, for the direct scaling check
_SCALING = {
    0: ("F0", 4), 1: ("F1_E", 2), 2: ("F2", 4), 3: ("F3_C", 1), 4: ("F4_M", 2), 5: ("F5_T", 3),
    6: ("F6_H", 1), 7: ("F7", 4), 8: ("F8_P", 1), 9: ("F9_2", 2), 10: ("F10", 4),
}
# (label, orbit, orbit, ratio): sum over vertices of the first = ratio * the second
_SYMMETRIES = (
    ("F3_E=2F3_C", "F3_E", "F3_C", 2), ("F4_E=F4_M", "F4_E", "F4_M", 1),
    ("F6_L=3F6_H", "F6_L", "F6_H", 3), ("F8_P=F8_H", "F8_P", "F8_H", 1),
    ("F8_T=2F8_P", "F8_T", "F8_P", 2), ("F9_2=F9_3", "F9_2", "F9_3", 1),
    # disconnected orbits pair up the same way
    ("F1_I=F1_E", "F1_I", "F1_E", 1), ("F3_I=F3_C", "F3_I", "F3_C", 1),
    ("3F5_I=F5_T", "F5_I", "F5_T", Fraction(1, 3)),
)


def global_4_profile(orbits, m=None):
    """Global counts N0..N10, cross-checked two ways plus orbit symmetries."""
    n = len(orbits)
    sums = K.exact_column_sums(orbits) if n else [0] * 20
    return _global_from_sums(n, m, sums)


def _global_from_sums(n, m, sums):
    by = dict(zip(ORBITS4, sums))
    prof = [0] * 11
    for name, s in by.items():
        prof[ORBIT_TYPE[ORBIT_INDEX[name]]] += s
    checks = {}
    checks["divisible"] = all(x % 4 == 0 for x in prof)
    N = tuple(x // 4 for x in prof)

    direct = []
    for i in range(11):
        name, mult = _SCALING[i]
        direct.append(Fraction(by[name], mult))
    checks["scaling"] = all(d == N[i] for i, d in enumerate(direct))
    sym = {label: by[x] == ratio * by[y] for label, x, y, ratio in _SYMMETRIES}
    checks["symmetry"] = all(sym.values())
    checks["symmetry_detail"] = sym
    checks["total"] = sum(N) == comb(n, 4)
    failed = [k for k in ("divisible", "scaling", "symmetry", "total") if not checks[k]]
    if failed:
        raise ConsistencyError(f"global 4-profile checks failed: {failed}")
    return GlobalProfile(n=n, m=m, N=N, orbit_sums=tuple(sums), checks=checks)


# ---------------------------------------------------------------- plan


def _body_none(g, state, lo, hi, scratch):
    return None


def _alloc_neighbors(g, state):
    return {"nb": (g.indptr, g.indices)}


def _alloc_common(g, state):
    return {"common": np.zeros(g.m, dtype=np.int64)}


def _body_common(g, state, lo, hi, scratch):
    K.common_counts(g.indptr, g.indices, g.edges, lo, hi, state["common"])


def _alloc_local3(g, state):
    return {"local3": np.zeros((g.n, 6), dtype=np.int64)}


def _body_local3(g, state, lo, hi, scratch):
    local3_range(g, state["common"], lo, hi, state["local3"])


def _body_colsum(key):
    def body(g, state, lo, hi, scratch):
        return K.exact_column_sums(state[key][lo:hi])
    return body


def _finish_global3(g, state, sums):
    return {"global3": global3_from_sums(g.n, sums if sums is not None else [0] * 6)}


def _alloc_acc(g, state):
    return {"acc": np.zeros((g.n, 16), dtype=np.int64)}


def _body_pivots(g, state, lo, hi, scratch):
    _pivots_range(g, state["common"], state["local3"], lo, hi, state["acc"])


def _plan_histogram(threshold):
    def alloc(g, state):
        return {"hist_targets": np.zeros(g.n, dtype=np.int64),
                "h_v": np.zeros(g.n, dtype=np.int64),
                "e16": np.zeros(g.n, dtype=np.int64)}

    def scratch(g):
        return _hist_scratch(g, threshold)

    def body(g, state, lo, hi, buf):
        K.two_hop(g.indptr, g.indices, g.degree, lo, hi, threshold, *buf,
                  state["e16"], state["hist_targets"], state["h_v"])
        state["acc"][lo:hi, 15] = state["e16"][lo:hi]

    return alloc, scratch, body


def _alloc_triangles(g, state):
    ptr = _triangle_ptr(state["local3"])
    return {"triangles": TriangleList(ptr, np.zeros((int(ptr[-1]), 2), dtype=np.int64))}


def _body_triangles(g, state, lo, hi, scratch):
    _triangles_range(g, state["triangles"], lo, hi)


def _alloc_e1415(g, state):
    return {"e14": np.zeros(g.n, dtype=np.int64), "e15": np.zeros(g.n, dtype=np.int64)}


def _body_cliques(g, state, lo, hi, stamp):
    _clique_range(g, state["triangles"], lo, hi, stamp, state["e14"], state["e15"])
    state["acc"][lo:hi, 13] = state["e14"][lo:hi]
    state["acc"][lo:hi, 14] = state["e15"][lo:hi]


def _alloc_solved(g, state):
    return {"solved": np.zeros((g.n, 16), dtype=np.int64)}


def _body_solve(g, state, lo, hi, scratch):
    state["solved"][lo:hi] = solve_local_orbits(state["acc"][lo:hi], first_vertex=lo)


def _alloc_orbits(g, state):
    return {"orbits": np.zeros((g.n, 20), dtype=np.int64),
            "profile": np.zeros((g.n, 11), dtype=np.int64)}


def _body_complete(g, state, lo, hi, scratch):
    orb, prof = complete_orbits(state["local3"][lo:hi], state["global3"], state["solved"][lo:hi],
                                first_vertex=lo)
    state["orbits"][lo:hi] = orb
    state["profile"][lo:hi] = prof


def _finish_global4(g, state, sums):
    sums = sums if sums is not None else [0] * 20
    return {"global4": _global_from_sums(g.n, g.m, sums)}


def _payload_tri_gather(g, state):
    return 2 * state["local3"][:, H3]


def _payload_clique_gather(g, state):
    out = np.zeros(g.n, dtype=np.int64)
    K.neighbor_sum(g.indptr, g.indices, 2 * state["local3"][:, H3], 0, g.n, out)
    return out


def four_profile_plan(hist_threshold=DEFAULT_HIST_THRESHOLD):
    h_alloc, h_scratch, h_body = _plan_histogram(hist_threshold)
    zeros_stamp = lambda g: np.zeros(g.n, dtype=np.int64)  # noqa: E731
    phases = (
        Phase("neighbors", "gather", "vertex", _body_none, writes=("nb",), alloc=_alloc_neighbors,
              payload=lambda g, s: g.degree),
        Phase("edge_scalars", "scatter", "edge", _body_common, reads=("nb",), writes=("common",),
              alloc=_alloc_common),
        Phase("local3", "gather", "vertex", _body_local3, reads=("common",), writes=("local3",),
              alloc=_alloc_local3),
        Phase("global3", "apply", "vertex", _body_colsum("local3"), reads=("local3",),
              writes=("global3",), merge=add_merge, finish=_finish_global3),
        Phase("pivots", "gather", "vertex", _body_pivots, reads=("common", "local3"),
              writes=("acc",), alloc=_alloc_acc),
        Phase("histogram", "gather", "vertex", h_body, reads=("nb", "acc"),
              writes=("acc", "e16", "hist_targets", "h_v"), alloc=h_alloc, scratch=h_scratch,
              payload=lambda g, s: 2 * s["hist_targets"]),
        Phase("triangles", "gather", "vertex", _body_triangles, reads=("common", "local3"),
              writes=("triangles",), alloc=_alloc_triangles, payload=_payload_tri_gather),
        Phase("cliques", "gather", "vertex", _body_cliques, reads=("triangles", "acc"),
              writes=("acc", "e14", "e15"), alloc=_alloc_e1415, scratch=zeros_stamp,
              payload=_payload_clique_gather),
        Phase("solve", "apply", "vertex", _body_solve, reads=("acc",), writes=("solved",),
              alloc=_alloc_solved),
        Phase("complete", "apply", "vertex", _body_complete,
              reads=("solved", "local3", "global3"), writes=("orbits", "profile"),
              alloc=_alloc_orbits),
        Phase("global4", "apply", "vertex", _body_colsum("orbits"), reads=("orbits",),
              writes=("global4",), merge=add_merge, finish=_finish_global4),
    )
    return PhasePlan(phases)


@dataclass
class FourProfiles:
    graph: object
    local3: np.ndarray
    global3: Global3Profile
    accumulators: np.ndarray
    orbits: np.ndarray
    profile: np.ndarray
    global4: GlobalProfile
    triangles: TriangleList
    comm: object
    timings: dict


def compute_profiles(g, workers=None, schedule_seed=None, chunk=None,
                     hist_threshold=DEFAULT_HIST_THRESHOLD):
    """Run the full exact pipeline under the phase engine."""
    res = run_plan(g, four_profile_plan(hist_threshold), workers=workers,
                   schedule_seed=schedule_seed, chunk=chunk)
    s = res.state
    return FourProfiles(
        graph=g, local3=s["local3"], global3=s["global3"], accumulators=s["acc"],
        orbits=s["orbits"], profile=s["profile"], global4=s["global4"],
        triangles=s["triangles"], comm=res.comm, timings=res.timings,
    )
