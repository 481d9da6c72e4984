"""Payload accounting: full neighbor-of-neighbor lists versus merged histograms.

Units: one per vertex id shipped, two per (id, count) pair. For each vertex v
the naive gather ships every neighbor's adjacency list minus v itself; the
histogram gather ships one pair per distinct target p != v.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .engine import Phase, PhasePlan, run_plan
from .four import DEFAULT_HIST_THRESHOLD, _hist_scratch

TSV_COLUMNS = ("vertex_id", "degree", "h_v", "naive_units", "histogram_units")


@dataclass
class CommCosts:
    degree: np.ndarray
    h_v: np.ndarray
    naive: np.ndarray
    histogram: np.ndarray
    bound: np.ndarray

    @property
    def saved(self):
        return self.naive - self.histogram

    @property
    def bound_holds(self):
        """Per vertex: naive - histogram <= naive - 2 h_v."""
        return self.saved <= self.bound

    def totals(self):
        return {"naive_units": int(self.naive.sum()), "histogram_units": int(self.histogram.sum()),
                "bound_units": int(self.bound.sum()), "h_v": int(self.h_v.sum()),
                "bound_holds": bool(self.bound_holds.all())}


def _alloc(g, state):
    return {k: np.zeros(g.n, dtype=np.int64) for k in ("naive", "targets", "h_v", "e16")}


def _body_naive(g, state, lo, hi, scratch):
    K.neighbor_sum(g.indptr, g.indices, g.degree - 1, lo, hi, state["naive"])


def comm_plan(threshold=DEFAULT_HIST_THRESHOLD):
    def body_hist(g, state, lo, hi, buf):
        K.two_hop(g.indptr, g.indices, g.degree, lo, hi, threshold, *buf,
                  state["e16"], state["targets"], state["h_v"])

    return PhasePlan((
        Phase("naive", "gather", "vertex", _body_naive, writes=("naive",), alloc=_alloc,
              payload=lambda g, s: s["naive"]),
        Phase("histogram", "gather", "vertex", body_hist, writes=("targets", "h_v"),
              scratch=lambda g: _hist_scratch(g, threshold),
              payload=lambda g, s: 2 * s["targets"]),
    ))


def comm_costs(g, workers=None, threshold=DEFAULT_HIST_THRESHOLD):
    res = run_plan(g, comm_plan(threshold), workers=workers)
    s = res.state
    naive = s["naive"]
    return CommCosts(degree=g.degree.copy(), h_v=s["h_v"], naive=naive,
                     histogram=2 * s["targets"], bound=naive - 2 * s["h_v"])


def comm_tsv(g, costs):
    lines = ["\t".join(TSV_COLUMNS)]
    for v in range(g.n):
        lines.append(f"{g.labels[v]}\t{costs.degree[v]}\t{costs.h_v[v]}\t"
                     f"{costs.naive[v]}\t{costs.histogram[v]}")
    return "\n".join(lines) + "\n"
