"""TSV and JSON report formatting.

Reports are deterministic functions of the input and configuration: no
timestamps, wall-times or thread counts appear in them (those go to stderr).
"""

from __future__ import annotations

import json
from math import comb

import numpy as np

from .codes import ORBITS3, ORBITS4, TYPES4

PROFILE_COLUMNS = tuple(TYPES4)


def _fmt_check(v):
    if isinstance(v, dict):
        return {k: _fmt_check(x) for k, x in v.items()}
    return "pass" if v else "fail"


def local_tsv(g, profile, orbits=None):
    """One row per vertex (original id): the 11 profile counts, optionally the 20 orbits."""
    header = ["vertex", *PROFILE_COLUMNS]
    if orbits is not None:
        header += ORBITS4
    lines = ["\t".join(header)]
    prof = np.asarray(profile)
    orb = None if orbits is None else np.asarray(orbits)
    for v in range(g.n):
        row = [str(g.labels[v]), *map(str, prof[v].tolist())]
        if orb is not None:
            row += map(str, orb[v].tolist())
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def local3_tsv(g, local3):
    lines = ["\t".join(["vertex", *ORBITS3])]
    for v in range(g.n):
        lines.append("\t".join([str(g.labels[v]), *map(str, np.asarray(local3[v]).tolist())]))
    return "\n".join(lines) + "\n"


def global_record(g, N, N3, checks, source, comm=None):
    rec = {
        "source": source,
        "n": int(g.n),
        "m": int(g.m),
        "N": [int(x) for x in N],
        "N3": [int(x) for x in N3],
        "checks": _fmt_check(checks),
    }
    if comm is not None:
        rec["comm"] = comm
    return rec


def pipeline_record(result):
    """Global record for a run of the exact pipeline."""
    g = result.graph
    comm = {"per_phase": result.comm.totals, "total": result.comm.total}
    return global_record(g, result.global4.N, result.global3.as_list(), result.global4.checks,
                         "pipeline", comm)


def oracle_record(g, res):
    checks = {"total": sum(res.global4) == comb(g.n, 4),
              "total3": sum(res.global3) == comb(g.n, 3)}
    return global_record(g, res.global4, res.global3, checks, "oracle")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
