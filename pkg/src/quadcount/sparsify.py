"""Bernoulli edge sampling and unbiased global-profile estimation.

A sampled graph keeps each edge independently with probability p. Its
expected global 4-profile is H @ N, where column j of H is the distribution
of the induced type of an F_j quadruple after sampling. X = H^-1 @ Y is then
an unbiased estimate of N; likewise for 3-profiles with a 4x4 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .four import compute_profiles
from .graph import Graph

# number of edges in each 4-vertex type F0..F10 and in each 3-vertex type
EDGES4 = (0, 1, 2, 2, 3, 3, 3, 4, 4, 5, 6)
EDGES3 = (0, 1, 2, 3)

# COEFF4[i][j]: number of edge subsets of an F_j that induce F_i on the same 4 vertices
COEFF4 = (
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (0, 1, 2, 2, 3, 3, 3, 4, 4, 5, 6),
    (0, 0, 1, 0, 1, 0, 0, 2, 1, 2, 3),
    (0, 0, 0, 1, 2, 3, 3, 4, 5, 8, 12),
    (0, 0, 0, 0, 1, 0, 0, 4, 2, 6, 12),
    (0, 0, 0, 0, 0, 1, 0, 0, 1, 2, 4),
    (0, 0, 0, 0, 0, 0, 1, 0, 1, 2, 4),
    (0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 3),
    (0, 0, 0, 0, 0, 0, 0, 0, 1, 4, 12),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 6),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
)
COEFF3 = (
    (1, 1, 1, 1),
    (0, 1, 2, 3),
    (0, 0, 1, 3),
    (0, 0, 0, 1),
)

_MASK64 = (1 << 64) - 1


def _check_p(p):
    if not (0 < p <= 1):
        raise ArgumentError(f"sampling probability must lie in (0, 1], got {p}")


# H^-1 has entries up to 1/p^6 with alternating signs, so both matrices are
# kept in extended precision to keep H @ H^-1 within 1e-9 of I even at small p
FLOAT = np.longdouble


def _forward(coeff, edges, p):
    p = FLOAT(p)
    k = len(edges)
    H = np.zeros((k, k), dtype=FLOAT)
    for i in range(k):
        for j in range(i, k):
            if coeff[i][j]:
                H[i, j] = coeff[i][j] * p ** edges[i] * (1 - p) ** (edges[j] - edges[i])
    return H


def _inverse(coeff, edges, p):
    # same support and coefficients, with (1 - p) replaced by t = (p - 1) / p
    # and the diagonal power inverted
    p = FLOAT(p)
    t = (p - 1) / p
    k = len(edges)
    Hi = np.zeros((k, k), dtype=FLOAT)
    for i in range(k):
        for j in range(i, k):
            if coeff[i][j]:
                Hi[i, j] = coeff[i][j] * t ** (edges[j] - edges[i]) / p ** edges[i]
    return Hi


@dataclass(frozen=True)
class SamplingModel:
    p: float
    seed: int
    H4: np.ndarray
    H4inv: np.ndarray
    H3: np.ndarray
    H3inv: np.ndarray


def build_sampling_matrices(p, seed=0):
    _check_p(p)
    return SamplingModel(
        p=float(p), seed=int(seed) & _MASK64,
        H4=_forward(COEFF4, EDGES4, p), H4inv=_inverse(COEFF4, EDGES4, p),
        H3=_forward(COEFF3, EDGES3, p), H3inv=_inverse(COEFF3, EDGES3, p),
    )


# ---------------------------------------------------------------- sampling


def _splitmix64(x):
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def edge_uniforms(seed, edge_ids):
    """U(0,1) draw per canonical edge id, a pure function of (seed, edge id)."""
    ids = np.asarray(edge_ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _splitmix64(np.uint64(int(seed) & _MASK64))
        x = _splitmix64(key ^ _splitmix64(ids))
    return (x >> np.uint64(11)).astype(np.float64) * 2.0**-53


def keep_mask(g, p, seed):
    _check_p(p)
    return edge_uniforms(seed, np.arange(g.m)) < p


def sample_edges(g, p, seed):
    """New graph on the same vertices keeping each edge with probability p."""
    keep = keep_mask(g, p, seed)
    return Graph(g.n, g.edges[keep], labels=g.labels, degree_threshold=g.degree_threshold)


def trial_seed(seed, trial):
    """Independent per-trial seed derived from a base seed."""
    with np.errstate(over="ignore"):
        x = _splitmix64(np.uint64(int(seed) & _MASK64) ^ _splitmix64(np.uint64(trial)))
    return int(x)


# ---------------------------------------------------------------- estimation


def estimate_profile(Y, p):
    """Unbiased estimate of the global 4-profile from a sampled one (reals, unrounded)."""
    return (build_sampling_matrices(p).H4inv @ _extended(Y)).astype(np.float64)


def estimate_3profile(y, p):
    return (build_sampling_matrices(p).H3inv @ _extended(y)).astype(np.float64)


def _extended(v):
    # int64 counts convert exactly to the 64-bit long double mantissa
    return np.asarray(v).astype(FLOAT)


def ratios(truth, X):
    """N_i / X_i per coordinate; nan where X_i == 0."""
    truth = np.asarray(truth, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    out = np.full(X.shape, np.nan)
    np.divide(truth, X, out=out, where=X != 0)
    return out


@dataclass
class TrialResult:
    seed: int
    m: int
    Y: list
    X: np.ndarray
    y3: list
    x3: np.ndarray
    raw_local: np.ndarray | None = None


def sparsify_once(g, p, seed, workers=None, keep_local=False):
    h = sample_edges(g, p, seed)
    r = compute_profiles(h, workers=workers)
    Y = list(r.global4.N)
    y3 = r.global3.as_list()
    return TrialResult(seed=int(seed), m=h.m, Y=Y, X=estimate_profile(Y, p),
                       y3=y3, x3=estimate_3profile(y3, p),
                       raw_local=r.profile if keep_local else None)


def run_trials(g, p, trials=1, seed=0, truth=None, workers=None):
    """Repeat sampling + estimation; aggregate means, spread and (optionally) ratios.

    ``truth`` is the exact global 4-profile; when given, per-trial and mean
    ratios N_i / X_i are reported.
    """
    _check_p(p)
    if trials < 1:
        raise ArgumentError("trials must be >= 1")
    runs = [sparsify_once(g, p, trial_seed(seed, t), workers) for t in range(trials)]
    Ys = np.array([r.Y for r in runs], dtype=np.float64)
    Xs = np.array([r.X for r in runs])
    x3s = np.array([r.x3 for r in runs])
    ddof = 1 if trials > 1 else 0
    report = {
        "p": float(p),
        "seed": int(seed),
        "trials": int(trials),
        "trial_seeds": [r.seed for r in runs],
        "sampled_edges": [r.m for r in runs],
        "Y_mean": Ys.mean(axis=0).tolist(),
        "X_mean": Xs.mean(axis=0).tolist(),
        "X_std": Xs.std(axis=0, ddof=ddof).tolist(),
        "X": Xs.tolist(),
        "Y3_mean": np.array([r.y3 for r in runs], dtype=np.float64).mean(axis=0).tolist(),
        "X3_mean": x3s.mean(axis=0).tolist(),
    }
    if truth is not None:
        report["truth"] = [int(x) for x in truth]
        report["ratio"] = _nan_to_none(ratios(truth, Xs.mean(axis=0)))
        report["ratio_per_trial"] = [_nan_to_none(ratios(truth, x)) for x in Xs]
    return report


def _nan_to_none(a):
    return [None if np.isnan(x) else float(x) for x in a]
