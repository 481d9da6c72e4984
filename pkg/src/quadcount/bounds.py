"""Concentration bounds for sparsified profile estimates.

Read-k bounds use a Chernoff-style tail exp(-2 eps^2 r / k) for a sum of r
indicators in which each edge variable appears in at most k of them (or the
sharper relative-entropy tail). Kim-Vu bounds are evaluated for comparison.
Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import rel_entr

from .errors import ArgumentError, SizeError
from .oracle import DEFAULT_GUARD, brute_force_profiles
from .sparsify import COEFF4, EDGES4

FULL_PROFILE_C = 192**2 / 2


def a6():
    return 8**6 * math.sqrt(math.factorial(6))


@dataclass(frozen=True)
class EdgeShareMaxima:
    """k[i]: the most induced F_i subgraphs any single edge lies in (k[0] is always 0)."""

    k: tuple
    manual: bool = False

    @property
    def k10(self):
        return self.k[10]

    def __getitem__(self, i):
        return self.k[i]


@dataclass(frozen=True)
class BoundQuery:
    epsilon: float = 0.1
    delta: float = 0.1
    p: float = 0.5
    gamma: float = 1.0
    m: int = 2

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ArgumentError("epsilon must be > 0")
        if not 0 < self.delta < 1:
            raise ArgumentError("delta must lie in (0, 1)")
        if not 0 < self.p <= 1:
            raise ArgumentError("p must lie in (0, 1]")
        if not self.gamma > 0:
            raise ArgumentError("gamma must be > 0")


def edge_share_maxima(g, guard=DEFAULT_GUARD, override=None, workers=1):
    """Per-type edge-share maxima by full enumeration, or ``override`` if given.

    ``override`` is a sequence of 10 values k_1..k_10 (or 11 including k_0).
    """
    if override is not None:
        k = [int(x) for x in override]
        if len(k) == 10:
            k = [0] + k
        if len(k) != 11 or min(k) < 0:
            raise ArgumentError("override needs 10 non-negative values k_1..k_10")
        return EdgeShareMaxima(tuple(k), manual=True)
    try:
        res = brute_force_profiles(g, guard=guard, edge_counts=True, workers=workers)
    except SizeError as e:
        raise SizeError(f"{e}; supply edge-share maxima manually") from None
    ec = res.edge_type_counts
    k = ec.max(axis=0) if len(ec) else np.zeros(11, dtype=np.int64)
    return EdgeShareMaxima(tuple(int(x) for x in k))


def _domain(k10, N10):
    if N10 <= 0:
        raise ArgumentError("N10 must be positive for clique concentration bounds")
    if k10 < 0:
        raise ArgumentError("k10 must be non-negative")


def readk_min_p(k10, N10, epsilon, delta):
    """Smallest p for which |X10 - N10| <= epsilon N10 holds w.p. 1 - delta.

    Values above 1 mean the bound is vacuous; they are returned unclamped.
    """
    _domain(k10, N10)
    return (math.log(2 / delta) * k10 / (2 * epsilon**2 * N10)) ** (1 / 12)


def readk_epsilon(p, delta, k10, N10, kl=False):
    """Relative error of X10 guaranteed at confidence 1 - delta for sampling rate p."""
    _domain(k10, N10)
    if not kl:
        return math.sqrt(math.log(2 / delta) * k10 / (2 * p**12 * N10))
    return _readk_epsilon_kl(p, delta, k10, N10)


def kl_divergence(a, q):
    """D(a || q) between Bernoulli(a) and Bernoulli(q)."""
    return float(rel_entr(a, q) + rel_entr(1 - a, 1 - q))


def _readk_epsilon_kl(p, delta, k10, N10):
    # Y10 is a sum of r = N10 indicators of mean q = p^6, read-k10. Find the
    # smallest deviation d with both relative-entropy tails <= delta / 2; the
    # relative error on X10 = Y10 / q is then d / q.
    q = p**6
    if k10 == 0:
        return 0.0
    target = math.log(2 / delta) * k10 / N10

    def exponent(d):
        up = kl_divergence(q + d, q) if q + d <= 1 else math.inf
        down = kl_divergence(q - d, q) if q - d >= 0 else math.inf
        return min(up, down)

    hi = max(q, 1 - q)
    if exponent(hi) < target:
        # even the largest possible deviation is not rare enough
        return hi / q
    if q == 1.0:
        return 0.0
    d = brentq(lambda d: exponent(d) - target, 0.0, hi, xtol=1e-15, rtol=1e-13)
    return d / q


def kimvu_epsilon(p, m, gamma, k10, N10):
    """Relative error of X10 from Kim-Vu concentration at confidence 1 - m^-gamma."""
    _domain(k10, N10)
    if m < 2:
        raise ArgumentError("Kim-Vu bound needs m >= 2")
    spread = max(N10 ** (-1 / 6), (k10 / N10) ** (1 / 3))
    return a6() * ((5 + gamma) * math.log(m)) ** 6 * math.sqrt(spread / p)


# ---------------------------------------------------------------- full profile


def readk_combinations():
    """(coefficients over types 0..10, exponent) per sampled count Y_1..Y_10."""
    return {i: (COEFF4[i], 1 / (2 * EDGES4[i])) for i in range(1, 11)}


@dataclass
class FullProfileThresholds:
    thresholds: dict          # i -> p threshold, or None when the combination is empty
    exponents: dict
    n0_ceiling: float
    constant: float
    error_scale: int = 0      # epsilon * C(n, 4): the guaranteed max-norm error
    vacuous: dict = field(default_factory=dict)

    def satisfied(self, p, n0):
        ok = all(t is None or p >= t for t in self.thresholds.values())
        return ok and n0 <= self.n0_ceiling


def readk_full_profile_min_p(k, N, epsilon, delta, n_vertices):
    """All ten p thresholds and the n0 ceiling for the whole-profile guarantee.

    ``k`` and ``N`` are 11-vectors indexed by type (entry 0 unused for k).
    """
    k = list(k)
    N = list(N)
    if len(k) == 10:
        k = [0] + k
    scale = FULL_PROFILE_C * math.log(2 / delta) / epsilon**2
    thresholds, exponents, vacuous = {}, {}, {}
    for i, (coeff, expo) in readk_combinations().items():
        kk = sum(c * k[j] for j, c in enumerate(coeff))
        rr = sum(c * N[j] for j, c in enumerate(coeff))
        exponents[i] = expo
        if rr == 0:
            thresholds[i] = None
            vacuous[i] = True
            continue
        thresholds[i] = (scale * kk / rr) ** expo
        vacuous[i] = thresholds[i] > 1
    V = n_vertices
    return FullProfileThresholds(
        thresholds=thresholds, exponents=exponents,
        n0_ceiling=V**2 * (V**2 - scale), constant=FULL_PROFILE_C,
        error_scale=epsilon * math.comb(V, 4), vacuous=vacuous,
    )


# ---------------------------------------------------------------- comparison


def k_condition(k10, N10):
    """Compare k10 with N10^(5/6) exactly, via k10^6 against N10^5."""
    lhs, rhs = int(k10) ** 6, int(N10) ** 5
    if lhs < rhs:
        return "pass"
    if lhs == rhs:
        return "boundary-pass"
    return "fail"


def compare_bounds(query, maxima, profile, c=1.0):
    """Read-k versus Kim-Vu at one sampling rate, plus the hypothesis checks.

    ``profile`` is the exact global 4-profile (N0..N10).
    """
    k10 = maxima.k10 if isinstance(maxima, EdgeShareMaxima) else int(maxima)
    N10 = int(profile[10])
    rk = readk_epsilon(query.p, query.delta, k10, N10)
    rk_kl = readk_epsilon(query.p, query.delta, k10, N10, kl=True)
    kv = kimvu_epsilon(query.p, query.m, query.gamma, k10, N10)
    logm = math.log(query.m)
    return {
        "p": query.p, "delta": query.delta, "gamma": query.gamma, "m": query.m,
        "k10": k10, "N10": N10,
        "eps_readk": rk, "eps_readk_kl": rk_kl, "eps_kimvu": kv,
        "ratio": kv / rk if rk > 0 else math.inf,
        "readk_better": rk < kv,
        "hypotheses": {
            "c": c,
            "p_log_m": query.p * logm >= c,
            "delta_m": query.delta * query.m >= c,
            "k-condition": k_condition(k10, N10),
        },
        "vacuous": {"readk": rk > 1, "kimvu": kv > 1},
    }


def measured_error(X10, N10, delta):
    """Empirical relative error of X10 at confidence 1 - delta (its (1-delta)-quantile)."""
    err = np.abs(np.asarray(X10, dtype=np.float64) - N10) / N10
    return float(np.quantile(err, 1 - delta))


def bounds_grid(grid, maxima, profile, delta, gamma, m, measured=None):
    """Rows (p, eps_readk, eps_readk_kl, eps_kimvu, eps_measured) over a p grid.

    ``measured`` optionally maps p -> measured relative error.
    """
    rows = []
    for p in grid:
        r = compare_bounds(BoundQuery(delta=delta, p=p, gamma=gamma, m=m), maxima, profile)
        meas = None if measured is None else measured.get(p)
        rows.append((p, r["eps_readk"], r["eps_readk_kl"], r["eps_kimvu"], meas))
    return rows


GRID_COLUMNS = ("p", "eps_readk", "eps_readk_kl", "eps_kimvu", "eps_measured")


def grid_tsv(rows):
    lines = ["\t".join(GRID_COLUMNS)]
    for row in rows:
        lines.append("\t".join("" if v is None else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
