import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from quadcount import graph as G


def structured_graphs():
    """Named small graphs covering every 4-vertex type and degenerate cases."""
    gs = {
        "house": G.house_graph(),
        "empty0": G.empty_graph(0),
        "empty1": G.empty_graph(1),
        "empty5": G.empty_graph(5),
        "k4_iso": G.disjoint_union(G.complete_graph(4), G.empty_graph(1)),
        "k3_iso2": G.disjoint_union(G.complete_graph(3), G.empty_graph(2)),
        "paw": G.Graph(4, [(0, 1), (1, 2), (1, 3), (2, 3)]),
        "diamond": G.Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        "two_k4": G.Graph(6, [(a, b) for a, b in itertools.combinations(range(4), 2)]
                          + [(0, 4), (0, 5), (1, 4), (1, 5), (4, 5)]),
        "tws": G.tree_with_shortcuts(3, 2),
        "mixed": G.disjoint_union(G.cycle_graph(5), G.path_graph(4), G.complete_graph(4),
                                  G.star_graph(3)),
    }
    for k in range(1, 8):
        gs[f"K{k}"] = G.complete_graph(k)
    for k in range(3, 9):
        gs[f"C{k}"] = G.cycle_graph(k)
    for k in range(1, 8):
        gs[f"P{k}"] = G.path_graph(k)
    for k in range(1, 6):
        gs[f"S{k}"] = G.star_graph(k)
    return gs


def random_graphs(count, seed=0, nmin=5, nmax=60, ps=(0.05, 0.1, 0.3, 0.7)):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(nmin, nmax + 1))
        p = ps[i % len(ps)]
        out.append((f"er_{n}_{p}_{i}", G.erdos_renyi(n, p, seed=int(rng.integers(2**31)))))
    return out


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return G.empty_graph(n)
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return G.Graph(n, [e for e, b in zip(pairs, bits) if b])


@pytest.fixture(scope="session")
def zoo():
    return structured_graphs()


@pytest.fixture
def house():
    return G.house_graph()
