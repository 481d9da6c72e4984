import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcount import graph as G
from quadcount.errors import ContractError, InputError, ParseError, SizeError

from conftest import graphs


def test_load_dedupes_and_drops_self_loops():
    g = G.load_graph("0 1\n1 0\n1 1\n1 2")
    assert g.n == 3
    assert g.edge_set() == {(0, 1), (1, 2)}


def test_load_house_degrees():
    g = G.load_graph("0 1\n0 2\n0 3\n1 2\n1 4\n3 4\n")
    assert (g.n, g.m) == (5, 6)
    assert g.degree.tolist() == [3, 3, 2, 2, 2]


def test_comment_only_is_empty():
    g = G.load_graph("# comment\n")
    assert (g.n, g.m) == (0, 0)


def test_empty_text_is_empty_graph():
    assert G.load_graph("").n == 0


def test_sparse_ids_remapped_by_first_appearance():
    g = G.load_graph("100 7\n# x\n7 42\n\t 42   100 \n")
    assert g.labels.tolist() == [100, 7, 42]
    assert g.edge_set() == {(0, 1), (1, 2), (0, 2)}
    assert g.labelled_edge_set() == {(7, 100), (7, 42), (42, 100)}


def test_extra_tokens_ignored():
    g = G.load_graph("0 1 0.5\n1 2 1700000000\n")
    assert g.edge_set() == {(0, 1), (1, 2)}


def test_self_loop_only_vertex_kept_isolated():
    g = G.load_graph("5 5\n0 1\n")
    assert g.n == 3 and g.degree.tolist() == [0, 1, 1]


@pytest.mark.parametrize("text,line", [("0 1\n2 x\n", 2), ("# c\n0 1\n\n3\n", 4),
                                       ("a b\n", 1), ("0 1.5\n", 1)])
def test_parse_error_reports_line(text, line):
    with pytest.raises(ParseError) as exc:
        G.load_graph(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_read_graph_missing_file(tmp_path):
    with pytest.raises(InputError):
        G.read_graph(tmp_path / "nope.txt")


def test_write_read_roundtrip(tmp_path):
    g = G.load_graph("10 20\n20 30\n30 10\n40 10\n")
    path = tmp_path / "g.txt"
    G.write_edge_list(g, path)
    h = G.read_graph(path)
    assert h.labelled_edge_set() == g.labelled_edge_set()


def test_csr_invariants(zoo):
    for g in zoo.values():
        assert g.degree.sum() == 2 * g.m
        for v in range(g.n):
            nb = g.neighbors(v)
            assert np.all(np.diff(nb) > 0)
            assert v not in nb
            for a in nb:
                assert v in g.neighbors(a)
            for k in range(g.indptr[v], g.indptr[v + 1]):
                u, w = g.edges[g.slot_edge[k]]
                assert {int(u), int(w)} == {v, int(g.indices[k])}


def test_graph_is_read_only(house):
    with pytest.raises(ValueError):
        house.indices[0] = 3


@given(graphs(max_n=10), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_permuted_lines_and_reversed_pairs_give_same_graph(g, rnd):
    lines = [f"{u} {v}" for u, v in g.edges]
    rnd.shuffle(lines)
    lines = [(" ".join(reversed(x.split())) if rnd.random() < 0.5 else x) for x in lines]
    h = G.load_graph("\n".join(lines))
    assert h.labelled_edge_set() == {(int(u), int(v)) for u, v in g.edges}


def test_complement_neighbor_count_examples(house):
    assert G.complement_neighbor_count(house, 0, 1) == 0
    assert G.complement_neighbor_count(house, 0, 2) == 1
    k4 = G.complete_graph(4)
    for u, v in k4.edges:
        assert G.complement_neighbor_count(k4, u, v) == 0


def test_complement_neighbor_count_by_sets(zoo):
    for g in zoo.values():
        for u, v in g.edges:
            nb = set(g.neighbors(u).tolist()) | set(g.neighbors(v).tolist())
            direct = len(set(range(g.n)) - nb - {int(u), int(v)})
            assert G.complement_neighbor_count(g, u, v) == direct
            assert G.complement_neighbor_count(g, v, u) == direct


def test_complement_neighbor_count_requires_edge(house):
    with pytest.raises(ContractError):
        G.complement_neighbor_count(house, 0, 4)


def test_has_edge_same_with_hash_sets():
    g = G.erdos_renyi(40, 0.4, seed=3)
    h = G.Graph(g.n, g.edges, degree_threshold=2)
    for u, v in itertools.product(range(g.n), repeat=2):
        assert g.has_edge(u, v) == h.has_edge(u, v) == ((min(u, v), max(u, v)) in g.edge_set())


def test_slot_lookup(house):
    assert house.slot(0, 4) == -1
    k = house.slot(3, 4)
    assert house.indices[k] == 4


def test_size_guard():
    with pytest.raises(SizeError):
        G.Graph(200_000, [])


def test_erdos_renyi_large_branch_is_simple():
    g = G.erdos_renyi(6000, 0.001, seed=1)
    assert len(g.edge_set()) == g.m
    assert 0.8 * 6000 * 5999 / 2 * 0.001 < g.m < 1.2 * 6000 * 5999 / 2 * 0.001


def test_disjoint_union_and_tree():
    g = G.disjoint_union(G.complete_graph(3), G.path_graph(2))
    assert g.edge_set() == {(0, 1), (0, 2), (1, 2), (3, 4)}
    t = G.tree_with_shortcuts(3, 2)
    assert t.n == 1 + 3 + 6
    # root-hub edges, plus every leaf linked to every hub
    assert t.m == 3 + 6 * 3


def test_random_graph_equality():
    random.seed(0)
    a = G.erdos_renyi(20, 0.3, seed=5)
    b = G.Graph(20, [tuple(reversed(e)) for e in a.edges.tolist()])
    assert a == b
