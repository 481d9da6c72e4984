import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadcount import graph as G
from quadcount.engine import (
    Phase, PhasePlan, add_merge, default_workers, histogram_merge, run_plan, union_merge,
)
from quadcount.errors import ArgumentError, PlanError
from quadcount.four import compute_profiles, four_profile_plan

from conftest import random_graphs


def _noop(g, state, lo, hi, scratch):
    return None


def _neighbor_ids_plan():
    def alloc(g, state):
        return {"ids": np.zeros(g.n, dtype=np.int64)}

    def body(g, state, lo, hi, scratch):
        state["ids"][lo:hi] = g.degree[lo:hi]

    return PhasePlan((Phase("ids", "gather", "vertex", body, writes=("ids",), alloc=alloc,
                            payload=lambda g, s: s["ids"]),))


def test_validate_rejects_read_before_write():
    plan = PhasePlan((Phase("a", "gather", "vertex", _noop, reads=("x",), writes=("y",)),))
    with pytest.raises(PlanError):
        plan.validate()
    with pytest.raises(PlanError):
        run_plan(G.house_graph(), plan, workers=1)


def test_validate_accepts_declared_inputs():
    plan = PhasePlan((Phase("a", "gather", "vertex", _noop, reads=("x",)),), inputs=("x",))
    plan.validate()
    with pytest.raises(PlanError):
        run_plan(G.house_graph(), plan, workers=1)
    run_plan(G.house_graph(), plan, workers=1, state={"x": 1})


@pytest.mark.parametrize("phase", [
    Phase("a", "reduce", "vertex", _noop),
    Phase("a", "gather", "face", _noop),
    Phase("a", "apply", "vertex", _noop, finish=lambda g, s, m: {}),
])
def test_validate_rejects_bad_phase(phase):
    with pytest.raises(PlanError):
        PhasePlan((phase,)).validate()


def test_validate_rejects_duplicate_names():
    with pytest.raises(PlanError):
        PhasePlan((Phase("a", "apply", "vertex", _noop), Phase("a", "apply", "edge", _noop))).validate()


def test_empty_graph_any_plan():
    res = run_plan(G.empty_graph(0), four_profile_plan(), workers=2)
    assert res.comm.total == 0
    assert res.state["orbits"].shape == (0, 20)
    assert list(res.state["global4"].N) == [0] * 11


def test_single_edge_neighbor_gather():
    res = run_plan(G.path_graph(2), _neighbor_ids_plan(), workers=1)
    assert res.comm.per_phase["ids"].tolist() == [1, 1]
    assert res.comm.total == 2


def test_comm_totals_are_sums(house):
    res = compute_profiles(house, workers=1)
    assert res.comm.total == sum(res.comm.totals.values())
    assert res.comm.per_vertex().sum() == res.comm.total


def test_h_v_matches_sets(zoo):
    for g in zoo.values():
        hv = compute_profiles(g, workers=1).comm.h_v
        for v in range(g.n):
            nb = set(g.neighbors(v).tolist())
            two = set()
            for a in nb:
                two |= set(g.neighbors(a).tolist())
            assert hv[v] == len(two - nb - {v})


def _state_equal(a, b):
    for key in ("local3", "acc", "orbits", "profile", "e16", "hist_targets", "h_v"):
        assert np.array_equal(a.state[key] if hasattr(a, "state") else a[key],
                              b.state[key] if hasattr(b, "state") else b[key]), key


def test_determinism_across_workers_and_schedules():
    for name, g in random_graphs(6, seed=4, nmax=40):
        ref = run_plan(g, four_profile_plan(), workers=1)
        for workers, seed, chunk in ((2, None, None), (8, None, None), (2, 1, 1), (8, 2, 3),
                                     (3, 9, 7)):
            res = run_plan(g, four_profile_plan(), workers=workers, schedule_seed=seed,
                           chunk=chunk)
            _state_equal(ref, res)
            assert res.state["global4"].N == ref.state["global4"].N
            assert res.comm.totals == ref.comm.totals


def test_env_default_workers(monkeypatch):
    monkeypatch.setenv("QUADCOUNT_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("QUADCOUNT_THREADS", "0")
    with pytest.raises(ArgumentError):
        default_workers()
    monkeypatch.setenv("QUADCOUNT_THREADS", "many")
    with pytest.raises(ArgumentError):
        default_workers()
    monkeypatch.delenv("QUADCOUNT_THREADS")
    assert default_workers() == 1


def test_bad_worker_count(house):
    with pytest.raises(ArgumentError):
        run_plan(house, four_profile_plan(), workers=0)


def test_body_errors_propagate_from_workers():
    def body(g, state, lo, hi, scratch):
        if lo > 0:
            raise PlanError("boom")

    plan = PhasePlan((Phase("a", "apply", "vertex", body),))
    with pytest.raises(PlanError):
        run_plan(G.empty_graph(10), plan, workers=4, chunk=2)


def test_merge_fold_is_chunk_order_independent():
    # partial sums are merged in chunk order whatever order workers finished in
    def body(g, state, lo, hi, scratch):
        return [hi - lo, sum(range(lo, hi))]

    plan = PhasePlan((Phase("s", "apply", "vertex", body, writes=("s",), merge=add_merge),))
    for seed in range(5):
        res = run_plan(G.empty_graph(50), plan, workers=4, schedule_seed=seed, chunk=3)
        assert res.state["s"] == [50, sum(range(50))]


@given(st.lists(st.dictionaries(st.integers(0, 20), st.integers(1, 5), max_size=8), min_size=1,
                max_size=12), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_histogram_merge_any_order(parts, seed):
    ref = {}
    for p in parts:
        ref = histogram_merge(ref, p)
    rnd = random.Random(seed)
    for _ in range(100):
        order = parts[:]
        rnd.shuffle(order)
        # random re-association: fold pairwise in a random tree shape
        while len(order) > 1:
            i = rnd.randrange(len(order) - 1)
            order[i:i + 2] = [histogram_merge(order[i], order[i + 1])]
        assert order[0] == ref


@given(st.lists(st.lists(st.integers(-10**12, 10**12), min_size=4, max_size=4), min_size=1,
                max_size=10), st.integers(0, 2**32))
@settings(max_examples=50, deadline=None)
def test_add_and_union_merge_any_order(parts, seed):
    rnd = random.Random(seed)
    ref = parts[0]
    for p in parts[1:]:
        ref = add_merge(ref, p)
    sets = [frozenset(p) for p in parts]
    uref = frozenset().union(*sets)
    for _ in range(100):
        order = parts[:]
        rnd.shuffle(order)
        acc = order[0]
        for p in order[1:]:
            acc = add_merge(p, acc) if rnd.random() < 0.5 else add_merge(acc, p)
        assert acc == ref
        so = sets[:]
        rnd.shuffle(so)
        u = so[0]
        for s in so[1:]:
            u = union_merge(u, s)
        assert u == uref
