import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, complete_links, ring
from wcap.bench import (
    CSV_HEADER,
    Instance,
    RunRecord,
    default_taus,
    geometric_mean,
    load_instance,
    performance_profile,
    read_records,
    run_grid,
    run_solve,
    write_profile,
    write_records,
)
from wcap.cactus import CactusGraph, LinkGraph, build_link_graph
from wcap.heuristics import gwc


def rec(instance, algo, status="ok", cost=None, seed=1, time_ms=1, peak_kb=0):
    if status == "ok" and cost is None:
        cost = Fraction(1)
    return RunRecord(instance, algo, seed, status, None if cost is None else Fraction(cost), time_ms, peak_kb)


def fractions_at(points, tau):
    return {p.algo: p.fraction for p in points if p.tau == tau}


def test_run_solve_trivial():
    c = CactusGraph.from_edges(2, [(1, 2)])
    lg = build_link_graph(c, [(1, 2, 5)])
    r = run_solve(Instance("edge", c, lg), "gwc", seed=1)
    assert r.status == "ok" and r.cost == gwc(c, lg).total_cost == 5
    assert r.time_ms >= 0 and r.peak_kb >= 0


def test_run_solve_timeout_keeps_incumbent():
    c = ring(60)
    r = run_solve(Instance("ring60", c, complete_links(c)), "exact", seed=1, time_limit=0.001)
    assert r.status == "timeout" and r.cost is not None


def test_run_solve_infeasible():
    r = run_solve(Instance("bare", ring(4), LinkGraph(())), "mst", seed=1)
    assert r.status == "infeasible" and r.cost is None


@pytest.mark.parametrize("algo", ["gwc", "mst", "mst+ls3", "mst+ls5", "smc", "exact"])
def test_every_algorithm_on_fixture(ring8_instance, algo):
    c, lg = ring8_instance
    r = run_solve(Instance("ring8", c, lg), algo, seed=1)
    assert r.status == "ok" and r.cost in (4, 5)


def test_record_invariants():
    with pytest.raises(ValueError):
        RunRecord("a", "gwc", 1, "ok", None, 1, 0)
    with pytest.raises(ValueError):
        RunRecord("a", "gwc", 1, "infeasible", Fraction(1), 1, 0)
    with pytest.raises(ValueError):
        RunRecord("a", "gwc", 1, "done", None, 1, 0)
    with pytest.raises(ValueError):
        RunRecord("a", "gwc", 1, "timeout", None, -1, 0)


@pytest.mark.parametrize("values, expected", [([4], 4), ([1, 100], 10), ([2, 8, 4], 4)])
def test_geometric_mean(values, expected):
    assert geometric_mean(values) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("values", [[], [0, 1], [-2, 3]])
def test_geometric_mean_rejects(values):
    with pytest.raises(ValueError):
        geometric_mean(values)


def test_profile_single_algorithm():
    records = [rec(f"i{i}", "a", cost=i + 1) for i in range(3)]
    assert all(p.fraction == 1 for p in performance_profile(records))


def test_profile_two_algorithms():
    records = [rec("x", "a", cost=10), rec("x", "b", cost=12)]
    points = performance_profile(records, taus=[1, Fraction(6, 5)])
    assert fractions_at(points, 1) == {"a": 1, "b": 0}
    assert fractions_at(points, Fraction(6, 5)) == {"a": 1, "b": 1}


def test_profile_unsolved_counts_in_denominator():
    records = [rec(f"i{i}", "a", cost=1) for i in range(4)]
    records[2] = rec("i2", "a", status="timeout", cost=1)
    records += [rec(f"i{i}", "b", cost=2) for i in range(4)]
    points = performance_profile(records)
    assert max(p.fraction for p in points if p.algo == "a") == Fraction(3, 4)


def test_profile_empty():
    with pytest.raises(ValueError):
        performance_profile([])


def test_default_taus():
    taus = default_taus()
    assert taus[0] == 1 and taus[-1] == 3 and len(taus) == 201


record_lists = st.lists(
    st.tuples(
        st.sampled_from(["i1", "i2", "i3", "i4"]),
        st.sampled_from(["gwc", "mst", "smc"]),
        st.integers(1, 3),
        st.sampled_from(["ok", "ok", "ok", "timeout", "infeasible", "memlimit"]),
        st.fractions(min_value=Fraction(1, 100), max_value=100),
        st.integers(0, 10**6),
        st.integers(0, 10**7),
    ),
    min_size=1,
    max_size=30,
    unique_by=lambda t: (t[0], t[1], t[2]),
)


def _records(rows):
    out = []
    for inst, algo, seed, status, cost, t, kb in rows:
        keep = status in ("ok", "timeout")
        out.append(RunRecord(inst, algo, seed, status, cost if keep else None, t, kb))
    return out


@settings(max_examples=100, deadline=None)
@given(record_lists, st.sampled_from(["cost", "time", "mem"]))
def test_profile_monotone(rows, metric):
    records = _records(rows)
    if metric != "cost":
        records = [r for r in records if r.status != "ok" or (r.time_ms > 0 and r.peak_kb > 0)] or records
    points = performance_profile(records, metric)
    by_algo = {}
    for p in points:
        by_algo.setdefault(p.algo, []).append(p)
    for algo_points in by_algo.values():
        fr = [p.fraction for p in algo_points]
        assert fr == sorted(fr) and all(0 <= x <= 1 for x in fr)
    # every instance with an ok record has a winner at tau = 1
    solved = {(r.instance, r.seed) for r in records if r.status == "ok"}
    problems = {(r.instance, r.seed) for r in records}
    at_one = sum(p.fraction for p in points if p.tau == 1)
    assert at_one * len(problems) >= len(solved)


@settings(max_examples=60, deadline=None)
@given(record_lists)
def test_csv_round_trip(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("csv") / "r.csv"
    records = _records(rows)
    write_records(records, path)
    assert read_records(path) == sorted(records, key=RunRecord.key)
    assert path.read_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_write_profile(tmp_path):
    points = performance_profile([rec("x", "a", cost=10), rec("x", "b", cost=12)], taus=[1, 2])
    write_profile(points, tmp_path / "p.csv")
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "algo,tau,fraction" and "b,1.0000,0.000000" in lines


def test_load_instance_with_pi():
    inst = load_instance(DATA / "fig1.cactus", DATA / "fig1.links", DATA / "fig1.pi")
    assert inst.id == "fig1" and inst.cactus.n == 4
    # the 2-3 link collapses onto one cactus vertex
    assert len(inst.links) < 8


def test_load_instance_scaled():
    inst = load_instance(DATA / "fig1.cactus", DATA / "fig1.links", DATA / "fig1.pi", scale=True)
    assert max(l.cost for l in inst.links) <= 1


def _grid(tmp_path, jobs=None):
    grid = {
        "algorithms": ["gwc", "mst", "exact"],
        "seeds": [1, 2],
        "instances": [
            {"id": "ring8", "cactus": str(DATA / "ring8.cactus"), "links": str(DATA / "ring8_unit.links")},
            {"id": "c9", "random": {"n": 9, "cycles": 3}, "costs": "u9"},
            {"id": "star6", "special": {"kind": "star", "n": 6}, "costs": "u2"},
        ],
    }
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid))
    return path


def test_grid_order_and_parallel(tmp_path):
    path = _grid(tmp_path)
    serial = run_grid(path)
    assert [r.key() for r in serial] == sorted(r.key() for r in serial)
    assert len(serial) == 3 * 2 * 3
    parallel = run_grid(path, jobs=2)
    strip = lambda rs: [(r.key(), r.status, r.cost) for r in rs]  # noqa: E731
    assert strip(serial) == strip(parallel)


def test_grid_rejects_unknown_algorithm(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"algorithms": ["magic"], "instances": []}))
    with pytest.raises(ValueError):
        run_grid(path)


def test_grid_bad_instance_is_recorded(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"algorithms": ["gwc"], "seeds": [1], "instances": [{"id": "bad", "random": {"n": 4, "cycles": 3}}]}))
    (r,) = run_grid(path)
    assert r.status == "error" and r.cost is None
    assert not math.isnan(r.time_ms)
