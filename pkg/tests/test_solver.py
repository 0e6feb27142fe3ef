import os
import random
import subprocess
import sys

import pytest

from listcsp import _pykernels, kernels
from listcsp.core import Assignment, Constraint, CspInstance, MultiAssignment, evaluate_list
from listcsp.errors import InvalidInput, Uncoverable
from listcsp.generators import random_instance
from listcsp.product import example1_instance
from listcsp.reductions import SetCoverInstance, partition_system
from listcsp.solver import (
    _candidate_masks,
    _encode,
    all_solutions,
    brute_list_solve,
    brute_min_cover,
    count_solutions,
    solve,
)
from oracles import brute_list_sat, brute_min_cover_size, brute_solutions, equality, triangle

try:
    from listcsp import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def test_solve_examples():
    assert solve(equality()) == Assignment.total((1, 1))
    assert solve(triangle()) is None
    for n in range(3, 9):
        assert solve(example1_instance(n)) is None


@pytest.mark.parametrize("seed", range(60))
def test_solve_matches_enumeration(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(1, 4), rng.randint(1, 3), 0.7, rng.random())
    expected = brute_solutions(inst)
    got = solve(inst)
    if not expected:
        assert got is None
    else:
        assert got.values == expected[0]
    assert [a.values for a in all_solutions(inst)] == expected
    assert count_solutions(inst) == len(expected)


def test_solve_with_unsorted_and_sparse_domains():
    inst = CspInstance(((7, 3), (10, 2)), (Constraint(0, 1, frozenset({(3, 2), (7, 10)})),))
    assert solve(inst) == Assignment.total((7, 10))
    assert [a.values for a in all_solutions(inst)] == [(7, 10), (3, 2)]


def test_self_loops_are_folded():
    inst = CspInstance(((0, 1, 2),), (Constraint(0, 0, frozenset({(2, 2), (0, 1)})),))
    assert [a.values for a in all_solutions(inst)] == [(2,)]


def test_all_solutions_limit():
    inst = CspInstance(((0, 1, 2),) * 3)
    assert len(all_solutions(inst, limit=5)) == 5
    assert count_solutions(inst) == 27


# -- list search ------------------------------------------------------------


def test_triangle_two_lists_are_full():
    res = brute_list_solve(triangle(), 2)
    assert res.found
    assert res.witness == MultiAssignment({x: (0, 1) for x in range(3)})


def test_list_search_r1_agrees_with_solve():
    for seed in range(30):
        inst = random_instance(seed, 4, 3, 0.8, 0.6)
        res = brute_list_solve(inst, 1)
        assert res.found == (solve(inst) is not None)


def test_full_domain_lists_always_work_for_nonempty_relations():
    inst = random_instance(5, 5, 3, 1.0, 0.8)
    inst = CspInstance(inst.domains, tuple(c for c in inst.constraints if c.pairs))
    res = brute_list_solve(inst, 3)
    assert res.found


def test_list_search_budget_is_inconclusive():
    inst = example1_instance(8)
    res = brute_list_solve(inst, 1, budget=3)
    assert res.status == "budget"
    assert not res.found


def test_list_search_rejects_bad_r():
    with pytest.raises(InvalidInput):
        brute_list_solve(triangle(), 0)


@pytest.mark.parametrize("seed", range(40))
def test_list_search_matches_enumeration(seed):
    rng = random.Random(1000 + seed)
    inst = random_instance(rng, rng.randint(2, 3), rng.randint(1, 3), 0.9, rng.random())
    for r in (1, 2):
        res = brute_list_solve(inst, r)
        assert res.found == brute_list_sat(inst, r)
        if res.found:
            report = evaluate_list(inst, res.witness)
            assert report.list_satisfied and report.max_size <= r


def test_candidate_order_is_largest_first():
    assert _candidate_masks(3, 2) == [0b011, 0b101, 0b110, 0b001, 0b010, 0b100]


# -- minimum cover ----------------------------------------------------------


def test_whole_universe_set():
    sc = SetCoverInstance((1, 2, 3), {"U": {1, 2, 3}, "a": {1}}, 1)
    best = brute_min_cover(sc, 3)
    assert (best.size, best.cover, best.exact) == (1, ("U",), True)


def test_partition_system_needs_a_full_row():
    ps = partition_system(2, 2)
    sc = SetCoverInstance(ps.universe, {f"P{x}{y}": s for (x, y), s in ps.sets.items()}, 2)
    best = brute_min_cover(sc, 4)
    assert best.size == 2 and best.exact
    assert best.cover in (("P11", "P12"), ("P21", "P22"))


def test_disjoint_singletons():
    sc = SetCoverInstance((1, 2, 3), {"a": {1}, "b": {2}, "c": {3}}, 3)
    assert brute_min_cover(sc, 3).size == 3
    assert brute_min_cover(sc, 2) is None


def test_uncoverable_and_bad_limit():
    sc = SetCoverInstance((1, 2), {"a": {1}}, 1)
    with pytest.raises(Uncoverable):
        brute_min_cover(sc, 2)
    with pytest.raises(InvalidInput):
        brute_min_cover(sc, -1)


def test_min_cover_not_exact_when_overlap_is_forced():
    sc = SetCoverInstance((1, 2, 3), {"a": {1, 2}, "b": {2, 3}}, 2)
    best = brute_min_cover(sc, 2)
    assert best.size == 2 and not best.exact


@pytest.mark.parametrize("seed", range(30))
def test_min_cover_matches_enumeration(seed):
    rng = random.Random(seed)
    universe = tuple(range(rng.randint(1, 8)))
    sets = {f"s{i}": frozenset(e for e in universe if rng.random() < 0.35) for i in range(rng.randint(1, 7))}
    sets["all"] = frozenset(universe) if rng.random() < 0.2 else sets.get("s0", frozenset())
    sc = SetCoverInstance(universe, sets, 2)
    covered = set().union(*sets.values())
    if covered != set(universe):
        with pytest.raises(Uncoverable):
            brute_min_cover(sc, 4)
        return
    best = brute_min_cover(sc, 4)
    expected = brute_min_cover_size(universe, sets, 4)
    assert (best.size if best else None) == expected
    if best:
        assert sc.covers(best.cover)


# -- backends ---------------------------------------------------------------


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@pytest.mark.parametrize("seed", range(25))
def test_backends_match_reference(mod, seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(1, 6), rng.randint(1, 4), 0.6, rng.random())
    init, cons = _encode(inst)
    ref = _pykernels.solve_all(init, cons, 10**6)
    assert mod.solve_all(init, cons, 10**6) == ref
    assert mod.solve_first(init, cons) == (ref[0] if ref else None)
    _, lcons = _encode(inst, fold_self_loops=False)
    cands = [_candidate_masks(len(d), 2) for d in inst.domains]
    assert mod.list_search(inst.var_count, lcons, cands, 10**6) == _pykernels.list_search(
        inst.var_count, lcons, cands, 10**6
    )
    masks = [rng.getrandbits(10) for _ in range(6)] + [(1 << 10) - 1]
    full = (1 << 10) - 1
    assert mod.min_cover(masks, full, 3) == _pykernels.min_cover(masks, full, 3)
    for size in range(1, 4):
        assert mod.exact_cover_exists(masks, full, size) == _pykernels.exact_cover_exists(masks, full, size)


def test_wide_domains_fall_back_to_python():
    n = 70
    inst = CspInstance(
        (tuple(range(n)), tuple(range(n))),
        (Constraint(0, 1, frozenset((a, a) for a in range(n) if a % 7 == 3)),),
    )
    assert solve(inst) == Assignment.total((3, 3))
    assert count_solutions(inst) == 10
    assert brute_list_solve(inst, 1).found


def test_pure_python_switch():
    env = dict(os.environ, LISTCSP_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from listcsp import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_compiled_backend_selected_by_default():
    assert kernels.BACKEND == "cython"
