import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from listcsp.core import Assignment, MultiAssignment, evaluate
from listcsp.errors import InvalidInput, SizeCapExceeded, TriviallyUnsatisfiable
from listcsp.generators import planted_instance, random_instance
from listcsp.product import (
    bipartite_product,
    direct_product,
    example1_avg_bound,
    example1_instance,
    example1_lists,
    lex_superset,
    lift,
    partial_satisfying_assignments,
    restrict_product_lists,
)
from listcsp.solver import brute_list_solve, solve
from oracles import brute_solutions, equality, local_solutions, triangle


def test_partial_assignments_examples():
    got = partial_satisfying_assignments(triangle(), {0, 1})
    assert [a.values for a in got] == [(0, 1), (1, 0)]
    got = partial_satisfying_assignments(equality(), {0, 1})
    assert [a.values for a in got] == [(1, 1), (2, 2)]
    got = partial_satisfying_assignments(equality(), {1})
    assert [a.values for a in got] == [(1,), (2,)]


def test_partial_assignments_bad_subset():
    with pytest.raises(InvalidInput):
        partial_satisfying_assignments(triangle(), set())
    with pytest.raises(InvalidInput):
        partial_satisfying_assignments(triangle(), {0, 5})


@pytest.mark.parametrize("seed", range(20))
def test_partial_assignments_match_enumeration(seed):
    inst = random_instance(seed, 5, 3, 0.7, 0.5)
    for size in (1, 2, 3):
        for s in combinations(range(5), size):
            got = [a.values for a in partial_satisfying_assignments(inst, s)]
            assert got == local_solutions(inst, s)
            assert all(a.vars == s for a in partial_satisfying_assignments(inst, s))


def test_product_sizes():
    inst = random_instance(1, 4, 2)
    assert len(direct_product(inst, 2).variables) == 6
    p = direct_product(triangle(), 2)
    assert all(len(p.domain(s)) == 2 for s in p.variables)
    assert p.constraint_count() == 3


def test_full_product_domain_is_the_solution_set():
    inst, _ = planted_instance(3, 4, 3)
    p = direct_product(inst, 4)
    assert p.variables == ((0, 1, 2, 3),)
    assert [a.values for a in p.domain((0, 1, 2, 3))] == brute_solutions(inst)


def test_product_range_errors():
    with pytest.raises(InvalidInput):
        direct_product(triangle(), 0)
    with pytest.raises(InvalidInput):
        direct_product(triangle(), 4)
    for a, b in [(2, 2), (2, 1), (0, 2), (1, 4)]:
        with pytest.raises(InvalidInput):
            bipartite_product(triangle(), a, b)


def test_bipartite_sides():
    inst = random_instance(2, 4, 2)
    p = bipartite_product(inst, 1, 2)
    assert len(p.left) == 4 and len(p.right) == 6
    assert p.constraint_count() == 24
    # constraints run across sides only, and disjoint pairs are skipped
    pairs = list(p.constraint_pairs())
    assert all(len(s) == 1 and len(t) == 2 and set(s) <= set(t) for s, t in pairs)
    assert len(list(p.constraint_pairs(include_vacuous=True))) == 24


def test_bipartite_consistency_is_restriction_equality():
    inst, _ = planted_instance(4, 4, 2)
    p = bipartite_product(inst, 1, 3)
    for s, t in p.constraint_pairs():
        rel = p.materialize(s, t)
        for i, a in enumerate(p.domain(s)):
            for j, b in enumerate(p.domain(t)):
                assert ((i, j) in rel) == (b.restrict(s) == a)


def test_disjoint_pairs_are_vacuous():
    inst, _ = planted_instance(5, 4, 2)
    p = bipartite_product(inst, 1, 2)
    rel = p.materialize((0,), (2, 3))
    assert len(rel) == len(p.domain((0,))) * len(p.domain((2, 3)))


def test_materialization_cap(monkeypatch):
    inst, _ = planted_instance(6, 4, 3, 0.3, 0.1)
    p = direct_product(inst, 2, cap=2)
    assert p.materialize((0, 1), (1, 2)) is None
    with pytest.raises(SizeCapExceeded):
        p.to_csp()
    monkeypatch.setenv("LISTCSP_SIZE_CAP", "3")
    assert direct_product(inst, 2).cap == 3


def test_to_csp_round_trip_with_solver():
    inst, _ = planted_instance(7, 4, 2)
    explicit, order = direct_product(inst, 2).to_csp()
    assert len(order) == 6
    assert solve(explicit) is not None


def test_triangle_product_is_not_one_list_satisfiable():
    explicit, _ = direct_product(triangle(), 2).to_csp()
    assert brute_list_solve(explicit, 1).status == "none"


def test_empty_product_domain_is_flagged():
    inst = example1_instance(4)
    p = direct_product(inst, 4)
    assert p.trivially_unsatisfiable
    with pytest.raises(TriviallyUnsatisfiable):
        p.to_csp()


def test_parallel_domains_match_serial():
    inst = random_instance(11, 6, 3)
    assert direct_product(inst, 3, jobs=2).domains == direct_product(inst, 3).domains


# -- lifting ----------------------------------------------------------------


def test_lift_equality():
    p = direct_product(equality(), 2)
    m = lift(Assignment.total((1, 1)), p)
    assert dict(m.items()) == {(0, 1): frozenset({Assignment((0, 1), (1, 1))})}


def test_lift_satisfies_every_consistency_check():
    inst, sol = planted_instance(8, 5, 3)
    for t in (1, 2, 3):
        p = direct_product(inst, t)
        report = p.evaluate_list(lift(sol, p))
        assert report.list_satisfied and report.max_size == 1


def test_lift_rejects_unsatisfying_assignment():
    with pytest.raises(InvalidInput):
        lift(Assignment.total((1, 2)), direct_product(equality(), 2))


def test_check_lists_rejects_foreign_values():
    p = direct_product(triangle(), 2)
    bad = {s: (Assignment(s, (0, 0)),) for s in p.variables}
    with pytest.raises(InvalidInput):
        p.evaluate_list(MultiAssignment(bad))
    with pytest.raises(InvalidInput):
        p.evaluate_list(MultiAssignment({(0, 1): (Assignment((0, 1), (0, 1)),)}))


# -- restriction to smaller subsets -----------------------------------------


def test_lex_superset():
    assert lex_superset((3,), 3, 5) == (0, 1, 3)
    assert lex_superset((0, 4), 2, 5) == (0, 4)
    with pytest.raises(InvalidInput):
        lex_superset((0, 1), 1, 5)
    with pytest.raises(InvalidInput):
        lex_superset((0,), 6, 5)


def test_restrict_lifted_lists():
    inst, sol = planted_instance(9, 5, 3)
    m = lift(sol, direct_product(inst, 3))
    u, v = restrict_product_lists(m, 1, 3)
    assert u.max_size == 1 and v.max_size == 1
    assert all(u[s] == {sol.restrict(s)} for s in u)
    assert dict(v.items()) == dict(m.items())


@pytest.mark.parametrize("seed", range(10))
def test_restriction_never_grows_lists(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, 5, 2, 0.5, 0.3)
    p = direct_product(inst, 3)
    if p.trivially_unsatisfiable:
        return
    m = MultiAssignment({s: rng.sample(p.domain(s), rng.randint(1, len(p.domain(s)))) for s in p.variables})
    u, v = restrict_product_lists(m, 1, 2)
    assert u.max_size <= m.max_size and v.max_size <= m.max_size
    assert set(u) == set(combinations(range(5), 1))
    assert set(v) == set(combinations(range(5), 2))


def test_restrict_product_lists_errors():
    m = lift(Assignment.total((1, 1)), direct_product(equality(), 2))
    with pytest.raises(InvalidInput):
        restrict_product_lists(m, 1, 3)
    with pytest.raises(InvalidInput):
        restrict_product_lists(MultiAssignment({(0, 1): (Assignment((0, 1), (1, 1)),), (0,): (1,)}), 1, 1)


# -- the average-list family ------------------------------------------------


def test_example1_shape():
    inst = example1_instance(4)
    assert len(inst.constraints) == 3
    assert inst.domains == ((2, 3, 4), (1,), (1,), (1,))
    assert solve(inst) is None
    with pytest.raises(InvalidInput):
        example1_instance(2)


def test_example1_value_i_violates_exactly_constraint_i():
    inst = example1_instance(4)
    a = Assignment.total((3, 1, 1, 1))
    broken = [c.v + 1 for c in inst.constraints if (a[c.u], a[c.v]) not in c.pairs]
    assert broken == [3]


def test_example1_n3_every_value_is_blocked():
    inst = example1_instance(3)
    assert inst.domains[0] == (2, 3)
    for j in (2, 3):
        assert not evaluate(inst, Assignment.total((j, 1, 1)))


def test_example1_lists_n4_t2():
    m = example1_lists(4, 2)
    assert m.avg_size == Fraction(3, 2)
    assert direct_product(example1_instance(4), 2).evaluate_list(m).list_satisfied
    assert m.avg_size <= example1_avg_bound(4, 2) == 3


def _closed_form(n, t):
    with_special = sum(
        sum(1 for j in range(2, 2 * t + 1) if j - 1 not in s)
        for s in combinations(range(n), t) if 0 in s
    )
    return Fraction(comb(n - 1, t) + with_special, comb(n, t))


@pytest.mark.parametrize("n,t", [(n, t) for n in range(3, 9) for t in (1, 2, 3) if n >= 2 * t])
def test_example1_lists_family(n, t):
    m = example1_lists(n, t)
    assert m.avg_size == _closed_form(n, t)
    assert m.avg_size <= example1_avg_bound(n, t)
    assert direct_product(example1_instance(n), t).evaluate_list(m).list_satisfied


@pytest.mark.parametrize("n,t", [(n, t) for n in range(3, 9) for t in (2, 3) if n >= 2 * t])
def test_example1_pairs_share_a_spare_label(n, t):
    m = example1_lists(n, t)
    for s, t2 in combinations([s for s in m if 0 in s], 2):
        spare = [j for j in range(2, 2 * t + 1) if j - 1 not in s and j - 1 not in t2]
        assert spare
        shared = {a[0] for a in m[s]} & {b[0] for b in m[t2]}
        assert set(spare) <= shared


def test_example1_lists_bounds():
    with pytest.raises(InvalidInput):
        example1_lists(5, 3)


def test_example1_lists_violate_singleton_bound_everywhere():
    report = direct_product(example1_instance(6), 2).evaluate_list(example1_lists(6, 2))
    assert report.max_size == 3 and report.avg_size == Fraction(22, 15)


def test_product_domains_hold_only_local_solutions():
    inst, _ = planted_instance(12, 5, 3)
    p = direct_product(inst, 3)
    for s in p.variables:
        assert [a.values for a in p.domain(s)] == local_solutions(inst, s)
