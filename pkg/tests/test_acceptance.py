"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
import time
import warnings
from fractions import Fraction
from itertools import combinations, product
from math import comb

import pytest

from listcsp.core import (
    Assignment,
    ClosureWitness,
    Constraint,
    CspInstance,
    evaluate,
    evaluate_list,
    rectangular_decompose,
)
from listcsp.decoder import BipartiteListAssignment, DecodeParams, ParameterWarning, decode, decode_unit
from listcsp.errors import Uncoverable
from listcsp.generators import planted_instance, random_rectangular_instance, random_rectangular_relation
from listcsp.product import direct_product, example1_avg_bound, example1_instance, example1_lists, lift
from listcsp.reductions import cover_to_lists, csp_to_exactcover, partition_system, set_name
from listcsp.solver import all_solutions, brute_list_solve, brute_min_cover, solve
from oracles import brute_list_sat, brute_solutions, closed_under_rectangles, two_solution_instance


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def _closed_form_avg(n, t):
    # subsets without variable 0 keep one value; a subset with 0 keeps the labels 2..2t it leaves free
    with_zero = sum(
        sum(1 for j in range(2, 2 * t + 1) if j - 1 not in s)
        for s in combinations(range(n), t) if 0 in s
    )
    return Fraction(comb(n - 1, t) + with_zero, comb(n, t))


def test_criterion_1_average_list_family(report):
    failures, slowest = [], 0.0
    cases = [(n, t) for n in (4, 6, 8) for t in (2, 3) if n >= 2 * t]
    for n, t in cases:
        start = time.perf_counter()
        inst = example1_instance(n)
        m = example1_lists(n, t)
        unsat = solve(inst) is None
        sat_lists = direct_product(inst, t).evaluate_list(m).list_satisfied
        avg_ok = m.avg_size == _closed_form_avg(n, t) and m.avg_size <= 1 + Fraction(2 * t * t, n)
        avg_ok = avg_ok and example1_avg_bound(n, t) == 1 + Fraction(2 * t * t, n)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if not (unsat and sat_lists and avg_ok and elapsed < 10):
            failures.append((n, t))
    assert example1_lists(4, 2).avg_size == Fraction(3, 2)
    report(1, not failures, f"{len(cases)} (n,t) cases, failures {failures}, slowest {slowest:.2f}s")


def test_criterion_2_lift_completeness(report):
    rng = random.Random(2)
    start = time.perf_counter()
    failures = 0
    runs = 0
    for seed in range(200):
        inst, _ = planted_instance(seed, rng.randint(3, 6), rng.randint(1, 3), rng.uniform(0.3, 1.0), rng.random())
        sol = solve(inst)
        for t in (2, 3):
            if t > inst.var_count:
                continue
            runs += 1
            rep = direct_product(inst, t).evaluate_list(lift(sol, direct_product(inst, t)))
            failures += not (rep.list_satisfied and rep.max_size == 1)
    elapsed = time.perf_counter() - start
    report(2, failures == 0 and elapsed < 60, f"{runs} lifts, {failures} failures, {elapsed:.1f}s")


def test_criterion_3_decoder_soundness(report):
    violations = returned = certified = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        for seed in range(100):
            rng = random.Random(3000 + seed)
            n = rng.randint(3, 7)
            inst, s1, s2 = two_solution_instance(rng, n, rng.randint(2, 3))
            sols = [Assignment.total(s1), Assignment.total(s2)][: rng.randint(1, 2)]
            a = rng.randint(1, n - 1)
            b = rng.randint(a + 1, n)
            r = q = rng.randint(1, 2)

            # consistent runs keep the first solution in every list; noisy runs pick freely
            consistent = rng.random() < 0.7

            def pick(sub, size):
                chosen = rng.sample(sols, min(size, len(sols)))
                if consistent and sols[0] not in chosen:
                    chosen[0] = sols[0]
                return {x.restrict(sub) for x in chosen}

            u = {s: pick(s, rng.randint(1, r)) for s in combinations(range(n), a)}
            v = {t: pick(t, rng.randint(1, q)) for t in combinations(range(n), b)}
            ba = BipartiteListAssignment(inst, a, b, u, v, r, q)
            params = DecodeParams(k={2: 1}, a_prime={2: 1}, b_prime={2: 1}, unit_b=min(2, n))
            out = decode(ba, override=True, params=params, strict_premises=True)
            if out.ok:
                returned += 1
                violations += not evaluate(inst, out.assignment)
            else:
                certified += 1
                violations += not out.certificate.recheck()
    report(3, violations == 0, f"{returned} assignments, {certified} certificates, {violations} violations")


def test_criterion_4_unit_base_case(report):
    failures = 0
    for seed in range(50):
        rng = random.Random(4000 + seed)
        inst, s1, _ = two_solution_instance(rng, rng.randint(2, 6), rng.randint(2, 3))
        sol = Assignment.total(s1)
        ba = BipartiteListAssignment.from_solutions(inst, 1, 2, [sol], [sol])
        out = decode_unit(ba, 1, strict_premises=True)
        read = Assignment.total(tuple(next(iter(ba.u((x,)))).values[0] for x in range(inst.var_count)))
        failures += not (out.ok and out.assignment == read and evaluate(inst, out.assignment))
    report(4, failures == 0, f"50 base-case runs, {failures} failures")


# 3 variables, every pair constrained; relations are sampled subsets of the full pair set
GRAPH = [(0, 1), (1, 2), (0, 2)]
DOMAIN_SHAPES = [(3, 3, 3), (2, 3, 3), (3, 2, 1), (2, 2, 2), (1, 3, 2)]


def test_criterion_5_oracle_agreement(report):
    rng = random.Random(5)
    start = time.perf_counter()
    disagreements = 0
    for i in range(500):
        sizes = DOMAIN_SHAPES[i % len(DOMAIN_SHAPES)]
        domains = tuple(tuple(range(s)) for s in sizes)
        cons = []
        for u, v in GRAPH:
            full = list(product(domains[u], domains[v]))
            mask = rng.getrandbits(len(full))
            cons.append(Constraint(u, v, frozenset(p for j, p in enumerate(full) if mask >> j & 1)))
        inst = CspInstance(domains, tuple(cons))
        expected = brute_solutions(inst)
        got = solve(inst)
        disagreements += (got is None) != (not expected)
        disagreements += got is not None and got.values != expected[0]
        disagreements += [a.values for a in all_solutions(inst)] != expected
        for r in (1, 2):
            disagreements += brute_list_solve(inst, r).found != brute_list_sat(inst, r)
    elapsed = time.perf_counter() - start
    report(5, disagreements == 0 and elapsed < 120, f"500 instances, {disagreements} disagreements, {elapsed:.1f}s")


def test_criterion_6_exact_cover_completeness(report):
    rng = random.Random(6)
    failures = 0
    for seed in range(100):
        inst, sol = random_rectangular_instance(6000 + seed, rng.randint(2, 4), rng.randint(1, 3), satisfiable=True)
        sc, _ = csp_to_exactcover(inst)
        cover = [set_name(x, v) for x, v in sol.items()]
        chosen = [sc.sets[name] for name in cover]
        disjoint = all(not (p & q) for p, q in combinations(chosen, 2))
        covers = set().union(*chosen) == set(sc.universe)
        failures += not (len(cover) == sc.k and disjoint and covers and sc.is_exact(cover))
    report(6, failures == 0, f"100 satisfiable instances, {failures} failures")


def test_criterion_7_exact_cover_soundness(report):
    rng = random.Random(7)
    over_limit = mapped = violations = 0
    for seed in range(50):
        inst = random_rectangular_instance(7000 + seed, rng.randint(2, 3), 2, satisfiable=False, all_constrained=True)
        assert solve(inst) is None
        sc, backmap = csp_to_exactcover(inst)
        try:
            best = brute_min_cover(sc, 2 * sc.k)
        except Uncoverable:
            best = None
        if best is None:
            over_limit += 1
            continue
        # a cover within 2k sets must exceed k and read back as lists of average |cover|/k
        m = cover_to_lists(best.cover, backmap, sc)
        rep = evaluate_list(inst, m)
        mapped += 1
        ok = best.size > sc.k and rep.list_satisfied and rep.avg_size == Fraction(best.size, sc.k)
        ok = ok and rep.max_size > 1
        violations += not ok
    report(7, violations == 0,
           f"{over_limit} need more than 2k sets, {mapped} covers mapped to lists, {violations} violations")


def test_criterion_8_partition_system(report):
    start = time.perf_counter()
    mismatches = checked = 0
    for rho in (2, 3, 4):
        ps = partition_system(2, rho)
        universe = set(product((1, 2), repeat=rho))
        assert set(ps.universe) == universe
        keys = [(x, y) for x in range(1, rho + 1) for y in (1, 2)]
        for size in range(len(keys) + 1):
            for chosen in combinations(keys, size):
                checked += 1
                covered = {z for z in universe if any(z[x - 1] == y for x, y in chosen)}
                full_row = any({(x, 1), (x, 2)} <= set(chosen) for x in range(1, rho + 1))
                mismatches += (covered == universe) != full_row
                mismatches += ps.covers(chosen) != full_row
    elapsed = time.perf_counter() - start
    report(8, mismatches == 0 and elapsed < 5, f"{checked} subcollections, {mismatches} mismatches, {elapsed:.2f}s")


def test_criterion_9_rectangularity(report):
    rng = random.Random(9)
    disagreements = rectangular = 0
    for _ in range(1000):
        left = range(rng.randint(1, 6))
        right = range(rng.randint(1, 6))
        if rng.random() < 0.5:
            pairs = random_rectangular_relation(rng, left, right)
        else:
            density = rng.random()
            pairs = frozenset(p for p in product(left, right) if rng.random() < density)
        if not pairs:
            pairs = frozenset({(0, 0)})
        out = rectangular_decompose(pairs)
        closed = closed_under_rectangles(pairs)
        rectangular += closed
        if isinstance(out, ClosureWitness):
            a, a2, b, b2 = out
            valid = {(a, b), (a, b2), (a2, b)} <= pairs and (a2, b2) not in pairs
            disagreements += closed or not valid
        else:
            agree = all(out.related(a, b) == ((a, b) in pairs) for a in left for b in right)
            disagreements += not closed or not agree
    report(9, disagreements == 0, f"1000 relations ({rectangular} rectangular), {disagreements} disagreements")
